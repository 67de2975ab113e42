#include "nbl/sieve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>

#include "nbl/errors.hpp"

namespace nbl {

namespace {

constexpr std::array<char, 4> kMagic = {'N', 'B', 'L', '1'};
// Products of distinct prime factors are kept in 32 bits.
constexpr std::uint64_t kMaxLimit = 0xFFFFFFFFull;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

void check_limit(std::uint64_t n) {
  if (n == 0) throw ArgumentError("sieve limit must be >= 1");
  if (n > kMaxLimit) throw ResourceError("sieve limit above 2^32 - 1 is not supported");
}

std::vector<std::uint8_t> allocate_packed(std::uint64_t n) {
  try {
    return std::vector<std::uint8_t>(packed_size(n), 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate " + std::to_string(packed_size(n)) +
                        " bytes for the Moebius table");
  }
}

// Sieves [lo, hi) (1-based values, lo - 1 divisible by 4) into out.
void sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& primes,
                   std::vector<std::int8_t>& mu, std::vector<std::uint32_t>& prod,
                   std::uint8_t* out) {
  const std::uint64_t len = hi - lo;
  std::fill_n(mu.begin(), len, std::int8_t{1});
  std::fill_n(prod.begin(), len, 1u);
  for (const std::uint32_t p : primes) {
    const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
    if (pp >= hi) break;
    for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
      mu[m - lo] = static_cast<std::int8_t>(-mu[m - lo]);
      prod[m - lo] *= p;
    }
    for (std::uint64_t m = (lo + pp - 1) / pp * pp; m < hi; m += pp) mu[m - lo] = 0;
  }
  // Primes above sqrt(hi) that were never hit: at most one per value.
  for (std::uint64_t i = 0; i < len; ++i) {
    if (mu[i] != 0 && prod[i] != lo + i) mu[i] = static_cast<std::int8_t>(-mu[i]);
  }
  for (std::uint64_t i = 0; i < len; i += 4) {
    std::uint8_t byte = 0;
    for (std::uint64_t r = 0; r < 4 && i + r < len; ++r) {
      byte |= static_cast<std::uint8_t>(encode_mu(mu[i + r]) << (2 * r));
    }
    out[(lo - 1 + i) / 4] = byte;
  }
}

}  // namespace

MobiusTable::MobiusTable(std::uint64_t limit, std::vector<std::uint8_t> packed)
    : limit_(limit), packed_(std::move(packed)) {
  if (limit_ == 0) throw DataError("empty Moebius table");
  if (packed_.size() != packed_size(limit_)) throw DataError("packed Moebius table has wrong length");
  for (std::uint64_t i = 0; i < packed_.size(); ++i) {
    const std::uint8_t b = packed_[i];
    for (int r = 0; r < 4; ++r) {
      const std::uint64_t k = 4 * i + r + 1;
      const unsigned code = (b >> (2 * r)) & 3u;
      if (code == 3 || (k > limit_ && code != 0)) throw DataError("invalid Moebius code in table");
    }
  }
}

MobiusTable sieve_mobius(std::uint64_t n, std::uint64_t segment_size) {
  check_limit(n);
  segment_size = std::max<std::uint64_t>(4, segment_size / 4 * 4);
  const auto primes = small_primes(isqrt(n));
  auto packed = allocate_packed(n);
  const std::uint64_t segments = (n + segment_size - 1) / segment_size;

#pragma omp parallel
  {
    std::vector<std::int8_t> mu(segment_size);
    std::vector<std::uint32_t> prod(segment_size);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(segments); ++s) {
      const std::uint64_t lo = 1 + static_cast<std::uint64_t>(s) * segment_size;
      const std::uint64_t hi = std::min(n + 1, lo + segment_size);
      sieve_segment(lo, hi, primes, mu, prod, packed.data());
    }
  }
  return MobiusTable(n, std::move(packed));
}

MobiusTable sieve_mobius_serial(std::uint64_t n) {
  check_limit(n);
  std::vector<std::int8_t> mu(n + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<char> composite(n + 1, 0);
  mu[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (const std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (m > n) break;
      composite[m] = 1;
      if (i % p == 0) {
        mu[m] = 0;
        break;
      }
      mu[m] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  auto packed = allocate_packed(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    packed[(k - 1) / 4] |= static_cast<std::uint8_t>(encode_mu(mu[k]) << (2 * ((k - 1) % 4)));
  }
  return MobiusTable(n, std::move(packed));
}

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("NB_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::filesystem::path("./.nbcache");
}

std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t n) {
  return dir / ("mobius_" + std::to_string(n) + ".nbl");
}

void write_cache(const std::filesystem::path& file, const MobiusTable& table) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out.write(kMagic.data(), kMagic.size());
    std::array<char, 8> le{};
    for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((table.limit() >> (8 * i)) & 0xFF);
    out.write(le.data(), le.size());
    const auto bytes = table.packed();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<MobiusTable> read_cache(const std::filesystem::path& file) {
  std::error_code ec;
  if (!std::filesystem::exists(file, ec)) return std::nullopt;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cache file " + file.string());
  std::array<char, 4> magic{};
  std::array<unsigned char, 8> le{};
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(le.data()), le.size());
  if (!in || magic != kMagic) throw DataError("cache file " + file.string() + ": bad magic");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(le[i]) << (8 * i);
  const auto size = std::filesystem::file_size(file);
  if (n == 0 || n > kMaxLimit || size != 12 + packed_size(n)) {
    throw DataError("cache file " + file.string() + ": length mismatch");
  }
  std::vector<std::uint8_t> packed(packed_size(n));
  in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!in) throw DataError("cache file " + file.string() + ": truncated");
  return MobiusTable(n, std::move(packed));
}

CachedTable load_or_sieve(std::uint64_t n, const std::filesystem::path& dir,
                          const std::function<void(const std::string&)>& warn) {
  const auto file = cache_path(dir, n);
  try {
    if (auto cached = read_cache(file); cached && cached->limit() == n) {
      return {std::move(*cached), true};
    }
  } catch (const DataError& e) {
    if (warn) warn(std::string(e.what()) + "; regenerating");
  }
  auto table = sieve_mobius(n);
  write_cache(file, table);
  return {std::move(table), false};
}

}  // namespace nbl

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "doctest.h"
#include "nbl/errors.hpp"
#include "nbl/sieve.hpp"

namespace fs = std::filesystem;
using namespace nbl;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nbl_sieve_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::int64_t mertens(const MobiusTable& t, std::uint64_t n) {
  std::int64_t m = 0;
  for (std::uint64_t k = 1; k <= n; ++k) m += t.mu(k);
  return m;
}

}  // namespace

TEST_CASE("segmented sieve matches trial division up to 1e5") {
  const MobiusTable t = sieve_mobius(100000, 4096);
  for (std::uint64_t k = 1; k <= 100000; ++k) REQUIRE(t.mu(k) == nbl_test::mu_naive(k));
}

TEST_CASE("segmented and serial sieves agree for every small limit and odd segment sizes") {
  for (std::uint64_t n = 1; n <= 300; ++n) CHECK(sieve_mobius(n, 7) == sieve_mobius_serial(n));
  CHECK(sieve_mobius(1000003, 1 << 12) == sieve_mobius_serial(1000003));
  CHECK(sieve_mobius(1000003) == sieve_mobius(1000003, 999));
}

TEST_CASE("Mertens values from frozen oracle") {
  const MobiusTable t = sieve_mobius(1000000);
  const int first[] = {1, 0, -1, -1, -2, -1, -2, -2, -2, -1, -2, -2};
  for (int k = 1; k <= 12; ++k) CHECK(mertens(t, k) == first[k - 1]);
  CHECK(mertens(t, 100000) == -48);
  CHECK(mertens(t, 1000000) == 212);
  std::int64_t m = 1;
  std::uint64_t n = 2;
  for (; n < 1000; ++n) {
    m += t.mu(n);
    if (m > 0) break;
  }
  CHECK(n == 94);
}

TEST_CASE("packed layout: 2 bits per value, value k at byte (k-1)/4") {
  const MobiusTable t = sieve_mobius(6);
  // mu(1..6) = 1, -1, -1, 0, -1, 1
  REQUIRE(t.packed().size() == 2);
  CHECK(t.packed()[0] == (1 | (2 << 2) | (2 << 4) | (0 << 6)));
  CHECK(t.packed()[1] == (2 | (1 << 2)));
  CHECK_THROWS_AS(MobiusTable(6, {0x01}), DataError);
  CHECK_THROWS_AS(MobiusTable(4, {0x03}), DataError);
}

TEST_CASE("invalid limits") {
  CHECK_THROWS_AS(sieve_mobius(0), ArgumentError);
  CHECK_THROWS_AS(sieve_mobius_serial(0), ArgumentError);
}

TEST_CASE("cache round trip and file layout") {
  const fs::path dir = scratch("roundtrip");
  const MobiusTable t = sieve_mobius(1001);
  const fs::path file = cache_path(dir, 1001);
  write_cache(file, t);
  CHECK(fs::file_size(file) == 4 + 8 + packed_size(1001));
  std::ifstream in(file, std::ios::binary);
  char head[12];
  in.read(head, 12);
  CHECK(std::string(head, 4) == "NBL1");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(static_cast<unsigned char>(head[4 + i])) << (8 * i);
  CHECK(n == 1001);
  const auto back = read_cache(file);
  REQUIRE(back.has_value());
  CHECK(*back == t);
  CHECK_FALSE(read_cache(dir / "missing.nbl").has_value());
}

TEST_CASE("load_or_sieve reuses and repairs the cache") {
  const fs::path dir = scratch("repair");
  auto first = load_or_sieve(1000, dir);
  CHECK_FALSE(first.cache_hit);
  auto second = load_or_sieve(1000, dir);
  CHECK(second.cache_hit);
  CHECK(second.table == first.table);

  const fs::path file = cache_path(dir, 1000);
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_cache(file), DataError);
  std::string warning;
  auto repaired = load_or_sieve(1000, dir, [&](const std::string& w) { warning = w; });
  CHECK_FALSE(repaired.cache_hit);
  CHECK(warning.find("bad magic") != std::string::npos);
  CHECK(repaired.table == first.table);
  CHECK(load_or_sieve(1000, dir).cache_hit);

  fs::resize_file(file, fs::file_size(file) - 3);
  CHECK_THROWS_AS(read_cache(file), DataError);
  auto again = load_or_sieve(1000, dir, [&](const std::string& w) { warning = w; });
  CHECK(again.table == first.table);
}

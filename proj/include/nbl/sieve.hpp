#pragma once

// Moebius function tables, 2 bits per value.
//
// Encoding per value: 00 -> 0, 01 -> +1, 10 -> -1, 11 reserved (invalid).
// Value k (1-based) lives in byte (k-1)/4 at bit offset 2*((k-1)%4).
//
// Cache file layout: "NBL1" | N as little-endian u64 | ceil(N/4) packed bytes.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nbl {

class MobiusTable {
 public:
  // Takes ownership of packed bytes; throws DataError on a size mismatch or
  // a reserved code.
  MobiusTable(std::uint64_t limit, std::vector<std::uint8_t> packed);

  std::uint64_t limit() const { return limit_; }

  int mu(std::uint64_t k) const {
    const unsigned code = (packed_[(k - 1) >> 2] >> (2 * ((k - 1) & 3))) & 3u;
    return code == 1 ? 1 : (code == 2 ? -1 : 0);
  }

  std::span<const std::uint8_t> packed() const { return packed_; }

  friend bool operator==(const MobiusTable& a, const MobiusTable& b) = default;

 private:
  std::uint64_t limit_;
  std::vector<std::uint8_t> packed_;
};

inline std::uint8_t encode_mu(int mu) { return mu > 0 ? 1 : (mu < 0 ? 2 : 0); }
inline std::uint64_t packed_size(std::uint64_t n) { return (n + 3) / 4; }

// Segmented sieve, segments processed in parallel when OpenMP is enabled.
// Peak extra memory is O(segment_size) per thread on top of the packed output.
MobiusTable sieve_mobius(std::uint64_t n, std::uint64_t segment_size = 1u << 18);

// Serial linear sieve over a full int8 array; the reference implementation
// the segmented kernel is checked against.
MobiusTable sieve_mobius_serial(std::uint64_t n);

// Cache I/O.
std::filesystem::path cache_dir();  // $NB_CACHE_DIR or ./.nbcache
std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t n);
void write_cache(const std::filesystem::path& file, const MobiusTable& table);
// nullopt when the file does not exist; DataError when it is corrupt.
std::optional<MobiusTable> read_cache(const std::filesystem::path& file);

struct CachedTable {
  MobiusTable table;
  bool cache_hit;
};

// Reuses a valid cache file, regenerates (and calls warn) on a corrupt one.
CachedTable load_or_sieve(std::uint64_t n, const std::filesystem::path& dir,
                          const std::function<void(const std::string&)>& warn = {});

}  // namespace nbl

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nbl/profile.hpp"
#include "nbl/sieve.hpp"

namespace nbl_test {

// Profiles shared across test cases, keyed by limit; built once per process.
inline const nbl::ArithProfile& profile(std::uint64_t limit = 100000) {
  static std::mutex m;
  static std::map<std::uint64_t, std::unique_ptr<nbl::ArithProfile>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[limit];
  if (!slot) {
    auto table = std::make_shared<const nbl::MobiusTable>(nbl::sieve_mobius(limit));
    slot = std::make_unique<nbl::ArithProfile>(nbl::build_profile(table, 2.0));
  }
  return *slot;
}

// Trial-division Moebius, independent of both sieves.
inline int mu_naive(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  return n > 1 ? -sign : sign;
}

}  // namespace nbl_test

// Parallel kernels against their serial references; CSV to stdout.
//   nbl_bench [sieve_limit] [norm_n]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include "nbl/beurling.hpp"
#include "nbl/norms.hpp"
#include "nbl/piecewise.hpp"
#include "nbl/profile.hpp"
#include "nbl/rational.hpp"
#include "nbl/sieve.hpp"

namespace {

template <class F>
double time_best(F&& f, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void row(const std::string& kernel, const std::string& size, double serial, double parallel, bool agree) {
  std::cout << kernel << ',' << size << ',' << nbl::shortest_repr(serial) << ',' << nbl::shortest_repr(parallel)
            << ',' << nbl::shortest_repr(serial / parallel) << ',' << (agree ? "true" : "false") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t sieve_limit = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20'000'000;
  const std::uint64_t norm_n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 300;
  std::cout << "kernel,size,serial_seconds,parallel_seconds,speedup,agree\n";

  std::unique_ptr<nbl::MobiusTable> serial_table, parallel_table;
  const double ts = time_best([&] { serial_table = std::make_unique<nbl::MobiusTable>(nbl::sieve_mobius_serial(sieve_limit)); }, 1);
  const double tp = time_best([&] { parallel_table = std::make_unique<nbl::MobiusTable>(nbl::sieve_mobius(sieve_limit)); });
  row("sieve", std::to_string(sieve_limit), ts, tp, *serial_table == *parallel_table);

  auto table = std::make_shared<const nbl::MobiusTable>(nbl::sieve_mobius(std::max<std::uint64_t>(norm_n, 1000)));
  const nbl::ArithProfile profile = nbl::build_profile(table, 2.0);
  nbl::FlattenOptions fo;
  fo.epsilon = 1e-6;
  const auto pw = nbl::to_piecewise(nbl::make_family(nbl::Family::Bn, norm_n, profile),
                                    nbl::Generator{nbl::GeneratorKind::NegChi}, fo);
  for (double p : {1.0, 2.0, 3.0}) {
    nbl::NormReport a{}, b{};
    const double s = time_best([&] { a = nbl::lp_norm_serial(pw, p); });
    const double q = time_best([&] { b = nbl::lp_norm(pw, p); });
    row("lp_norm_p" + nbl::shortest_repr(p), std::to_string(pw.segments.size()), s, q,
        std::abs(a.value - b.value) <= 1e-12 * std::abs(a.value));
  }
  return 0;
}

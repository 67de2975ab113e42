#include "nbl/profile.hpp"

#include <cmath>

#include "nbl/errors.hpp"
#include "nbl/summation.hpp"

namespace nbl {

namespace {

mpq_class make_q(long num, unsigned long den) {
  mpq_class q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

}  // namespace

double power_cell_integral(std::uint64_t k, double p) {
  const double kd = static_cast<double>(k);
  const double step = std::log1p(1.0 / kd);
  if (p == 2.0) return step;
  const double e = 1.0 - 2.0 / p;
  // ((k+1)^e - k^e) / e = k^e * expm1(e log(1 + 1/k)) / e
  return std::pow(kd, e) * std::expm1(e * step) / e;
}

ArithProfile build_profile(std::shared_ptr<const MobiusTable> table, double p,
                           const ProfileOptions& options) {
  if (!table) throw ArgumentError("build_profile: null table");
  if (!(p > 1.0) || !std::isfinite(p)) throw ArgumentError("build_profile: p must lie in (1, inf)");
  ArithProfile prof;
  prof.table_ = table;
  prof.p_ = p;
  prof.limit_ = options.limit == 0 ? table->limit() : options.limit;
  if (prof.limit_ > table->limit()) throw ArgumentError("build_profile: limit exceeds the sieve");
  prof.exact_limit_ = std::min(options.exact_limit, prof.limit_);

  const std::uint64_t n = prof.limit_;
  prof.mertens_.assign(n + 1, 0);
  prof.g_.assign(n + 1, 0.0);
  prof.gamma_.assign(n + 1, 0.0);
  prof.hp_.assign(n + 1, 0.0);
  prof.g_exact_.assign(prof.exact_limit_ + 1, mpq_class(0));
  prof.gamma_exact_.assign(prof.exact_limit_ + 1, mpq_class(0));

  std::int64_t m = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    m += table->mu(k);
    prof.mertens_[k] = static_cast<std::int32_t>(m);
  }

  mpq_class g_q(0);
  mpq_class gamma_q(0);
  for (std::uint64_t k = 1; k <= prof.exact_limit_; ++k) {
    // gamma(k) uses M(k-1); g(k) uses mu(k).
    if (k >= 2) {
      const std::uint64_t j = k - 1;
      if (prof.mertens_[j] != 0) {
        gamma_q += make_q(prof.mertens_[j], static_cast<unsigned long>(j) * static_cast<unsigned long>(k));
      }
    }
    if (const int mu = table->mu(k); mu != 0) {
      g_q += make_q(mu, static_cast<unsigned long>(k));
    }
    prof.g_exact_[k] = g_q;
    prof.gamma_exact_[k] = gamma_q;
    prof.g_[k] = g_q.get_d();
    prof.gamma_[k] = gamma_q.get_d();
  }

  CompensatedSum g_acc(prof.g_[prof.exact_limit_]);
  CompensatedSum gamma_acc(prof.gamma_[prof.exact_limit_]);
  for (std::uint64_t k = prof.exact_limit_ + 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    gamma_acc.add(static_cast<double>(prof.mertens_[k - 1]) / ((kd - 1.0) * kd));
    g_acc.add(static_cast<double>(table->mu(k)) / kd);
    prof.g_[k] = g_acc.value();
    prof.gamma_[k] = gamma_acc.value();
  }

  CompensatedSum h;
  prof.hp_[1] = 0.0;
  for (std::uint64_t k = 1; k < n; ++k) {
    h.add(static_cast<double>(prof.mertens_[k]) * power_cell_integral(k, p));
    prof.hp_[k + 1] = h.value();
  }
  return prof;
}

const mpq_class& ArithProfile::g_exact(std::uint64_t n) const {
  if (n > exact_limit_) throw ArgumentError("g(n) is exact only up to n = " + std::to_string(exact_limit_));
  return g_exact_[n];
}

const mpq_class& ArithProfile::gamma_exact(std::uint64_t n) const {
  if (n > exact_limit_) {
    throw ArgumentError("gamma(n) is exact only up to n = " + std::to_string(exact_limit_));
  }
  return gamma_exact_[n];
}

mpq_class ArithProfile::gamma_piecewise_exact(std::uint64_t n) const {
  if (n > limit_) throw ArgumentError("gamma_piecewise_exact: n beyond profile limit");
  mpq_class total(0);
  for (std::uint64_t k = 1; k + 1 <= n; ++k) {
    if (mertens_[k] == 0) continue;
    // M(k) * [-1/t]_k^{k+1}
    const mpq_class cell = make_q(1, k) - make_q(1, k + 1);
    total += mpq_class(mertens_[k]) * cell;
  }
  return total;
}

double ArithProfile::h_at(std::uint64_t n, double q) const {
  if (!(q > 1.0)) throw ArgumentError("H_q needs q > 1");
  if (n > limit_) throw ArgumentError("H_q: n beyond profile limit");
  CompensatedSum h;
  for (std::uint64_t k = 1; k < n; ++k) {
    h.add(static_cast<double>(mertens_[k]) * power_cell_integral(k, q));
  }
  return h.value();
}

namespace {

int series_sign(const ArithProfile& prof, Series series, std::uint64_t n) {
  auto sign_of = [](double v) { return (v > 0) - (v < 0); };
  switch (series) {
    case Series::Mertens:
      return sign_of(static_cast<double>(prof.mertens(n)));
    case Series::G:
      return prof.has_exact(n) ? sgn(prof.g_exact(n)) : sign_of(prof.g(n));
    case Series::Gamma:
      return prof.has_exact(n) ? sgn(prof.gamma_exact(n)) : sign_of(prof.gamma(n));
    case Series::Hp:
      return sign_of(prof.hp(n));
  }
  return 0;
}

}  // namespace

std::vector<std::uint64_t> sign_changes(const ArithProfile& profile, Series series,
                                        std::uint64_t from, std::uint64_t to) {
  std::vector<std::uint64_t> out;
  if (from == 0) from = 1;
  if (to > profile.limit()) throw ArgumentError("sign_changes: range beyond profile limit");
  if (from >= to) return out;
  int last_sign = 0;
  std::uint64_t zero_run_start = 0;
  for (std::uint64_t n = from; n <= to; ++n) {
    const int s = series_sign(profile, series, n);
    if (s == 0) {
      if (zero_run_start == 0) zero_run_start = n;
      continue;
    }
    if (last_sign != 0 && s != last_sign) {
      out.push_back(zero_run_start != 0 ? zero_run_start : n - 1);
    }
    last_sign = s;
    zero_run_start = 0;
  }
  return out;
}

}  // namespace nbl

namespace nbl {

std::uint64_t first_floor_sum_failure(const ArithProfile& profile, std::uint64_t limit, bool grouped) {
  if (limit > profile.limit()) throw ArgumentError("floor-sum check: limit beyond profile");
  for (std::uint64_t j = 1; j <= limit; ++j) {
    std::int64_t s = 0;
    if (!grouped) {
      for (std::uint64_t k = 1; k <= j; ++k) s += profile.mu(k) * static_cast<std::int64_t>(j / k);
    } else {
      // k ranges with floor(j/k) = q share M(j/q) - M(j/(q+1))
      for (std::uint64_t k = 1; k <= j;) {
        const std::uint64_t q = j / k;
        const std::uint64_t last = j / q;
        s += static_cast<std::int64_t>(q) * (profile.mertens(last) - profile.mertens(k - 1));
        k = last + 1;
      }
    }
    if (s != 1) return j;
  }
  return 0;
}

std::uint64_t first_mggamma_failure(const ArithProfile& profile, std::uint64_t limit) {
  if (limit > profile.exact_limit()) throw ArgumentError("M/g/gamma check: limit beyond the exact range");
  for (std::uint64_t n = 1; n <= limit; ++n) {
    const mpq_class rhs = make_q(profile.mertens(n), n) + profile.gamma_exact(n);
    if (profile.g_exact(n) != rhs) return n;
  }
  return 0;
}

std::uint64_t first_gamma_piecewise_failure(const ArithProfile& profile, std::uint64_t limit) {
  if (limit > profile.exact_limit()) throw ArgumentError("gamma check: limit beyond the exact range");
  mpq_class integral(0);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (n >= 2) {
      const std::uint64_t k = n - 1;
      if (const auto m = profile.mertens(k); m != 0) {
        integral += mpq_class(m) * (make_q(1, k) - make_q(1, k + 1));
      }
    }
    if (integral != profile.gamma_exact(n)) return n;
  }
  return 0;
}

}  // namespace nbl

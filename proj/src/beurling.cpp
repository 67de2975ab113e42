#include "nbl/beurling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "nbl/errors.hpp"
#include "nbl/summation.hpp"

namespace nbl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

mpq_class exact_of_double(double x) {
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

}  // namespace

mpq_class frac_part(const mpq_class& u) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
  mpq_class r = u - mpq_class(fl);
  r.canonicalize();
  return r;
}

BeurlingSum::BeurlingSum(std::vector<BeurlingTerm> terms) {
  std::map<Ratio, Coeff, std::greater<>> merged;
  for (auto& t : terms) {
    if (!t.theta.is_positive()) throw ArgumentError("theta must be positive, got " + t.theta.str());
    auto [it, inserted] = merged.try_emplace(t.theta, t.c);
    if (!inserted) it->second += t.c;
  }
  for (auto& [theta, c] : merged) {
    if (c.is_zero()) continue;
    terms_.push_back({c, theta});
  }
  Coeff tail(0);
  for (const auto& t : terms_) {
    tail += t.c * Coeff(t.theta);
    all_exact_ = all_exact_ && t.c.is_exact();
  }
  tail_ = tail;
}

bool BeurlingSum::in_class_b() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const BeurlingTerm& t) { return t.theta <= Ratio(1); });
}

bool BeurlingSum::in_class_c() const {
  if (!in_class_b()) return false;
  if (tail_.is_exact()) return sgn(tail_.exact()) == 0;
  double scale = 0.0;
  for (const auto& t : terms_) scale += std::abs(t.c.value() * t.theta.to_double());
  return std::abs(tail_.value()) <= 8.0 * kEps * scale;
}

Ratio BeurlingSum::max_theta() const {
  if (terms_.empty()) throw ArgumentError("max_theta of an empty sum");
  return terms_.front().theta;
}

Ratio BeurlingSum::min_theta() const {
  if (terms_.empty()) throw ArgumentError("min_theta of an empty sum");
  return terms_.back().theta;
}

double BeurlingSum::abs_coeff_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.c.value());
  return s;
}

double BeurlingSum::eval(double x) const {
  if (!(x > 0.0)) throw ArgumentError("eval: x must be positive");
  CompensatedSum acc;
  for (const auto& t : terms_) {
    const double u = t.theta.to_double() / x;
    const double r = std::round(u);
    double rho;
    if (std::abs(u - r) <= 4.0 * kEps * std::max(1.0, u)) {
      rho = frac_part(t.theta.to_mpq() / exact_of_double(x)).get_d();
    } else {
      rho = u - std::floor(u);
    }
    acc.add(t.c.value() * rho);
  }
  return acc.value();
}

Coeff BeurlingSum::eval(const Ratio& x) const { return eval(x.to_mpq()); }

Coeff BeurlingSum::eval(const mpq_class& x) const {
  if (sgn(x) <= 0) throw ArgumentError("eval: x must be positive");
  if (all_exact_) {
    mpq_class acc(0);
    for (const auto& t : terms_) acc += t.c.exact() * frac_part(t.theta.to_mpq() / x);
    return Coeff(acc);
  }
  CompensatedSum acc;
  for (const auto& t : terms_) acc.add(t.c.value() * frac_part(t.theta.to_mpq() / x).get_d());
  return Coeff::inexact(acc.value());
}

std::string BeurlingSum::serialize() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const BeurlingSum& s) {
  for (const auto& t : s.terms()) os << t.c.str() << ' ' << t.theta.str() << '\n';
  return os;
}

BeurlingSum BeurlingSum::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<BeurlingTerm> terms;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string c_tok, th_tok, extra;
    if (!(ls >> c_tok)) continue;
    if (!(ls >> th_tok) || (ls >> extra)) {
      throw ArgumentError("line " + std::to_string(lineno) + ": expected 'coeff theta'");
    }
    terms.push_back({Coeff::parse(c_tok), Ratio::parse(th_tok)});
  }
  return BeurlingSum(std::move(terms));
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Sn: return "sn";
    case Family::Vn: return "vn";
    case Family::Bn: return "bn";
    case Family::Fn: return "fn";
    case Family::Rn: return "rn";
    case Family::Gn: return "gn";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::Sn, Family::Vn, Family::Bn, Family::Fn, Family::Rn, Family::Gn}) {
    if (family_name(f) == name) return f;
  }
  throw ArgumentError("unknown family '" + name + "' (expected sn, vn, bn, fn, rn or gn)");
}

namespace {

Coeff g_coeff(const ArithProfile& profile, std::uint64_t n) {
  return profile.has_exact(n) ? Coeff(profile.g_exact(n)) : Coeff::inexact(profile.g(n));
}

std::int64_t as_i64(std::uint64_t v) {
  if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw OverflowError("index exceeds int64");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

BeurlingSum make_family(Family family, std::uint64_t n, const ArithProfile& profile) {
  if (n == 0) throw ArgumentError("make_family: n must be >= 1");
  if (n > profile.limit()) throw ArgumentError("make_family: n exceeds the profile limit");
  const std::int64_t nn = as_i64(n);
  std::vector<BeurlingTerm> terms;
  auto add_sn = [&] {
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (const int mu = profile.mu(k); mu != 0) terms.push_back({Coeff(mu), Ratio(1, as_i64(k))});
    }
  };
  switch (family) {
    case Family::Sn:
      add_sn();
      break;
    case Family::Vn:
      add_sn();
      terms.push_back({-g_coeff(profile, n), Ratio(1)});
      break;
    case Family::Bn:
      add_sn();
      terms.push_back({-(Coeff(static_cast<long>(nn)) * g_coeff(profile, n)), Ratio(1, nn)});
      break;
    case Family::Fn:
      for (std::uint64_t k = 1; k <= n; ++k) {
        const long c = profile.mertens(n / k) - profile.mertens(n / (k + 1));
        if (c != 0) terms.push_back({Coeff(c), Ratio(as_i64(k), nn)});
      }
      terms.push_back({Coeff(-1), Ratio(1, nn)});
      break;
    case Family::Rn:
      for (std::uint64_t k = 1; k + 1 <= n; ++k) {
        const long m = profile.mertens(n / k);
        if (m != 0) terms.push_back({Coeff(mpq_class(mpz_class(m), mpz_class(static_cast<unsigned long>(k)))), Ratio(as_i64(k), nn)});
      }
      break;
    case Family::Gn:
      throw ArgumentError("G_n is a T-transform, not a finite dilation sum");
  }
  return BeurlingSum(std::move(terms));
}

double Generator::eval(double x) const {
  if (!(x > 0.0)) throw ArgumentError("generator: x must be positive");
  if (x > 1.0) return 0.0;
  return kind == GeneratorKind::NegChi ? -1.0 : std::log(x);
}

BeurlingSum dilate(const BeurlingSum& sum, const Ratio& a) {
  if (!a.is_positive()) throw ArgumentError("dilate: a must be positive");
  std::vector<BeurlingTerm> terms;
  terms.reserve(sum.size());
  for (const auto& t : sum.terms()) terms.push_back({t.c, t.theta / a});
  return BeurlingSum(std::move(terms));
}

std::vector<Coeff> step_values(const BeurlingSum& sum, std::uint64_t n) {
  std::vector<Coeff> out;
  out.reserve(n);
  for (std::uint64_t j = 1; j <= n; ++j) out.push_back(sum.eval(Ratio(1, as_i64(j))));
  return out;
}

std::vector<Coeff> recover_coefficients(const std::vector<Coeff>& values, RecoveryMode mode) {
  const std::size_t n = values.size();
  std::vector<Coeff> a;
  a.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    Coeff rhs = -values[j - 1];
    for (std::size_t k = 1; k < j; ++k) {
      const long q = static_cast<long>(j / k);
      if (!a[k - 1].is_zero()) rhs = rhs - a[k - 1] * Coeff(q);
    }
    if (mode == RecoveryMode::Integral && rhs.is_exact() && rhs.exact().get_den() != 1) {
      throw DataError("coefficient a_" + std::to_string(j) + " = " + rhs.str() + " is not an integer");
    }
    a.push_back(rhs);
  }
  return a;
}

}  // namespace nbl

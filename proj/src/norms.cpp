#include "nbl/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "nbl/errors.hpp"
#include "nbl/quadrature.hpp"
#include "nbl/summation.hpp"

namespace nbl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLdEps = std::numeric_limits<long double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeriesSwitch = 0.25;
constexpr int kSeriesTerms = 64;
constexpr std::size_t kChunk = 4096;

// Integrals over s in [0, t] of P = s/(1+s), Q = log(1+s) and their products.
struct Moments {
  double ip, iq, ipp, iqq, ipq;
};

struct SeriesTables {
  std::array<double, kSeriesTerms + 1> ip{}, iq{}, ipp{}, iqq{}, ipq{};
  SeriesTables() {
    double h = 0.0;  // H_{n-2}
    for (int n = 2; n <= kSeriesTerms; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      const double nd = n;
      ip[n] = sign / nd;
      iq[n] = sign / ((nd - 1.0) * nd);
      if (n >= 3) {
        h += 1.0 / (nd - 2.0);
        ipp[n] = -sign * (nd - 2.0) / nd;
        iqq[n] = -sign * 2.0 * h / ((nd - 1.0) * nd);
        ipq[n] = -sign * h / nd;
      }
    }
  }
};

const SeriesTables& tables() {
  static const SeriesTables t;
  return t;
}

Moments moments(double t) {
  Moments m{};
  if (t <= kSeriesSwitch) {
    const auto& tb = tables();
    double pw = t;  // t^n
    for (int n = 2; n <= kSeriesTerms; ++n) {
      pw *= t;
      if (pw < 1e-19 * t * t * t && n > 3) break;
      m.ip += tb.ip[n] * pw;
      m.iq += tb.iq[n] * pw;
      m.ipp += tb.ipp[n] * pw;
      m.iqq += tb.iqq[n] * pw;
      m.ipq += tb.ipq[n] * pw;
    }
    return m;
  }
  const double l = std::log1p(t);
  m.ip = t - l;
  m.iq = (1.0 + t) * l - t;
  m.ipp = t - 2.0 * l + t / (1.0 + t);
  m.iqq = (1.0 + t) * (l * l - 2.0 * l + 2.0) - 2.0;
  m.ipq = m.iq - 0.5 * l * l;
  return m;
}

// f(x0 (1 + s)) = B - alpha P(s) + C Q(s)
struct Rebased {
  double x0, B, alpha, C, t;
  double at(double s) const { return B - alpha * (s / (1.0 + s)) + C * std::log1p(s); }
  Rebased from(double s1, double s2) const {
    const double x1 = x0 * (1.0 + s1);
    return {x1, at(s1), alpha * x0 / x1, C, (s2 - s1) / (1.0 + s1)};
  }
};

double signed_integral(const Rebased& r) {
  const Moments m = moments(r.t);
  return r.x0 * (r.B * r.t - r.alpha * m.ip + r.C * m.iq);
}

double square_integral(const Rebased& r, double& abs_scale) {
  const Moments m = moments(r.t);
  const double terms[] = {r.B * r.B * r.t,           r.alpha * r.alpha * m.ipp, r.C * r.C * m.iqq,
                          -2.0 * r.B * r.alpha * m.ip, 2.0 * r.B * r.C * m.iq,  -2.0 * r.alpha * r.C * m.ipq};
  CompensatedSum s;
  abs_scale = 0.0;
  for (double v : terms) {
    s.add(v);
    abs_scale += std::abs(v);
  }
  abs_scale *= r.x0;
  return r.x0 * s.value();
}

// Monotone pieces of f on [0, t] with the root brackets between them.
struct Split {
  std::vector<double> cuts;  // s-values, ascending, first 0 and last t
  double root_error = 0.0;   // sum over roots of max|f| at bracket ends * bracket width (in x)
};

double bisect(const Rebased& r, double lo, double hi, double& width_x, double& fmax) {
  double flo = r.at(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = r.at(mid);
    if ((fm < 0) == (flo < 0) && fm != 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  width_x = r.x0 * (hi - lo);
  fmax = std::max(std::abs(r.at(lo)), std::abs(r.at(hi)));
  return 0.5 * (lo + hi);
}

Split split_at_roots(const Rebased& r, double a, double c) {
  Split out;
  std::vector<double> pts{0.0};
  if (c != 0.0) {
    const double xs = a / c;  // f'(x) = 0
    const double ss = xs / r.x0 - 1.0;
    if (ss > 0.0 && ss < r.t) pts.push_back(ss);
  }
  pts.push_back(r.t);
  out.cuts.push_back(0.0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double f1 = r.at(pts[i]);
    const double f2 = r.at(pts[i + 1]);
    if ((f1 < 0 && f2 > 0) || (f1 > 0 && f2 < 0)) {
      double root;
      if (c == 0.0 && r.alpha != 0.0) {
        // a/x + b = 0 in closed form: B = alpha P(s) -> s = B / (alpha - B)
        root = r.B / (r.alpha - r.B);
        if (!(root > pts[i] && root < pts[i + 1])) {
          double w, fm;
          root = bisect(r, pts[i], pts[i + 1], w, fm);
          out.root_error += w * fm;
        }
      } else {
        double w, fm;
        root = bisect(r, pts[i], pts[i + 1], w, fm);
        out.root_error += w * fm;
      }
      out.cuts.push_back(root);
    }
    if (i + 1 < pts.size() - 1) out.cuts.push_back(pts[i + 1]);
  }
  out.cuts.push_back(r.t);
  std::sort(out.cuts.begin(), out.cuts.end());
  return out;
}

SegmentIntegral quadrature_pieces(const Rebased& r, const Split& sp, double p, std::size_t order) {
  SegmentIntegral out{0.0, sp.root_error * p};
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < sp.cuts.size(); ++i) {
    const double s1 = sp.cuts[i];
    const double s2 = sp.cuts[i + 1];
    if (!(s2 > s1)) continue;
    const Rebased piece = r.from(s1, s2);
    const auto q = gauss_pair([&piece, p](double s) { return std::pow(std::abs(piece.at(s)), p); }, 0.0,
                              piece.t, order);
    acc.add(piece.x0 * q.value);
    out.error += piece.x0 * q.error;
  }
  out.value = acc.value();
  return out;
}

// f = b + c log x on (0, h].
SegmentIntegral log_segment_from_zero(double h, double b, double c, double p, std::size_t order) {
  const double u = std::log(h);
  if (p == 2.0) {
    const double f = b + c * u;
    const double v = h * (f * f - 2.0 * c * f + 2.0 * c * c);
    return {v, 16.0 * kEps * h * (f * f + 2.0 * std::abs(c * f) + 2.0 * c * c)};
  }
  const double root = std::exp(-b / c);
  if (p == 1.0) {
    auto G = [b, c](double x) { return x == 0.0 ? 0.0 : x * (b + c * std::log(x) - c); };
    if (root > 0.0 && root < h) {
      const double v = std::abs(G(root)) + std::abs(G(h) - G(root));
      return {v, 16.0 * kEps * (std::abs(G(root)) + std::abs(G(h)))};
    }
    return {std::abs(G(h)), 16.0 * kEps * std::abs(G(h))};
  }
  // Graded geometric pieces toward 0, split at the root.
  std::vector<double> cuts;
  for (double x = h; x > h * 1e-300 && cuts.size() < 1000; x *= 0.5) cuts.push_back(x);
  if (root > 0.0 && root < h) cuts.push_back(root);
  std::sort(cuts.begin(), cuts.end());
  CompensatedSum acc;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = gauss_pair([b, c, p](double x) { return std::pow(std::abs(b + c * std::log(x)), p); },
                              cuts[i], cuts[i + 1], order);
    acc.add(q.value);
    err += q.error;
  }
  err += near_zero_bound(cuts.front(), std::abs(b), std::abs(c), p);
  return {acc.value(), err};
}

}  // namespace

double near_zero_bound(double eps, double C, double L, double p) {
  if (eps <= 0.0) return 0.0;
  C = std::abs(C);
  L = std::abs(L);
  if (L == 0.0) return std::pow(C, p) * eps;
  if (eps >= 1.0) throw ArgumentError("near_zero_bound: eps must be below 1 with a log term");
  const double y = C / L - std::log(eps);
  const double rp = std::round(p);
  if (rp == p && p <= 64.0) {
    // int = L^p eps sum_{j<=p} Y^j p!/j!
    const int ip = static_cast<int>(rp);
    double term = std::pow(y, ip);
    double sum = term;
    for (int j = ip - 1; j >= 0; --j) {
      term = term * (j + 1) / y;
      sum += term;
    }
    return std::pow(L, p) * eps * sum;
  }
  if (y > p + 1.0) return eps * std::pow(L, p) * std::pow(y, p + 1.0) / (y - p);
  // z^p <= 1 + z^ceil(p)
  return eps * std::pow(L, p) + near_zero_bound(eps, C, L, std::ceil(p));
}

SegmentIntegral integrate_segment(const Segment& s, double p, std::size_t order, bool force_quadrature) {
  const double width = s.hi - s.lo;
  if (!(width > 0.0)) return {0.0, 0.0};
  if (s.lo == 0.0) {
    if (s.a != 0.0) throw NumericError("segment starting at 0 carries an a/x term");
    const double b = s.b + s.b_lo;
    if (s.c == 0.0) {
      const double v = std::pow(std::abs(b), p) * s.hi;
      return {v, 4.0 * kEps * v};
    }
    return log_segment_from_zero(s.hi, b, s.c, p, order);
  }
  const double b0 = s.eval(s.lo);
  Rebased r{s.lo, b0, s.a / s.lo, s.c, width / s.lo};
  // Pointwise error of the stored representation and of the rebased evaluation.
  const double scale = std::abs(s.a) / s.lo + std::abs(s.b) + std::abs(s.c * std::log(s.lo));
  const double fmax_var = std::abs(r.alpha) * std::min(r.t, 1.0) + std::abs(r.C) * std::log1p(r.t);
  const double err_f = 8.0 * kLdEps * scale + 4.0 * kEps * (std::abs(b0) + fmax_var);
  const double fmax = std::abs(b0) + fmax_var + err_f;
  const double rounding = p * std::pow(fmax, p - 1.0) * err_f * width;

  if (!force_quadrature && p == 2.0) {
    double abs_scale = 0.0;
    const double v = square_integral(r, abs_scale);
    return {v, rounding + 16.0 * kEps * abs_scale};
  }
  const Split sp = split_at_roots(r, s.a, s.c);
  if (!force_quadrature && p == 1.0) {
    CompensatedSum acc;
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < sp.cuts.size(); ++i) {
      if (!(sp.cuts[i + 1] > sp.cuts[i])) continue;
      const Rebased piece = r.from(sp.cuts[i], sp.cuts[i + 1]);
      const double v = std::abs(signed_integral(piece));
      acc.add(v);
      mass += piece.x0 * (std::abs(piece.B) * piece.t + fmax_var * piece.t);
    }
    return {acc.value(), rounding + sp.root_error + 16.0 * kEps * mass};
  }
  SegmentIntegral q = quadrature_pieces(r, sp, p, order);
  q.error += rounding;
  return q;
}

namespace {

struct Partial {
  double value = 0.0;
  double error = 0.0;
};

Partial integrate_range(const PiecewiseHyperbolic& pw, std::size_t from, std::size_t to, double p,
                        std::size_t order, bool force_quadrature) {
  CompensatedSum v;
  CompensatedSum e;
  for (std::size_t i = from; i < to; ++i) {
    const auto r = integrate_segment(pw.segments[i], p, order, force_quadrature);
    v.add(r.value);
    e.add(r.error);
  }
  return {v.value(), e.value()};
}

NormReport assemble(const PiecewiseHyperbolic& pw, double p, Partial body) {
  NormReport rep;
  rep.p = p;
  rep.segments = pw.segments.size();
  rep.events = pw.events;
  rep.quad_error = body.error;
  rep.tail_low = near_zero_bound(pw.epsilon, pw.near_const, pw.near_log, p);
  double far = 0.0;
  if (pw.far_mode != FarMode::None && pw.far_coeff != 0.0) {
    far = p == 1.0 ? kInf : std::pow(std::abs(pw.far_coeff), p) / ((p - 1.0) * std::pow(pw.far_start, p - 1.0));
  }
  rep.tail_high = far;
  rep.tail_high_exact = pw.far_mode != FarMode::Bound;
  rep.integral = body.value + (rep.tail_high_exact ? far : 0.0);
  const double inv = 1.0 / p;
  if (std::isinf(rep.integral)) {
    rep.value = rep.lower = rep.upper = kInf;
    rep.err = 0.0;
    return rep;
  }
  const double top = rep.integral + rep.quad_error + rep.tail_low + (rep.tail_high_exact ? 0.0 : far);
  rep.value = std::pow(std::max(rep.integral, 0.0), inv);
  rep.lower = std::pow(std::max(rep.integral - rep.quad_error, 0.0), inv);
  rep.upper = std::pow(std::max(top, 0.0), inv);
  rep.err = std::max(rep.value - rep.lower, rep.upper - rep.value);
  return rep;
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ArgumentError("p must be a finite real >= 1");
}

NormReport lp_norm_impl(const PiecewiseHyperbolic& pw, double p, const NormOptions& o, bool force_quadrature) {
  check_p(p);
  const std::size_t n = pw.segments.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Partial> parts(chunks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    parts[ch] = integrate_range(pw, ch * kChunk, std::min(n, (ch + 1) * kChunk), p, o.gauss_order,
                                force_quadrature);
  }
  CompensatedSum v;
  CompensatedSum e;
  for (const auto& part : parts) {
    v.add(part.value);
    e.add(part.error);
  }
  return assemble(pw, p, {v.value(), e.value()});
}

}  // namespace

NormReport lp_norm(const PiecewiseHyperbolic& pw, double p, const NormOptions& options) {
  return lp_norm_impl(pw, p, options, false);
}

NormReport lp_norm_quadrature(const PiecewiseHyperbolic& pw, double p, const NormOptions& options) {
  return lp_norm_impl(pw, p, options, true);
}

NormReport lp_norm_serial(const PiecewiseHyperbolic& pw, double p, const NormOptions& options) {
  check_p(p);
  return assemble(pw, p, integrate_range(pw, 0, pw.segments.size(), p, options.gauss_order, false));
}

NormReport lp_distance(const BeurlingSum& f, std::optional<Generator> generator, double p,
                       const FlattenOptions& flatten, const NormOptions& options) {
  check_p(p);
  return lp_norm(to_piecewise(f, generator, flatten), p, options);
}

NormReport lp_distance(const GnFunction& g, std::optional<Generator> generator, double p,
                       const FlattenOptions& flatten, const NormOptions& options) {
  check_p(p);
  return lp_norm(to_piecewise(g, generator, flatten), p, options);
}

}  // namespace nbl

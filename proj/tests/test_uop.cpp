#include <cmath>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "nbl/errors.hpp"
#include "nbl/quadrature.hpp"
#include "nbl/uop.hpp"

using namespace nbl;
using std::numbers::pi;

TEST_CASE("U on single terms: U rho(theta/x) = (theta/x) rho(x/theta)") {
  const BeurlingSum s({{Coeff(mpq_class(3, 2)), Ratio(2, 3)}});
  const USum u = apply_u(s);
  for (double x : {0.1, 0.5, 0.7, 3.3}) {
    const double v = x / (2.0 / 3.0);
    CHECK(u.eval(x) == doctest::Approx(1.5 * (2.0 / 3.0) / x * (v - std::floor(v))).epsilon(1e-14));
  }
  CHECK(head_constant(u).exact() == mpq_class(3, 2));
}

TEST_CASE("U commutes with dilations") {
  const auto& p = nbl_test::profile();
  const BeurlingSum s = make_family(Family::Vn, 6, p);
  const Ratio a(3, 2);
  // U K_a = K_a U
  const USum lhs = apply_u(dilate(s, a));
  const USum rhs = apply_u(s);
  for (double x : {0.05, 0.31, 0.9, 2.2}) {
    CHECK(lhs.eval(x) == doctest::Approx(rhs.eval(1.5 * x)).epsilon(1e-12));
  }
  const USum d = dilate(rhs, a);
  for (double x : {0.05, 0.31, 0.9}) CHECK(d.eval(x) == doctest::Approx(lhs.eval(x)).epsilon(1e-12));
}

TEST_CASE("head constants of the families") {
  const auto& p = nbl_test::profile();
  for (std::uint64_t n : {10, 50, 100, 1000}) {
    const mpq_class m(static_cast<long>(p.mertens(n)));
    CHECK(head_constant(apply_u(make_family(Family::Sn, n, p))).exact() == m);
    CHECK(head_constant(apply_u(make_family(Family::Fn, n, p))).exact() == m - 1);
    CHECK(head_constant(apply_u(make_family(Family::Bn, n, p))).exact() == -mpq_class(n) * p.gamma_exact(n));
    CHECK(head_constant(apply_u(make_family(Family::Vn, n, p))).exact() == m - p.g_exact(n));
    const USum u = apply_u(make_family(Family::Sn, n, p));
    CHECK(u.eval(0.5 / static_cast<double>(n)) == doctest::Approx(m.get_d()).epsilon(1e-12));
  }
  CHECK(head_constant(apply_u(make_family(Family::Fn, 50, p))).exact() == -4);
}

TEST_CASE("isometry on explicit sums") {
  const auto& p = nbl_test::profile();
  const BeurlingSum rho({{Coeff(1), Ratio(1)}});
  for (const BeurlingSum& s : {rho, make_family(Family::Sn, 2, p), make_family(Family::Sn, 3, p),
                               make_family(Family::Vn, 3, p), make_family(Family::Bn, 5, p)}) {
    const IsometryReport r = isometry_check(s);
    CHECK(r.consistent);
    CHECK(r.tolerance < 1e-3);
  }
  CHECK_THROWS_AS(isometry_check(make_family(Family::Sn, 100, p)), ResourceError);
}

TEST_CASE("Ci and the images of chi and lambda") {
  CHECK(cos_integral(1.0) == doctest::Approx(0.3374039229009681347).epsilon(1e-14));
  CHECK(cos_integral(5.0) == doctest::Approx(-0.1900297496566438786).epsilon(1e-13));
  CHECK(cos_integral(1e-3) == doctest::Approx(-6.330539864080593754).epsilon(1e-13));
  CHECK(cos_integral(2.0 - 1e-12) == doctest::Approx(cos_integral(2.0 + 1e-12)).epsilon(1e-11));
  CHECK(cos_integral(40.0) == doctest::Approx(0.01902000789620).epsilon(1e-11));
  CHECK_THROWS_AS(cos_integral(0.0), ArgumentError);

  // ||U chi||_2 = ||chi||_2 = 1 and ||U lambda||_2^2 = int_0^1 log^2 = 2.
  const double h = 1.0, X = 2000.0;
  auto tail = [](auto&& f, double lo, double hi) {
    double s = 0.0;
    for (double a = lo; a < hi; a += 0.25) s += gauss_pair(f, a, std::min(hi, a + 0.25)).value;
    return s;
  };
  const double chi_sq = head_gap_chi(0.0, h).value + tail([](double x) { return u_chi(x) * u_chi(x); }, h, X);
  CHECK(chi_sq == doctest::Approx(1.0).epsilon(1.0 / (pi * pi * X) + 1e-9));
  const double lam_sq = head_gap_lambda(0.0, h).value + tail([](double x) { return u_lambda(x) * u_lambda(x); }, h, X);
  CHECK(lam_sq == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("Uf as a piecewise function") {
  const auto& p = nbl_test::profile();
  const USum u = apply_u(make_family(Family::Bn, 5, p));
  const PiecewiseHyperbolic pw = u_piecewise(u, 100.0);
  for (double x : {0.01, 0.19, 0.21, 0.77, 3.1, 99.0}) CHECK(pw.eval(x) == doctest::Approx(u.eval(x)).epsilon(1e-12));
  CHECK(pw.far_mode == FarMode::Bound);
  CHECK(pw.far_coeff == doctest::Approx(u.abs_d_sum()));
  CHECK_THROWS_AS(u_piecewise(u, 1e9, 1000), ResourceError);
}

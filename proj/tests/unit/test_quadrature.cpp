#include <doctest.h>

#include <cmath>
#include <random>

#include "melnikov/errors.hpp"
#include "melnikov/io.hpp"
#include "melnikov/quadrature.hpp"
#include "melnikov/reduction.hpp"

using namespace melnikov;
using C = Perturbation::Component;

namespace {
double mid(SystemId sys, double f) {
  auto iv = energy_interval(sys);
  return iv.lo + f * iv.width();
}
}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    const auto& g = gauss_legendre(16);
    double s = 0.0, s30 = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      s += g.weights[k];
      s30 += g.weights[k] * std::pow(g.nodes[k], 30);
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-14));
    CHECK_THROWS(gauss_legendre(12));
  }

  TEST_CASE("adaptive integrate converges and reports an accuracy error at the cap") {
    auto r = integrate([](double t) { return std::exp(t); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(std::expm1(1.0)).epsilon(1e-14));
    QuadratureOptions tight;
    tight.max_nodes = 32;
    CHECK_THROWS_AS(integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0, tight), AccuracyError);
    try {
      integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0, tight);
    } catch (const AccuracyError& e) {
      CHECK(e.estimate() == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
      CHECK(e.error_estimate() > 0.0);
    }
  }

  TEST_CASE("closed forms") {
    CHECK(abelian_integral({SystemId::BT, 0, 0}, 0.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    for (double f : {0.1, 0.5, 0.9}) {
      double h = mid(SystemId::LV, f);
      auto e = oval_endpoints(SystemId::LV, h);
      double expect = (std::pow(e.x_a, -3) - std::pow(e.x_b, -3)) / 3.0;
      CHECK(abelian_integral({SystemId::LV, 0, 0}, h) == doctest::Approx(expect).epsilon(1e-12));
      auto b = oval_endpoints(SystemId::BT, mid(SystemId::BT, f));
      CHECK(abelian_integral({SystemId::BT, 0, 0}, b.h) == doctest::Approx(b.x_b - b.x_a).epsilon(1e-13));
    }
  }

  TEST_CASE("integrals with j >= 1 vanish at the center") {
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      double h = energy_interval(sys).lo + 1e-9;
      for (int j = 1; j <= 3; ++j) CHECK(std::abs(abelian_integral({sys, 1, j}, h)) < 1e-6);
    }
  }

  TEST_CASE("upper branch quadrature matches an independent Simpson rule") {
    // x-space composite Simpson on the sqrt-singular integrand, after the substitution x = x_a + s^2
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      double h = mid(sys, 0.4);
      auto e = oval_endpoints(sys, h);
      int i = 2, j = 1;
      auto f = [&](double x) {
        double y = upper_branch(sys, x, h);
        return std::pow(x, i + exponent_offset(sys)) * std::pow(y, j);
      };
      // split at the center to handle both endpoint singularities
      double c = e.center();
      auto part = [&](double a, double b, int sgn) {
        double L = std::sqrt(std::abs(b - a));
        int n = 20000;
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
          double u = L * k / n;
          double x = sgn > 0 ? a + u * u : a - u * u;
          double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
          s += w * f(x) * 2 * u;
        }
        return s * L / n / 3.0;
      };
      double ref = part(e.x_a, c, +1) + part(e.x_b, c, -1);
      CHECK(abelian_integral({sys, i, j}, h) == doctest::Approx(ref).epsilon(1e-7));
    }
  }

  TEST_CASE("reflection") {
    for (double f : {0.2, 0.7}) {
      double h = mid(SystemId::BT, f);
      CHECK(lower_abelian_integral({SystemId::BT, 0, 1}, h) ==
            doctest::Approx(abelian_integral({SystemId::BT, 0, 1}, h)).epsilon(1e-10));
      CHECK(lower_abelian_integral({SystemId::BT, 0, 2}, h) ==
            doctest::Approx(-abelian_integral({SystemId::BT, 0, 2}, h)).epsilon(1e-10));
      for (SystemId sys : {SystemId::LV, SystemId::BT}) {
        double hh = mid(sys, f);
        CHECK(lower_abelian_integral({sys, 3, 0}, hh) ==
              doctest::Approx(-abelian_integral({sys, 3, 0}, hh)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("derivative identities") {
    for (double f : {0.15, 0.5, 0.85}) {
      double h = mid(SystemId::LV, f);
      for (int i = 0; i <= 2; ++i)
        CHECK(abelian_derivative({SystemId::LV, i, 2}, h) ==
              doctest::Approx(2.0 * abelian_integral({SystemId::LV, i + 3, 0}, h)).epsilon(1e-10));
      double hb = mid(SystemId::BT, f);
      for (int i = 0; i <= 2; ++i)
        CHECK(abelian_derivative({SystemId::BT, i, 2}, hb) ==
              doctest::Approx(2.0 * abelian_integral({SystemId::BT, i, 0}, hb)).epsilon(1e-10));
    }
  }

  TEST_CASE("derivatives against central differences") {
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      auto iv = energy_interval(sys);
      for (int k = 0; k < 10; ++k) {
        double h = iv.lo + iv.width() * (0.05 + 0.9 * k / 9.0);
        double d = 1e-4 * iv.width();
        for (int j = 0; j <= 3; ++j) {
          IntegralId id{sys, 1, j};
          double cd = (abelian_integral(id, h + d) - abelian_integral(id, h - d)) / (2 * d);
          double a = abelian_derivative(id, h);
          CHECK(std::abs(a - cd) <= 1e-4 * (1.0 + std::abs(a)));
        }
      }
    }
  }

  TEST_CASE("higher derivatives of j = 0 and j = 1 integrals") {
    double h = mid(SystemId::BT, 0.4), d = 1e-3;
    for (int j : {0, 1}) {
      IntegralId id{SystemId::BT, 0, j};
      auto I1 = [&](double x) { return abelian_derivative(id, x, 1); };
      double cd = (I1(h + d) - I1(h - d)) / (2 * d);
      CHECK(abelian_derivative(id, h, 2) == doctest::Approx(cd).epsilon(1e-5));
      auto I2 = [&](double x) { return abelian_derivative(id, x, 2); };
      double cd3 = (I2(h + d) - I2(h - d)) / (2 * d);
      CHECK(abelian_derivative(id, h, 3) == doctest::Approx(cd3).epsilon(1e-4));
    }
    CHECK_THROWS_AS(abelian_derivative({SystemId::BT, 0, 0}, h, -1), PreconditionError);
  }

  TEST_CASE("endpoint jet matches the section energy") {
    auto e = oval_endpoints(SystemId::LV, -0.3);
    auto jet = endpoint_jet(SystemId::LV, e.x_b);
    CHECK(jet.d1 == doctest::Approx(1.0 / section_energy(SystemId::LV, e.x_b).d1).epsilon(1e-14));
  }

  TEST_CASE("Green identity for dy integrals") {
    for (int i = 0; i <= 6; ++i)
      for (int j = 0; j <= 3; ++j) {
        double h = mid(SystemId::LV, 0.35);
        double lhs = abelian_dy_integral({SystemId::LV, i, j}, h);
        double rhs = -double(i - 4) / (j + 1) * abelian_integral({SystemId::LV, i - 1, j + 1}, h);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
      }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(abelian_integral({SystemId::LV, 0, 1}, 0.2), RangeError);
    CHECK_THROWS_AS(abelian_integral({SystemId::LV, 0, 1}, -0.5 + 1e-13), DegenerateOvalError);
  }

  TEST_CASE("direct Melnikov function") {
    double h = mid(SystemId::BT, 0.3);
    Perturbation same(0);
    same.set(C::b_plus, 0, 0, Rational(1));
    same.set(C::b_minus, 0, 0, Rational(1));
    for (SystemId sys : {SystemId::LV, SystemId::BT})
      CHECK(std::abs(melnikov_direct(sys, same, mid(sys, 0.3))) < 1e-12);

    Perturbation opp(0);
    opp.set(C::b_plus, 0, 0, Rational(1));
    opp.set(C::b_minus, 0, 0, Rational(-1));
    CHECK(melnikov_direct(SystemId::BT, opp, h) ==
          doctest::Approx(2.0 * abelian_integral({SystemId::BT, 0, 0}, h)).epsilon(1e-12));

    Perturbation gy(1);
    gy.set(C::b_plus, 0, 1, Rational(1));
    gy.set(C::b_minus, 0, 1, Rational(1));
    double hl = mid(SystemId::LV, 0.6);
    CHECK(melnikov_direct(SystemId::LV, gy, hl) ==
          doctest::Approx(2.0 * abelian_integral({SystemId::LV, 0, 1}, hl)).epsilon(1e-10));
  }

  TEST_CASE("green and raw forms agree") {
    std::mt19937_64 rng(3);
    for (SystemId sys : {SystemId::LV, SystemId::BT})
      for (int n = 1; n <= 4; ++n) {
        Perturbation p = random_perturbation(n, rng);
        double h = mid(sys, 0.45);
        auto g = melnikov_direct_detail(sys, p, h, MelnikovForm::green);
        auto r = melnikov_direct_detail(sys, p, h, MelnikovForm::raw);
        CHECK(std::abs(g.value - r.value) <= 1e-9 * g.magnitude);
      }
  }

  TEST_CASE("LV positivity and monotonicity") {
    double prev = -1.0;
    for (int k = 0; k < 100; ++k) {
      double h = mid(SystemId::LV, 0.005 + 0.99 * k / 99.0);
      CHECK(abelian_integral({SystemId::LV, 0, 1}, h) > 0.0);
      double v = abelian_integral({SystemId::LV, 0, 0}, h);
      CHECK(v > prev);
      prev = v;
    }
  }
}

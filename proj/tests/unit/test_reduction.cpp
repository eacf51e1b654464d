#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "melnikov/errors.hpp"
#include "melnikov/io.hpp"
#include "melnikov/quadrature.hpp"
#include "melnikov/reduction.hpp"

using namespace melnikov;
using C = Perturbation::Component;

namespace {

RationalPoly poly(std::initializer_list<Rational> c) { return RationalPoly(c); }

BasisDecomposition combo(SystemId sys, std::initializer_list<std::pair<IndexPair, RationalPoly>> terms, int m = 0) {
  BasisDecomposition d(sys);
  for (const auto& [e, p] : terms) d += BasisDecomposition::element(sys, e).scaled(p);
  if (m > 0) d = d.scaled(RationalPoly::constant(Rational(1)), m);
  return d;
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("bases") {
    CHECK(basis(SystemId::LV) == std::vector<IndexPair>{{0, 1}, {-1, 1}, {1, 0}, {0, 0}, {0, 2}});
    CHECK(basis(SystemId::BT) == std::vector<IndexPair>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(basis_index(SystemId::LV, {0, 2}) == 4);
    CHECK(basis_index(SystemId::BT, {2, 0}) == -1);
    CHECK(to_string(IndexPair{-1, 1}) == "I(-1,1)");
  }

  TEST_CASE("rho values") {
    Perturbation same(0);
    same.set(C::b_plus, 0, 0, Rational(1));
    same.set(C::b_minus, 0, 0, Rational(1));
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      auto rho = rho_from_perturbation(sys, same);
      CHECK((rho.count({0, 0}) == 0 || rho.at({0, 0}) == 0));
    }
    Perturbation a(1);
    a.set(C::a_plus, 1, 0, Rational(1));
    CHECK(rho_from_perturbation(SystemId::LV, a).at({0, 1}) == Rational(-3));
    Perturbation b(2);
    b.set(C::a_plus, 2, 0, Rational(1));
    // -x^2 dy on the upper branch is +2 I(1,1) by Green's identity
    CHECK(rho_from_perturbation(SystemId::BT, b).at({1, 1}) == Rational(2));
  }

  TEST_CASE("rho sign agrees with quadrature") {
    Perturbation b(2);
    b.set(C::a_plus, 2, 0, Rational(1));
    double h = 0.2;
    CHECK(melnikov_direct(SystemId::BT, b, h) ==
          doctest::Approx(2.0 * abelian_integral({SystemId::BT, 1, 1}, h)).epsilon(1e-10));
  }

  TEST_CASE("low-order reductions") {
    using I = IndexPair;
    CHECK(reduce_monomial(SystemId::LV, 2, 0) ==
          combo(SystemId::LV, {{I{1, 0}, poly({make_rational(4, 3)})}, {I{0, 0}, poly({make_rational(-1, 3)})}}));
    CHECK(reduce_monomial(SystemId::LV, 2, 0).denom_power() == 0);
    auto d31 = reduce_monomial(SystemId::LV, 3, 1);
    CHECK(d31 == combo(SystemId::LV, {{I{0, 1}, poly({make_rational(-1, 2)})}}, 1));
    CHECK(d31.denom_power() == 1);
    CHECK(reduce_monomial(SystemId::LV, 1, 1) == combo(SystemId::LV, {{I{0, 1}, poly({Rational(1)})}}));
    CHECK(reduce_monomial(SystemId::BT, 0, 2) ==
          combo(SystemId::BT, {{I{0, 0}, poly({Rational(0), make_rational(3, 2)})}, {I{1, 0}, poly({Rational(-1)})}}));
    CHECK(reduce_monomial(SystemId::BT, 2, 1) == combo(SystemId::BT, {{I{0, 1}, poly({Rational(1)})}}));
    CHECK(reduce_monomial(SystemId::BT, 0, 3) ==
          combo(SystemId::BT, {{I{0, 1}, poly({Rational(0), make_rational(18, 11)})},
                               {I{1, 1}, poly({make_rational(-12, 11)})}}));
    CHECK_THROWS_AS(reduce_monomial(SystemId::LV, -4, 1), UnsupportedIndexError);
    CHECK_THROWS_AS(reduce_monomial(SystemId::BT, -1, 0), UnsupportedIndexError);
  }

  TEST_CASE("oracle equivalence for i + j <= 8") {
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      auto iv = energy_interval(sys);
      for (int k = 0; k < 20; ++k) {
        double h = iv.lo + iv.width() * (k + 0.5) / 20.0;
        auto bv = basis_values(sys, h);
        for (int d = 0; d <= 8; ++d)
          for (int j = 0; j <= d; ++j) {
            int i = d - j;
            double q = abelian_integral({sys, i, j}, h);
            double r = reduce_monomial(sys, i, j).evaluate(bv, h);
            CHECK(std::abs(r - q) <= 1e-6 * std::max(1.0, std::abs(q)));
          }
      }
    }
  }

  TEST_CASE("concurrent reductions agree") {
    std::vector<BasisDecomposition> a(4), b(4);
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t) ts.emplace_back([&, t] { a[t] = reduce_monomial(SystemId::LV, 9 + t, 3); });
    for (auto& t : ts) t.join();
    for (int t = 0; t < 4; ++t) CHECK(a[t] == reduce_monomial(SystemId::LV, 9 + t, 3));
  }

  TEST_CASE("representation of simple perturbations") {
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      auto rep = melnikov_representation(sys, Perturbation(3));
      CHECK(rep.decomposition.is_zero());
      CHECK(evaluate_representation(rep, energy_interval(sys).lo + 0.1) == 0.0);
    }
    Perturbation p(1);
    p.set(C::b_plus, 0, 0, Rational(1));
    p.set(C::b_minus, 0, 0, Rational(-1));
    auto rep = melnikov_representation(SystemId::BT, p);
    CHECK(rep.decomposition.coeff({0, 0}) == poly({Rational(2)}));
    CHECK(rep.decomposition.coeff({1, 0}).is_zero());
    CHECK(rep.decomposition.coeff({0, 1}).is_zero());
    CHECK(rep.decomposition.coeff({1, 1}).is_zero());
    CHECK(evaluate_representation(rep, 0.0) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));

    Perturbation gy(1);
    gy.set(C::b_plus, 0, 1, Rational(1));
    gy.set(C::b_minus, 0, 1, Rational(1));
    auto lv = melnikov_representation(SystemId::LV, gy);
    for (int k = 1; k < 20; ++k) CHECK(evaluate_representation(lv, -0.5 + 0.5 * k / 20.0) > 0.0);
  }

  TEST_CASE("representation matches quadrature, LV n = 5") {
    std::mt19937_64 rng(17);
    Perturbation p = random_perturbation(5, rng);
    auto rep = melnikov_representation(SystemId::LV, p);
    for (int k = 0; k < 20; ++k) {
      double h = -0.5 + 0.5 * (k + 0.5) / 20.0;
      auto d = melnikov_direct_detail(SystemId::LV, p, h);
      CHECK(std::abs(evaluate_representation(rep, h) - d.value) <= 1e-6 * d.magnitude);
    }
  }

  TEST_CASE("degree bounds") {
    std::mt19937_64 rng(23);
    for (int n = 1; n <= 6; ++n) {
      for (int t = 0; t < 200; ++t) {
        Perturbation p = random_perturbation(n, rng);
        auto bt = check_degrees(melnikov_representation(SystemId::BT, p));
        CHECK(bt.ok());
        auto lvrep = melnikov_representation(SystemId::LV, p);
        auto lv = check_degrees(lvrep);
        CHECK(lv.denom_ok);
        CHECK(lvrep.decomposition.denom_power() == representation_denom_power(SystemId::LV, n));
        // sigma block and I(0,2) obey the stated bounds; I(1,0), I(0,0) may exceed by one
        for (int k : {0, 1, 4}) CHECK(lv.excess[k] == 0);
        for (int k : {2, 3}) CHECK(lv.excess[k] <= 1);
        CHECK(lvrep.decomposition.normalized().denom_power() <= lvrep.decomposition.denom_power());
      }
    }
    CHECK(representation_degree_bounds(SystemId::BT, 2) == std::vector<int>{1, 0, 0, 0});
    CHECK(representation_denom_power(SystemId::LV, 1) == 0);
    CHECK(representation_denom_power(SystemId::LV, 3) == 1);
    CHECK(representation_denom_power(SystemId::LV, 6) == 3);
  }

  TEST_CASE("LV bounds hold exactly when the x^0 y^odd coefficients of f agree") {
    std::mt19937_64 rng(29);
    for (int n = 1; n <= 6; ++n)
      for (int t = 0; t < 40; ++t) {
        Perturbation p = random_perturbation(n, rng);
        for (int j = 1; j <= n; j += 2) p.set(C::a_minus, 0, j, p.coefficient(C::a_plus, 0, j));
        CHECK(check_degrees(melnikov_representation(SystemId::LV, p)).ok());
      }
  }

  TEST_CASE("LV bound excess with f+ = y") {
    Perturbation p(4);
    p.set(C::a_plus, 0, 1, Rational(1));
    auto c = check_degrees(melnikov_representation(SystemId::LV, p));
    CHECK(c.denom_ok);
    CHECK(std::max(c.excess[2], c.excess[3]) == 1);
  }

  TEST_CASE("n = 1 LV has no I(0,2) term") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t)
      CHECK(melnikov_representation(SystemId::LV, random_perturbation(1, rng)).decomposition.coeff({0, 2}).is_zero());
  }

  TEST_CASE("linearity") {
    std::mt19937_64 rng(37);
    for (SystemId sys : {SystemId::LV, SystemId::BT})
      for (int n = 1; n <= 5; ++n) {
        Perturbation p1 = random_perturbation(n, rng), p2 = random_perturbation(n, rng);
        Rational lam = make_rational(-7, 3);
        auto lhs = melnikov_representation(sys, p1.combined(p2, lam)).decomposition;
        auto rhs = melnikov_representation(sys, p1).decomposition + lam * melnikov_representation(sys, p2).decomposition;
        CHECK(lhs == rhs);
      }
  }

  TEST_CASE("symmetric BT perturbations keep only the odd-j part, doubled") {
    std::mt19937_64 rng(41);
    for (int n = 1; n <= 5; ++n) {
      Perturbation p = random_perturbation(n, rng);
      Perturbation s(n), odd(n);
      for (int d = 0; d <= n; ++d)
        for (int j = 0; j <= d; ++j) {
          s.set(C::a_plus, d - j, j, p.coefficient(C::a_plus, d - j, j));
          s.set(C::a_minus, d - j, j, p.coefficient(C::a_plus, d - j, j));
          s.set(C::b_plus, d - j, j, p.coefficient(C::b_plus, d - j, j));
          s.set(C::b_minus, d - j, j, p.coefficient(C::b_plus, d - j, j));
          // b y^odd dx survives; a x^i y^even dy becomes a y^odd dx term by Green's identity
          if (j % 2 == 1) odd.set(C::b_plus, d - j, j, p.coefficient(C::b_plus, d - j, j));
          if (j % 2 == 0) odd.set(C::a_plus, d - j, j, p.coefficient(C::a_plus, d - j, j));
        }
      auto full = melnikov_representation(SystemId::BT, s).decomposition;
      auto half = melnikov_representation(SystemId::BT, odd).decomposition;
      CHECK(full == Rational(2) * half);
    }
  }

  TEST_CASE("export round trip") {
    std::mt19937_64 rng(43);
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      auto rep = melnikov_representation(sys, random_perturbation(4, rng));
      auto text = export_representation(rep);
      auto back = import_representation(text);
      CHECK(back.sys == rep.sys);
      CHECK(back.n == rep.n);
      CHECK(back.decomposition == rep.decomposition);
      CHECK(back.decomposition.denom_power() == rep.decomposition.denom_power());
      CHECK(export_representation(back) == text);
    }
  }

  TEST_CASE("decomposition arithmetic") {
    auto e = BasisDecomposition::element(SystemId::LV, {0, 1});
    auto over = e.scaled(RationalPoly::constant(Rational(1)), 2);
    CHECK(over.denom_power() == 2);
    CHECK(over.over_power(3).denom_power() == 3);
    CHECK_THROWS_AS(over.over_power(1), InternalError);
    auto back = e.scaled(RationalPoly({Rational(0), Rational(0), Rational(1)}), 2);
    CHECK(back.normalized().denom_power() == 0);
    CHECK(back == e);
  }
}

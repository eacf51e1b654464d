#include <doctest.h>

#include <cmath>
#include <random>

#include "melnikov/errors.hpp"
#include "melnikov/io.hpp"
#include "melnikov/picard_fuchs.hpp"
#include "melnikov/quadrature.hpp"
#include "melnikov/zeros.hpp"

using namespace melnikov;

namespace {

RationalMatrix mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Rational R(long a, long b = 1) { return make_rational(a, b); }

MelnikovRepresentation random_rep(SystemId sys, int n, std::mt19937_64& rng) {
  return melnikov_representation(sys, random_perturbation(n, rng));
}

/// rep with the coefficients of one block cleared
MelnikovRepresentation without_block(const MelnikovRepresentation& rep, Block drop) {
  MelnikovRepresentation out = rep;
  BasisDecomposition d(rep.sys);
  for (const auto& e : basis(rep.sys)) {
    bool in_drop = false;
    for (const auto& b : block_elements(rep.sys, drop)) in_drop = in_drop || b == e;
    if (!in_drop) d += BasisDecomposition::element(rep.sys, e).scaled(rep.decomposition.coeff(e));
  }
  out.decomposition = d.scaled(RationalPoly::constant(Rational(1)), rep.decomposition.denom_power());
  return out;
}

}  // namespace

TEST_SUITE("picard-fuchs") {
  TEST_CASE("matrices equal the literal tables") {
    auto lv1 = pf_system(SystemId::LV, Block::V1);
    CHECK(lv1.A == mat({{R(3, 2), R(0)}, {R(3, 2), R(3, 4)}}));
    CHECK(lv1.B == mat({{R(9, 8), R(-3, 8)}, {R(27, 16), R(-9, 16)}}));
    auto lv2 = pf_system(SystemId::LV, Block::V2);
    CHECK(lv2.A == mat({{R(11, 2), R(-1), R(0)}, {R(10), R(-1), R(0)}, {R(13, 4), R(-1), R(1)}}));
    CHECK(lv2.B == mat({{R(27, 8), R(-9, 8), R(0)}, {R(27, 4), R(-9, 4), R(0)}, {R(27, 16), R(-9, 16), R(0)}}));
    auto bt1 = pf_system(SystemId::BT, Block::V1);
    CHECK(bt1.A == mat({{R(3), R(0)}, {R(0), R(3, 2)}}));
    CHECK(bt1.B == mat({{R(0), R(-2)}, {R(-1), R(0)}}));
    auto bt2 = pf_system(SystemId::BT, Block::V2);
    CHECK(bt2.A == mat({{R(6, 5), R(0)}, {R(0), R(6, 7)}}));
    CHECK(bt2.B == mat({{R(0), R(-4, 5)}, {R(-4, 7), R(0)}}));
  }

  TEST_CASE("first-order residuals") {
    CHECK(pf_residual(pf_system(SystemId::LV, Block::V1), -0.25) < 1e-6);
    CHECK(pf_residual(pf_system(SystemId::LV, Block::V2), -0.25) < 1e-6);
    CHECK(pf_residual(pf_system(SystemId::BT, Block::V1), 0.0) < 1e-6);
    CHECK(pf_residual(pf_system(SystemId::BT, Block::V2), -2.0 / 3.0 + 1e-3) < 1e-4);
    for (SystemId sys : {SystemId::LV, SystemId::BT})
      for (Block b : {Block::V1, Block::V2}) CHECK(pf_differentiated_residual(pf_system(sys, b), energy_interval(sys).lo + 0.3 * energy_interval(sys).width()) < 1e-6);
  }

  TEST_CASE("a corrupted entry is detected") {
    auto pf = pf_system(SystemId::BT, Block::V1);
    pf.A(1, 0) += R(1, 100);
    CHECK(pf_residual(pf, 0.1) > 1e-4);
  }

  TEST_CASE("second-order relations") {
    CHECK(second_order_residual(SecondOrder::bt_v1_value, 0.0) < 1e-5);
    CHECK(second_order_residual(SecondOrder::bt_v2_value, 0.3) < 1e-5);
    CHECK(second_order_residual(SecondOrder::lv_v2, -0.25) < 1e-5);
    CHECK(second_order_residual(SystemId::BT, Block::V2, 0.2) < 1e-5);
    CHECK_THROWS_AS(second_order_residual(SystemId::LV, Block::V1, -0.25), PreconditionError);
    auto c1 = second_order_matrix(SecondOrder::bt_v1_value);
    CHECK(c1[0][1] == RationalPoly({R(0), R(9)}));
    CHECK(c1[1][0] == RationalPoly({R(0), R(9, 2)}));
    CHECK(c1[0][0] == RationalPoly({R(-4), R(0), R(-9, 2)}));
    auto c3 = second_order_matrix(SecondOrder::bt_v2_value);
    CHECK(c3[0][0] == RationalPoly({R(16, 5), R(0), R(-36, 5)}));
    CHECK(c3[1][1] == RationalPoly({R(-16, 7), R(0), R(36, 7)}));
  }

  TEST_CASE("uncorrected tables fail numerically") {
    auto printed = second_order_matrix(SecondOrder::lv_v2, MatrixSource::printed);
    CHECK(printed[0][0] == RationalPoly({R(-171, 18), R(-116, 18)}));
    CHECK(printed[2][0] == RationalPoly({R(-15), R(-30)}));
    CHECK(second_order_residual(SecondOrder::lv_v2, -0.25, MatrixSource::printed) > 1.0);
    auto corrected = second_order_matrix(SecondOrder::lv_v2);
    for (int r = 0; r < 3; ++r) CHECK(corrected[r][1] == printed[r][1]);
    CHECK(second_order_residual(SecondOrder::bt_v2_slope, 0.3, MatrixSource::printed) > 1.0);
    CHECK(second_order_residual(SecondOrder::bt_v2_slope, 0.3) < 1e-5);
  }

  TEST_CASE("standoff near singular loci") {
    CHECK_THROWS_AS(pf_residual(pf_system(SystemId::LV, Block::V1), -1e-4), NearSingularError);
    CHECK_THROWS_AS(second_order_residual(SecondOrder::lv_v2, -0.5 + 1e-4), NearSingularError);
  }

  TEST_CASE("Riccati relations") {
    CHECK(riccati_residual(SystemId::LV, RiccatiKind::omega_lv, -0.25) < 1e-5);
    CHECK(riccati_residual(SystemId::BT, RiccatiKind::chi_bt_v2, 0.0) < 1e-5);
    CHECK(riccati_residual(SystemId::BT, RiccatiKind::omega_bt_second, 0.5) < 1e-4);
    CHECK_THROWS_AS(riccati_residual(SystemId::BT, RiccatiKind::omega_bt_second, bt_second_derivative_zero()),
                    RatioDenominatorError);
    CHECK_THROWS_AS(riccati_residual(SystemId::BT, RiccatiKind::omega_lv, 0.0), PreconditionError);
  }

  TEST_CASE("annihilator degrees") {
    auto d = annihilator_degrees(SystemId::LV, 5);
    CHECK(d.p2 == 7);
    CHECK(d.p1 == 6);
    CHECK(d.p0 == 5);
    auto b = annihilator_degrees(SystemId::BT, 4);
    CHECK(b.p2 == 5);
    CHECK(b.p1 == 4);
    CHECK(b.p0 == 3);
    CHECK(target_block(SystemId::LV) == Block::V1);
    CHECK(target_block(SystemId::BT) == Block::V2);
  }

  TEST_CASE("LV annihilator of I(0,1)") {
    MelnikovRepresentation rep;
    rep.sys = SystemId::LV;
    rep.n = 4;
    rep.decomposition = BasisDecomposition::element(SystemId::LV, {0, 1}).scaled(RationalPoly::constant(Rational(1)), 1);
    Annihilator ann = construct_annihilator(rep);
    CHECK(ann.kernel_dim >= 1);
    for (int k = 0; k < 20; ++k) {
      double h = -0.5 + 0.5 * (k + 0.5) / 20.0;
      if (std::abs(h) < 2e-3) continue;
      auto r = annihilator_residual(rep, ann, h);
      CHECK(std::abs(r.value) < 1e-6 * r.scale);
      CHECK(std::abs(block_residual(rep, ann, h).value) < 1e-8 * r.scale);
    }
  }

  TEST_CASE("BT annihilator of the V2 part") {
    std::mt19937_64 rng(53);
    auto rep = random_rep(SystemId::BT, 3, rng);
    Annihilator ann = construct_annihilator(rep);
    auto psi2 = without_block(rep, Block::V1);
    for (double h : {-0.5, -0.1, 0.3, 0.6}) {
      auto r = annihilator_residual(psi2, ann, h);
      CHECK(std::abs(r.value) < 1e-6 * r.scale);
    }
  }

  TEST_CASE("annihilator exactness, bounds and consistency") {
    std::mt19937_64 rng(59);
    for (SystemId sys : {SystemId::LV, SystemId::BT})
      for (int n = 2; n <= 6; ++n)
        for (int t = 0; t < 4; ++t) {
          auto rep = random_rep(sys, n, rng);
          Annihilator ann = construct_annihilator(rep);
          CHECK(ann.kernel_dim >= 1);
          CHECK_FALSE(ann.P2.is_zero());
          for (const auto& q : annihilation_remainder(rep, ann)) CHECK(q.is_zero());
          auto d = annihilator_degrees(sys, n);
          CHECK(ann.P2.degree() <= d.p2);
          CHECK(ann.P1.degree() <= d.p1);
          CHECK(ann.P0.degree() <= d.p0);
          auto iv = energy_interval(sys);
          double h = iv.lo + 0.37 * iv.width();
          auto a = annihilator_residual(rep, ann, h), b = block_residual(rep, ann, h);
          CHECK(std::abs(a.value - b.value) < 1e-6 * std::max(a.scale, b.scale));
        }
  }

  TEST_CASE("annihilator residual agrees with finite differences of the direct Melnikov function") {
    std::mt19937_64 rng(61);
    Perturbation p = random_perturbation(3, rng);
    auto rep = melnikov_representation(SystemId::BT, p);
    auto nov2 = without_block(rep, Block::V2);
    Annihilator ann = construct_annihilator(rep);
    for (double h : {-0.3, 0.2}) {
      const double d = 1e-3;
      auto M = [&](double x) { return melnikov_direct(SystemId::BT, p, x); };
      double m0 = M(h), mp = M(h + d), mm = M(h - d), mp2 = M(h + 2 * d), mm2 = M(h - 2 * d);
      double m1 = (mm2 - 8 * mm + 8 * mp - mp2) / (12 * d);
      double m2 = (-mm2 + 16 * mm - 30 * m0 + 16 * mp - mp2) / (12 * d * d);
      double lm = ann.P2(h) * m2 + ann.P1(h) * m1 + ann.P0(h) * m0;
      auto r = block_residual(rep, ann, h);
      CHECK(std::abs(lm - r.value) < 1e-5 * r.scale);
      // L kills the V2 part, so the residual only depends on the V1 part
      CHECK(std::abs(annihilator_residual(nov2, ann, h).value - r.value) < 1e-6 * r.scale);
    }
  }

  TEST_CASE("residual is linear in the representation") {
    std::mt19937_64 rng(67);
    for (SystemId sys : {SystemId::LV, SystemId::BT}) {
      auto rep = random_rep(sys, 4, rng);
      Annihilator ann = construct_annihilator(rep);
      auto twice = rep;
      twice.decomposition = Rational(2) * rep.decomposition;
      double h = energy_interval(sys).lo + 0.6 * energy_interval(sys).width();
      double r1 = annihilator_residual(rep, ann, h).value, r2 = annihilator_residual(twice, ann, h).value;
      CHECK(std::abs(r2 - 2 * r1) <= 1e-10 * std::abs(r2));
    }
  }

  TEST_CASE("zero target block is rejected") {
    MelnikovRepresentation rep;
    rep.sys = SystemId::BT;
    rep.n = 2;
    rep.decomposition = BasisDecomposition::element(SystemId::BT, {0, 0});
    CHECK_THROWS_AS(construct_annihilator(rep), PreconditionError);
  }

  TEST_CASE("annihilator export") {
    std::mt19937_64 rng(71);
    auto ann = construct_annihilator(random_rep(SystemId::BT, 2, rng));
    auto text = export_annihilator(ann);
    CHECK(text.find("\"P2\"") != std::string::npos);
    CHECK(text.find("\"P0\"") != std::string::npos);
  }
}

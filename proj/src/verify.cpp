#include "melnikov/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "melnikov/errors.hpp"
#include "melnikov/io.hpp"
#include "melnikov/parallel.hpp"
#include "melnikov/picard_fuchs.hpp"
#include "melnikov/quadrature.hpp"
#include "melnikov/reduction.hpp"
#include "melnikov/simulator.hpp"
#include "melnikov/zeros.hpp"

namespace melnikov {

namespace {

std::string sys_tag(SystemId sys) { return std::string(to_string(sys)); }

void finish(SuiteResult& r, bool hard_ok = true) { r.passed = hard_ok && r.metric <= r.threshold; }

/// Runs body(k) over k in [0, n) in parallel and returns the max of the slot values.
double parallel_max(std::size_t n, const std::function<double(std::size_t)>& body) {
  std::vector<double> slot(n, 0.0);
  parallel_for(n, [&](std::size_t k) { slot[k] = body(k); });
  double m = 0.0;
  for (double v : slot) m = std::max(m, v);
  return m;
}

}  // namespace

SuiteResult reflection_suite(SystemId sys, int max_degree, int samples) {
  SuiteResult r;
  r.name = "reflection/" + sys_tag(sys);
  r.threshold = 1e-8;
  auto hs = guarded_grid(sys, samples, kSuiteGuard);
  r.metric = parallel_max(hs.size(), [&](std::size_t k) {
    double m = 0.0;
    for (int d = 0; d <= max_degree; ++d)
      for (int j = 0; j <= d; ++j) {
        IntegralId id{sys, d - j, j};
        double I = abelian_integral(id, hs[k]);
        double J = lower_abelian_integral(id, hs[k]);
        double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        m = std::max(m, std::abs(J + sgn * I) / (1.0 + std::abs(I)));
      }
    return m;
  });
  r.checks = static_cast<long>(hs.size()) * (max_degree + 1) * (max_degree + 2) / 2;
  finish(r);
  return r;
}

SuiteResult base_identity_suite(SystemId sys, int samples) {
  SuiteResult r;
  r.name = "base-identities/" + sys_tag(sys);
  r.threshold = 1e-7;
  // Each identity: lhs = sum of terms.
  struct Identity {
    IndexPair lhs;
    std::function<std::vector<double>(double, const std::function<double(int, int)>&)> rhs;
  };
  std::vector<Identity> ids;
  if (sys == SystemId::LV) {
    ids = {
        {{1, 1}, [](double, auto I) { return std::vector<double>{I(0, 1)}; }},
        {{2, 1}, [](double h, auto I) { return std::vector<double>{-1.5 * I(0, 1) / h, I(-1, 1) / h}; }},
        {{3, 1}, [](double h, auto I) { return std::vector<double>{-0.5 * I(0, 1) / h}; }},
        {{2, 0}, [](double, auto I) { return std::vector<double>{4.0 / 3.0 * I(1, 0), -1.0 / 3.0 * I(0, 0)}; }},
        {{3, 0},
         [](double h, auto I) {
           return std::vector<double>{0.5 * I(0, 2) / h, -0.75 * I(1, 0) / h, 0.25 * I(0, 0) / h};
         }},
    };
  } else {
    ids = {
        {{2, 0}, [](double, auto I) { return std::vector<double>{I(0, 0)}; }},
        {{0, 2}, [](double h, auto I) { return std::vector<double>{1.5 * h * I(0, 0), -I(1, 0)}; }},
        {{3, 0}, [](double h, auto I) { return std::vector<double>{-0.75 * h * I(0, 0), 1.5 * I(1, 0)}; }},
        {{2, 1}, [](double, auto I) { return std::vector<double>{I(0, 1)}; }},
        {{1, 2}, [](double h, auto I) { return std::vector<double>{-0.8 * I(0, 0), 1.2 * h * I(1, 0)}; }},
        {{0, 3}, [](double h, auto I) { return std::vector<double>{18.0 / 11.0 * h * I(0, 1), -12.0 / 11.0 * I(1, 1)}; }},
    };
  }
  auto hs = guarded_grid(sys, samples, kSuiteGuard);
  r.metric = parallel_max(hs.size(), [&](std::size_t k) {
    double h = hs[k];
    auto I = [&](int i, int j) { return abelian_integral({sys, i, j}, h); };
    double m = 0.0;
    for (const auto& id : ids) {
      double lhs = I(id.lhs.i, id.lhs.j);
      auto terms = id.rhs(h, I);
      double rhs = 0.0, scale = std::abs(lhs);
      for (double t : terms) {
        rhs += t;
        scale = std::max(scale, std::abs(t));
      }
      m = std::max(m, std::abs(lhs - rhs) / scale);
    }
    return m;
  });
  r.checks = static_cast<long>(hs.size() * ids.size());
  finish(r);
  return r;
}

SuiteResult reduction_oracle_suite(SystemId sys, int n, int count, int samples, std::uint64_t seed) {
  SuiteResult r;
  r.name = "reduction-oracle/" + sys_tag(sys) + "/n=" + std::to_string(n);
  r.threshold = 1e-6;
  std::mt19937_64 rng(seed);
  std::vector<Perturbation> ps;
  for (int c = 0; c < count; ++c) ps.push_back(random_perturbation(n, rng));
  std::vector<MelnikovRepresentation> reps(ps.size());
  parallel_for(ps.size(), [&](std::size_t c) { reps[c] = melnikov_representation(sys, ps[c]); });
  EnergyInterval iv = energy_interval(sys);
  std::vector<double> hs(samples);
  for (int k = 0; k < samples; ++k) hs[k] = iv.lo + iv.width() * (k + 0.5) / samples;
  std::vector<std::vector<double>> bv(hs.size());
  parallel_for(hs.size(), [&](std::size_t k) { bv[k] = basis_values(sys, hs[k]); });
  std::size_t total = ps.size() * hs.size();
  r.metric = parallel_max(total, [&](std::size_t t) {
    std::size_t c = t / hs.size(), k = t % hs.size();
    MelnikovValue d = melnikov_direct_detail(sys, ps[c], hs[k]);
    double v = evaluate_representation(reps[c], hs[k], bv[k]);
    return std::abs(v - d.value) / std::max(d.magnitude, 1e-300);
  });
  r.checks = static_cast<long>(total);
  finish(r);
  return r;
}

SuiteResult pf_suite(SystemId sys, int samples, bool corrupt) {
  SuiteResult r;
  r.name = "picard-fuchs/" + sys_tag(sys);
  r.threshold = 1e-6;
  std::vector<PFSystem> pfs{pf_system(sys, Block::V1), pf_system(sys, Block::V2)};
  if (corrupt) {
    pfs[0].A(0, 0) += Rational(1);
    r.detail = "corrupted A(0,0) of V1";
  }
  auto hs = guarded_grid(sys, samples, kSuiteGuard);
  r.metric = parallel_max(hs.size(), [&](std::size_t k) {
    double m = 0.0;
    for (const auto& pf : pfs) m = std::max(m, pf_residual(pf, hs[k]));
    return m;
  });
  r.checks = static_cast<long>(hs.size() * pfs.size());
  finish(r);
  return r;
}

SuiteResult second_order_suite(SystemId sys, int samples) {
  SuiteResult r;
  r.name = "second-order/" + sys_tag(sys);
  r.threshold = 1e-5;
  std::vector<SecondOrder> rels =
      sys == SystemId::LV ? std::vector<SecondOrder>{SecondOrder::lv_v2}
                          : std::vector<SecondOrder>{SecondOrder::bt_v1_value, SecondOrder::bt_v1_slope,
                                                     SecondOrder::bt_v2_value, SecondOrder::bt_v2_slope};
  auto hs = guarded_grid(sys, samples, kSuiteGuard);
  r.metric = parallel_max(hs.size(), [&](std::size_t k) {
    double m = 0.0;
    for (auto rel : rels) m = std::max(m, second_order_residual(rel, hs[k]));
    return m;
  });
  r.checks = static_cast<long>(hs.size() * rels.size());
  finish(r);
  return r;
}

SuiteResult riccati_suite(SystemId sys, int samples) {
  SuiteResult r;
  r.name = "riccati/" + sys_tag(sys);
  r.threshold = 1e-5;
  std::vector<RiccatiKind> kinds = sys == SystemId::LV
                                       ? std::vector<RiccatiKind>{RiccatiKind::omega_lv}
                                       : std::vector<RiccatiKind>{RiccatiKind::chi_bt_v2, RiccatiKind::omega_bt_second};
  auto hs = guarded_grid(sys, samples, kSuiteGuard);
  std::vector<double> worst(hs.size(), 0.0);
  std::vector<long> skipped(hs.size(), 0);
  parallel_for(hs.size(), [&](std::size_t k) {
    for (auto kind : kinds) {
      try {
        worst[k] = std::max(worst[k], riccati_residual(sys, kind, hs[k]));
      } catch (const RatioDenominatorError&) {
        ++skipped[k];
      }
    }
  });
  for (std::size_t k = 0; k < hs.size(); ++k) {
    r.metric = std::max(r.metric, worst[k]);
    r.skipped += skipped[k];
  }
  r.checks = static_cast<long>(hs.size() * kinds.size()) - r.skipped;
  finish(r);
  return r;
}

SuiteResult derivative_suite(SystemId sys, int samples) {
  SuiteResult r;
  r.name = "derivatives/" + sys_tag(sys);
  // Metric is the worst error relative to its per-order tolerance.
  r.threshold = 1.0;
  EnergyInterval iv = energy_interval(sys);
  auto hs = guarded_grid(sys, samples, kSuiteGuard);
  r.metric = parallel_max(hs.size(), [&](std::size_t k) {
    double h = hs[k], m = 0.0;
    // Steps scale with the distance to the nearer end, where the integrals are singular.
    double room = std::min(h - iv.lo, iv.hi - h);
    double d1 = 1e-3 * room, d2 = 2e-2 * room;
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 3; ++j) {
        IntegralId id{sys, i, j};
        auto I = [&](double x) { return abelian_integral(id, x); };
        double fd1 = (I(h - 2 * d1) - 8 * I(h - d1) + 8 * I(h + d1) - I(h + 2 * d1)) / (12 * d1);
        double a1 = abelian_derivative(id, h, 1);
        m = std::max(m, std::abs(a1 - fd1) / (1.0 + std::abs(a1)) / 1e-6);
        if (j == 0) {
          double fd2 = (-I(h - 2 * d2) + 16 * I(h - d2) - 30 * I(h) + 16 * I(h + d2) - I(h + 2 * d2)) / (12 * d2 * d2);
          double a2 = abelian_derivative(id, h, 2);
          m = std::max(m, std::abs(a2 - fd2) / (1.0 + std::abs(a2)) / 1e-5);
        }
      }
    return m;
  });
  r.checks = static_cast<long>(hs.size()) * (12 + 3);
  r.detail = "tolerances 1e-6 (first order), 1e-5 (second order, j = 0)";
  finish(r);
  return r;
}

SuiteResult annihilator_suite(SystemId sys, int count, std::uint64_t seed) {
  SuiteResult r;
  r.name = "annihilator/" + sys_tag(sys);
  r.threshold = 1e-6;
  std::mt19937_64 rng(seed);
  std::vector<Perturbation> ps;
  for (int c = 0; c < count; ++c) ps.push_back(random_perturbation(2 + c % 5, rng));
  EnergyInterval iv = energy_interval(sys);
  const double fr[] = {0.23, 0.51, 0.77};
  std::vector<double> consistency(ps.size(), 0.0);
  std::vector<std::string> failure(ps.size());
  parallel_for(ps.size(), [&](std::size_t c) {
    try {
      auto rep = melnikov_representation(sys, ps[c]);
      Annihilator ann = construct_annihilator(rep);
      for (const auto& q : annihilation_remainder(rep, ann))
        if (!q.is_zero()) failure[c] = "nonzero remainder";
      auto deg = annihilator_degrees(sys, ann.n);
      if (ann.P2.degree() > deg.p2 || ann.P1.degree() > deg.p1 || ann.P0.degree() > deg.p0)
        failure[c] = "degree bound exceeded";
      if (ann.P2.is_zero()) failure[c] = "vanishing leading coefficient";
      for (double f : fr) {
        double h = iv.lo + f * iv.width();
        OperatorValue a = annihilator_residual(rep, ann, h), b = block_residual(rep, ann, h);
        double scale = std::max({a.scale, b.scale, 1e-300});
        consistency[c] = std::max(consistency[c], std::abs(a.value - b.value) / scale);
      }
    } catch (const Error& e) {
      failure[c] = e.what();
    }
  });
  bool hard_ok = true;
  for (std::size_t c = 0; c < ps.size(); ++c) {
    r.metric = std::max(r.metric, consistency[c]);
    if (!failure[c].empty()) {
      hard_ok = false;
      if (r.detail.empty()) r.detail = "case " + std::to_string(c) + ": " + failure[c];
    }
  }
  r.checks = count;
  finish(r, hard_ok);
  return r;
}

SuiteResult bt_second_derivative_suite() {
  SuiteResult r;
  r.name = "second-derivative-zero/BT";
  r.threshold = 1e-6;
  SecondDerivativeZero z = bt_second_derivative_zero_detail();
  // Finite-difference root of I(0,0) = x_b - x_a, independent of the closed form.
  auto i00 = [](double h) {
    auto e = oval_endpoints(SystemId::BT, h);
    return e.x_b - e.x_a;
  };
  const double d = 1e-3;
  auto second = [&](double h) {
    return (-i00(h - 2 * d) + 16 * i00(h - d) - 30 * i00(h) + 16 * i00(h + d) - i00(h + 2 * d)) / (12 * d * d);
  };
  double a = z.h0 - 0.05, b = z.h0 + 0.05;
  bool hard_ok = z.sign_changes == 1 && second(a) * second(b) < 0.0;
  double root = z.h0;
  if (hard_ok) {
    boost::math::tools::eps_tolerance<double> tol(45);
    std::uintmax_t it = 100;
    auto br = boost::math::tools::toms748_solve(second, a, b, tol, it);
    root = 0.5 * (br.first + br.second);
  }
  r.metric = std::abs(root - z.h0);
  r.checks = 1;
  char buf[160];
  std::snprintf(buf, sizeof buf, "h0=%.12f fd_root=%.12f sign_changes=%d", z.h0, root, z.sign_changes);
  r.detail = buf;
  finish(r, hard_ok);
  return r;
}

SuiteResult bound_envelope_suite(SystemId sys, int n, int count, std::uint64_t seed, int grid) {
  SuiteResult r;
  r.name = "bound-envelope/" + sys_tag(sys) + "/n=" + std::to_string(n);
  r.threshold = theoretical_bound(sys, n);
  std::mt19937_64 rng(seed);
  std::vector<Perturbation> ps;
  for (int c = 0; c < count; ++c) ps.push_back(random_perturbation(n, rng));
  basis_grid(sys, grid);
  r.metric = parallel_max(ps.size(), [&](std::size_t c) {
    return static_cast<double>(isolate_zeros(melnikov_representation(sys, ps[c]), grid).odd_count());
  });
  r.checks = count;
  r.detail = "max odd-simple zeros " + std::to_string(static_cast<int>(r.metric)) + " vs bound " +
             std::to_string(static_cast<int>(r.threshold));
  finish(r);
  return r;
}

SuiteResult lv_positivity_suite(int samples) {
  SuiteResult r;
  r.name = "positivity-monotonicity/LV";
  r.threshold = 0.0;
  auto hs = guarded_grid(SystemId::LV, samples, kSuiteGuard);
  std::vector<double> i01(hs.size()), i00(hs.size());
  parallel_for(hs.size(), [&](std::size_t k) {
    i01[k] = abelian_integral({SystemId::LV, 0, 1}, hs[k]);
    i00[k] = abelian_integral({SystemId::LV, 0, 0}, hs[k]);
  });
  long bad = 0;
  double min01 = i01[0], minstep = INFINITY;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (!(i01[k] > 0.0)) ++bad;
    min01 = std::min(min01, i01[k]);
    if (k > 0) {
      if (!(i00[k] > i00[k - 1])) ++bad;
      minstep = std::min(minstep, i00[k] - i00[k - 1]);
    }
  }
  r.metric = static_cast<double>(bad);
  r.checks = static_cast<long>(2 * hs.size() - 1);
  char buf[128];
  std::snprintf(buf, sizeof buf, "min I(0,1)=%.6e min I(0,0) increment=%.6e", min01, minstep);
  r.detail = buf;
  finish(r);
  return r;
}

SuiteResult simulation_suite(SystemId sys, double eps, int samples) {
  SuiteResult r;
  r.name = "simulation/" + sys_tag(sys);
  r.threshold = 0.0;
  EnergyInterval iv = energy_interval(sys);
  double xa = section_coordinate(sys, iv.lo + 0.1 * iv.width());
  double xb = section_coordinate(sys, iv.lo + 0.9 * iv.width());
  auto seg = std::minmax(xa, xb);
  const double fr[] = {0.2, 0.35, 0.5, 0.65, 0.8};
  const Rational scales[] = {Rational(1), Rational(2), Rational(1, 2), Rational(-1), Rational(3)};
  const int definite[] = {0, 6, 2, 8, 4};
  long bad = 0;
  double worst_dh = 0.0;
  std::string detail;
  for (int k = 0; k < 5; ++k) {
    double hstar = iv.lo + fr[k] * iv.width();
    Perturbation p = one_zero_perturbation(sys, hstar, scales[k]);
    ZeroReport z = isolate_zeros(melnikov_representation(sys, p));
    auto f = find_limit_cycles(sys, p, eps, {seg.first, seg.second}, samples);
    bool ok = z.odd_count() == 1 && f.size() == 1;
    if (ok) {
      worst_dh = std::max(worst_dh, std::abs(f[0].h_cycle - hstar));
      ok = std::abs(f[0].h_cycle - hstar) < 0.05;
    }
    if (!ok) {
      ++bad;
      detail += " one-zero#" + std::to_string(k) + ": zeros=" + std::to_string(z.odd_count()) +
                " cycles=" + std::to_string(f.size());
    }
    Perturbation s = sign_definite_perturbation(definite[k]);
    ZeroReport zs = isolate_zeros(melnikov_representation(sys, s));
    auto fs = find_limit_cycles(sys, s, eps, {seg.first, seg.second}, samples);
    if (!zs.brackets.empty() || !fs.empty()) {
      ++bad;
      detail += " definite#" + std::to_string(k) + ": zeros=" + std::to_string(zs.brackets.size()) +
                " cycles=" + std::to_string(fs.size());
    }
  }
  r.metric = static_cast<double>(bad);
  r.checks = 10;
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |h_cycle - h*| = %.3e", worst_dh);
  r.detail = buf + detail;
  finish(r);
  return r;
}

std::vector<SuiteResult> default_suites(SystemId sys, bool corrupt_pf) {
  std::vector<SuiteResult> out;
  out.push_back(pf_suite(sys, 30, corrupt_pf));
  out.push_back(second_order_suite(sys));
  out.push_back(riccati_suite(sys));
  out.push_back(reflection_suite(sys));
  out.push_back(derivative_suite(sys));
  out.push_back(annihilator_suite(sys));
  if (sys == SystemId::BT) out.push_back(bt_second_derivative_suite());
  return out;
}

std::string suite_line(const SuiteResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %s metric=%.3e threshold=%.3e checks=%ld", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.metric, r.threshold, r.checks);
  std::string s = buf;
  if (r.skipped) s += " skipped=" + std::to_string(r.skipped);
  if (!r.detail.empty()) s += " (" + r.detail + ")";
  return s;
}

}  // namespace melnikov

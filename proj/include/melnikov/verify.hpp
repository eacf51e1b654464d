#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "melnikov/systems.hpp"

namespace melnikov {

/// Outcome of one numerical check family: passed iff metric <= threshold (and no hard failure).
struct SuiteResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double threshold = 0.0;
  long checks = 0;
  long skipped = 0;
  std::string detail;
};

/// Fraction of the energy interval kept clear at each end by the grid suites.
inline constexpr double kSuiteGuard = 1e-2;

/// |J(i,j) + (-1)^j I(i,j)| / (1 + |I|) over i + j <= max_degree, i, j >= 0.
SuiteResult reflection_suite(SystemId sys, int max_degree = 8, int samples = 20);

/// Low-order identities among the integrals, both sides by quadrature; metric relative to the largest term.
SuiteResult base_identity_suite(SystemId sys, int samples = 20);

/// Reduced representation against direct quadrature of M for `count` random degree-n perturbations;
/// metric |rep - direct| / L1 magnitude of the integrand, at the midpoints of `samples` equal cells.
SuiteResult reduction_oracle_suite(SystemId sys, int n, int count = 20, int samples = 20, std::uint64_t seed = 1);

/// First-order system residuals (< 1e-6) on a guarded grid; corrupt adds 1 to A(0,0) of the first block.
SuiteResult pf_suite(SystemId sys, int samples = 30, bool corrupt = false);
/// Second-order relation residuals (< 1e-5).
SuiteResult second_order_suite(SystemId sys, int samples = 30);

/// Riccati residuals of the system's ratios (< 1e-5); points with a vanishing denominator are skipped.
SuiteResult riccati_suite(SystemId sys, int samples = 30);

/// h-derivatives of the integrals against central differences of the quadrature.
SuiteResult derivative_suite(SystemId sys, int samples = 20);

/// Random representations with n cycling over 2..6: exact annihilation, degree bounds,
/// and |L[M] - R| / scale at a few interior points.
SuiteResult annihilator_suite(SystemId sys, int count = 50, std::uint64_t seed = 1);

/// BT: single sign change of I(0,0)'' and agreement of the closed-form root with the
/// root of finite differences of I(0,0) (to 1e-6).
SuiteResult bt_second_derivative_suite();

/// Odd-simple zero counts of `count` random degree-n perturbations against the bound.
SuiteResult bound_envelope_suite(SystemId sys, int n, int count = 100, std::uint64_t seed = 1, int grid = 512);

/// LV: I(0,1) > 0 and I(0,0) strictly increasing on a guarded grid.
SuiteResult lv_positivity_suite(int samples = 200);

/// Return-map cycle search at eps on five one-zero perturbations (exactly one cycle within
/// 0.05 of h*) and five sign-definite ones (no cycle).
SuiteResult simulation_suite(SystemId sys, double eps = 1e-3, int samples = 40);

/// Default verify set for one system.
std::vector<SuiteResult> default_suites(SystemId sys, bool corrupt_pf = false);

std::string suite_line(const SuiteResult& r);

}  // namespace melnikov

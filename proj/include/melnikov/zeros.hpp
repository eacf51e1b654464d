#pragma once

#include <string>
#include <vector>

#include "melnikov/reduction.hpp"

namespace melnikov {

/// Upper bound on limit cycles from the period annulus for degree-n perturbations.
/// LV: 37, 57, 93 for n = 1, 2, 3 and 36n - 65 for n >= 4. BT: 12n + 6.
int theoretical_bound(SystemId sys, int n);

enum class ZeroKind { odd_simple, even_suspected };
std::string_view to_string(ZeroKind k);

struct ZeroBracket {
  double h_lo;
  double h_hi;
  double root;
  ZeroKind kind;
};

struct ZeroReport {
  SystemId sys = SystemId::LV;
  int n = 1;
  int grid = 0;
  double tol = 0.0;
  double threshold = 0.0;  // tol * (1 + max grid |M|)
  double max_abs = 0.0;
  bool all_zero = false;
  std::vector<ZeroBracket> brackets;
  int bound = 0;
  bool within_bound = true;

  int odd_count() const;
  int even_count() const;
};

inline constexpr int kDefaultGrid = 512;
inline constexpr double kDefaultZeroTol = 1e-10;
inline constexpr double kZeroGuard = 1e-3;  // fraction of the interval width

/// Uniform grid on the guarded interval and the basis integrals on it (cached per system and size).
struct BasisGrid {
  std::vector<double> h;
  std::vector<std::vector<double>> values;  // values[k] = basis_values(sys, h[k])
};
const BasisGrid& basis_grid(SystemId sys, int grid);

ZeroReport isolate_zeros(const MelnikovRepresentation& rep, int grid = kDefaultGrid, double tol = kDefaultZeroTol);

/// Zero h0 of I(0,0)'' = x_b'' - x_a'' for BT, with x'' = 2x / (1 - x^2)^3.
struct SecondDerivativeZero {
  double h0;
  double h_lo, h_hi;  // final bisection bracket
  int sign_changes;   // on the sampling grid
};
SecondDerivativeZero bt_second_derivative_zero_detail(int samples = 4096);
double bt_second_derivative_zero();

/// Closed-form I(0,0)'' for BT.
double bt_i00_second(double h);

std::string zero_report_json(const ZeroReport& r);
/// One bracket per row: index,h_lo,h_hi,root,kind
std::string zero_report_csv(const ZeroReport& r);

}  // namespace melnikov

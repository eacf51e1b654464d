#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "melnikov/rational.hpp"

namespace melnikov {

/// The two unperturbed systems.
///
/// LV is the reduced generic Lotka-Volterra center
///   x' = x y,  y' = 3/2 y^2 - 9/8 x^2 + 3/2 x - 3/8
/// with first integral H = x^-3 (y^2/2 - 9/8 x^2 + 3/4 x - 1/8) and
/// integrating factor x^-4. BT is the Bogdanov-Takens center
///   x' = y,  y' = -1 + x^2,  H = y^2/2 + x - x^3/3.
enum class SystemId { LV, BT };

std::string_view to_string(SystemId sys);
SystemId parse_system(std::string_view name);

struct EnergyInterval {
  double lo;  // center level
  double hi;  // saddle level
  double width() const { return hi - lo; }
  bool contains(double h) const { return h > lo && h < hi; }
};

EnergyInterval energy_interval(SystemId sys);

/// Guard band around the interval ends inside which ovals are treated as degenerate.
inline constexpr double kDegenerateGuard = 1e-12;

/// Integrating factor mu(x, y): x^-4 for LV, 1 for BT.
double integrating_factor(SystemId sys, double x);

/// Exponent offset of the Abelian integrand: x^(i + offset) y^j (LV: -4, BT: 0).
constexpr int exponent_offset(SystemId sys) { return sys == SystemId::LV ? -4 : 0; }

double hamiltonian(SystemId sys, double x, double y);

/// Restriction F(x) = H(x, 0) and its first three derivatives.
struct SectionEnergy {
  double value, d1, d2, d3;
};
SectionEnergy section_energy(SystemId sys, double x);

/// Crossings of the level oval H = h with the switching line y = 0.
struct OvalEndpoints {
  double x_a;  // left crossing, where the flow enters y > 0
  double x_b;  // right crossing
  double h;
  double center() const { return 0.5 * (x_a + x_b); }
  double half_width() const { return 0.5 * (x_b - x_a); }
};

OvalEndpoints oval_endpoints(SystemId sys, double h);

/// Remaining real root x_c of the cubic whose other roots are x_a, x_b.
/// For both systems y^2 on the upper branch factors as
///   y^2 = (x - x_a)(x_b - x)·q(x),  q linear and positive on [x_a, x_b].
double third_root(SystemId sys, const OvalEndpoints& ends);

/// q(x) from the factorization above.
double branch_cofactor(SystemId sys, const OvalEndpoints& ends, double x);

/// y >= 0 with H(x, y) = h on [x_a, x_b]; exactly 0 at the endpoints.
double upper_branch(SystemId sys, double x, double h);
double upper_branch(SystemId sys, double x, const OvalEndpoints& ends);

enum class Side { upper, lower, on_section };

struct PlanarState {
  double x = 0.0;
  double y = 0.0;
  Side side = Side::on_section;
};

/// Side implied by sign(y); on_section for y == 0.
Side side_of(double y);

/// Coefficient array of a perturbation polynomial, indexed (i, j) with i + j <= n.
class TriangularArray {
 public:
  TriangularArray() = default;
  explicit TriangularArray(int degree);

  int degree() const { return degree_; }
  const Rational& operator()(int i, int j) const { return values_[index(i, j)]; }
  void set(int i, int j, const Rational& value);
  bool is_zero() const;

  /// sum c_ij x^i y^j
  double evaluate(double x, double y) const;

  friend bool operator==(const TriangularArray&, const TriangularArray&) = default;

 private:
  std::size_t index(int i, int j) const;

  int degree_ = 0;
  std::vector<Rational> values_;
  std::vector<double> numeric_;  // mirrors values_ for evaluate()
};

/// The four piecewise perturbation polynomials f±(x, y) = sum a±_ij x^i y^j,
/// g±(x, y) = sum b±_ij x^i y^j with exact rational coefficients.
class Perturbation {
 public:
  enum class Component { a_plus, a_minus, b_plus, b_minus };

  Perturbation() : Perturbation(0) {}
  explicit Perturbation(int degree);

  int degree() const { return degree_; }
  const TriangularArray& a_plus() const { return arrays_[0]; }
  const TriangularArray& a_minus() const { return arrays_[1]; }
  const TriangularArray& b_plus() const { return arrays_[2]; }
  const TriangularArray& b_minus() const { return arrays_[3]; }

  const Rational& coefficient(Component c, int i, int j) const;
  void set(Component c, int i, int j, const Rational& value);

  bool is_zero() const;

  /// f and g of the half-plane indicated by side (upper or lower).
  double f(Side side, double x, double y) const;
  double g(Side side, double x, double y) const;

  /// this + scale * other (degrees are padded to the larger one).
  Perturbation combined(const Perturbation& other, const Rational& scale) const;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;

 private:
  const TriangularArray& pick(Component c) const { return arrays_[static_cast<std::size_t>(c)]; }
  TriangularArray& pick(Component c) { return arrays_[static_cast<std::size_t>(c)]; }

  int degree_;
  std::array<TriangularArray, 4> arrays_;
};

std::string_view to_string(Perturbation::Component c);
Perturbation::Component parse_component(std::string_view name);

/// Right-hand side of the perturbed piecewise system on the given side.
/// eps = 0 gives the unperturbed field.
std::pair<double, double> vector_field(SystemId sys, const PlanarState& state, double eps,
                                       const Perturbation& p);

}  // namespace melnikov

#pragma once

#include <map>
#include <string>
#include <vector>

#include "melnikov/polynomial.hpp"
#include "melnikov/quadrature.hpp"
#include "melnikov/systems.hpp"

namespace melnikov {

struct IndexPair {
  int i;
  int j;
  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

std::string to_string(const IndexPair& ij);  // "I(i,j)"

/// LV: I(0,1), I(-1,1), I(1,0), I(0,0), I(0,2)  (sigma block first, then tau)
/// BT: I(0,0), I(1,0), I(0,1), I(1,1)
const std::vector<IndexPair>& basis(SystemId sys);
int basis_index(SystemId sys, IndexPair e);  // -1 if not a basis element

/// value(h) = h^-denom_power * sum_e coeffs[e](h) * e(h), coeffs aligned with basis(sys).
class BasisDecomposition {
 public:
  BasisDecomposition() = default;
  explicit BasisDecomposition(SystemId sys);
  static BasisDecomposition element(SystemId sys, IndexPair e);

  SystemId system() const { return sys_; }
  int denom_power() const { return denom_power_; }
  const std::vector<RationalPoly>& coeffs() const { return coeffs_; }
  const RationalPoly& coeff(IndexPair e) const;
  bool is_zero() const;

  /// Same value with the smallest denominator power.
  BasisDecomposition normalized() const;
  /// Same value over h^m; m must be >= the minimal power.
  BasisDecomposition over_power(int m) const;

  /// p(h) / h^k * this
  BasisDecomposition scaled(const RationalPoly& p, int k = 0) const;

  BasisDecomposition& operator+=(const BasisDecomposition& o);
  friend BasisDecomposition operator+(BasisDecomposition a, const BasisDecomposition& b) { return a += b; }
  friend BasisDecomposition operator*(const Rational& s, const BasisDecomposition& d) {
    return d.scaled(RationalPoly::constant(s));
  }
  /// Coefficient-wise comparison after normalization.
  friend bool operator==(const BasisDecomposition& a, const BasisDecomposition& b);

  /// Evaluate with basis values ordered like basis(sys).
  double evaluate(const std::vector<double>& basis_values, double h) const;

 private:
  SystemId sys_ = SystemId::LV;
  int denom_power_ = 0;
  std::vector<RationalPoly> coeffs_;
};

/// Collapses the perturbation into sum rho_ij I_ij over upper-branch integrals.
std::map<IndexPair, Rational> rho_from_perturbation(SystemId sys, const Perturbation& p);

/// Exact decomposition of I_{i,j}; memoized, safe to call concurrently.
/// LV needs i >= -3, BT needs i, j >= 0.
BasisDecomposition reduce_monomial(SystemId sys, int i, int j);

struct MelnikovRepresentation {
  SystemId sys = SystemId::LV;
  int n = 1;
  BasisDecomposition decomposition;
};

/// Denominator power of the representation: LV n-3 (n >= 4), n-2 (n = 2, 3), 0 (n = 1); BT 0.
int representation_denom_power(SystemId sys, int n);

/// Per-basis-element degree bounds of the representation (-1: must vanish).
std::vector<int> representation_degree_bounds(SystemId sys, int n);

/// rho-weighted sum of monomial reductions over h^representation_denom_power(n).
MelnikovRepresentation melnikov_representation(SystemId sys, const Perturbation& p);

/// Basis integrals at h, in basis(sys) order.
std::vector<double> basis_values(SystemId sys, double h, const QuadratureOptions& opt = {});

double evaluate_representation(const MelnikovRepresentation& rep, double h);
double evaluate_representation(const MelnikovRepresentation& rep, double h, const std::vector<double>& basis_vals);

struct DegreeCheck {
  bool denom_ok = true;
  std::vector<int> degrees;
  std::vector<int> bounds;
  std::vector<int> excess;  // max(0, degree - bound)
  bool ok() const;
};
DegreeCheck check_degrees(const MelnikovRepresentation& rep);

/// JSON document: system, degree, denom_power, and per basis element the
/// ascending coefficients as ["num", "den"] string pairs.
std::string export_representation(const MelnikovRepresentation& rep);
MelnikovRepresentation import_representation(const std::string& json);

}  // namespace melnikov

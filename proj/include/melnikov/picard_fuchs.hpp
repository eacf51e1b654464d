#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "melnikov/polynomial.hpp"
#include "melnikov/reduction.hpp"

namespace melnikov {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

/// Matrix with polynomial entries, row-major.
using PolyMatrix = std::vector<std::vector<RationalPoly>>;
using PolyRow = std::vector<RationalPoly>;

enum class Block { V1, V2 };

/// LV: V1 = (I(0,1), I(-1,1)), V2 = (I(1,0), I(0,0), I(0,2))
/// BT: V1 = (I(0,0), I(1,0)), V2 = (I(0,1), I(1,1))
const std::vector<IndexPair>& block_elements(SystemId sys, Block block);

/// V(h) = (A h + B) V'(h)
struct PFSystem {
  SystemId sys = SystemId::LV;
  Block block = Block::V1;
  RationalMatrix A;
  RationalMatrix B;
};

PFSystem pf_system(SystemId sys, Block block);

/// max|V - (Ah + B)V'| / (1 + max|V|)
double pf_residual(const PFSystem& pf, double h);

/// max|(Ah + B)V'' - (E - A)V'| / (1 + max|V'|)
double pf_differentiated_residual(const PFSystem& pf, double h);

/// Second-order relations between a block and its derivatives.
enum class SecondOrder {
  lv_v2,        // h(2h+1) V2'' = N(h) (I(1,0)', I(0,0)')^T
  bt_v1_value,  // V1  = (-9/2 h^2 E + C1 h + D1) V1''
  bt_v1_slope,  // V1' = (C2 h + D2) V1''
  bt_v2_value,  // V2  = (C3 h^2 + D3) V2''
  bt_v2_slope,  // V2' = (C4 h + D4) V2''
};

/// corrected: verified coefficient tables; printed: variant with two known-wrong entries, kept for comparison.
enum class MatrixSource { corrected, printed };

/// Polynomial matrix of a relation: lv_v2 gives the 3x2 N(h); the BT ones the 2x2 factor.
PolyMatrix second_order_matrix(SecondOrder rel, MatrixSource src = MatrixSource::corrected);

double second_order_residual(SecondOrder rel, double h, MatrixSource src = MatrixSource::corrected);
/// Max over the relations available for the block (LV/V1 has none).
double second_order_residual(SystemId sys, Block block, double h);

/// L = P2 d^2/dh^2 + P1 d/dh + P0
struct Annihilator {
  SystemId sys = SystemId::LV;
  int n = 1;
  RationalPoly P2, P1, P0;
  int kernel_dim = 0;
};

struct AnnihilatorDegrees {
  int p2, p1, p0;
};
AnnihilatorDegrees annihilator_degrees(SystemId sys, int n);

/// Block the operator annihilates: LV V1 (sigma), BT V2 (the I(0,1), I(1,1) part).
Block target_block(SystemId sys);

/// Coefficient row of rep's numerator h^m M on one block.
PolyRow block_coefficients(const MelnikovRepresentation& rep, Block block);

Annihilator construct_annihilator(const MelnikovRepresentation& rep);

/// X, Y: coefficients of the target block's second derivatives in L applied to it.
PolyRow annihilation_remainder(const MelnikovRepresentation& rep, const Annihilator& ann);

struct OperatorValue {
  double value = 0.0;
  double scale = 0.0;  // sum of |term| magnitudes
};

/// L applied to the numerator h^m M numerically (basis derivatives from quadrature).
OperatorValue annihilator_residual(const MelnikovRepresentation& rep, const Annihilator& ann, double h);

/// Polynomials Q of R = L[non-target block]:
///   LV: R = (Q0 I(1,0)' + Q1 I(0,0)') / (h(2h+1)) + Q2 I(0,2)'
///   BT: R = Q0 I(0,0)'' + Q1 I(1,0)''
PolyRow residual_polynomials(const MelnikovRepresentation& rep, const Annihilator& ann);

/// R evaluated from residual_polynomials with exact endpoint derivatives.
OperatorValue block_residual(const MelnikovRepresentation& rep, const Annihilator& ann, double h);

enum class RiccatiKind {
  omega_lv,         // w = I(-1,1)/I(0,1)
  chi_bt_v2,        // w = I(1,1)/I(0,1)
  omega_bt_second,  // w = I(1,0)''/I(0,0)''
};

double riccati_residual(SystemId sys, RiccatiKind kind, double h);

/// Standoff around the singular loci of the relations above.
inline constexpr double kSingularStandoff = 1e-3;

/// JSON document with P2, P1, P0 as ["num", "den"] pairs.
std::string export_annihilator(const Annihilator& ann);

}  // namespace melnikov

#pragma once

#include <functional>
#include <vector>

#include "melnikov/systems.hpp"

namespace melnikov {

/// I_{i,j}(h) = integral over the upper half-oval of x^(i + offset) y^j dx.
struct IntegralId {
  SystemId sys;
  int i;
  int j;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;  // relative to the L1 size of the integrand
  double abs_tol = 1e-15;
  int max_nodes = 1 << 14;
};

/// Gauss-Legendre rule on [-1, 1] with n nodes (cached; n a power of two >= 8).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double magnitude = 0.0;  // integral of |f|
  int nodes = 0;
};

/// Integral of f over [a, b] by Gauss-Legendre with order doubling until two
/// consecutive estimates agree. Throws AccuracyError at the node cap.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& opt = {});

/// Vector-valued variant: all components share the nodes; convergence is
/// required for every component.
std::vector<QuadResult> integrate_many(const std::function<void(double, double*)>& f, int count,
                                       double a, double b, const QuadratureOptions& opt = {});

/// Point on the oval for the angle parametrization x = c + r sin(t),
/// y = r cos(t) sqrt(q(x)), t in [-pi/2, 3pi/2]. t < pi/2 is the upper branch.
struct OvalPoint {
  double x, y;
  double dx;  // dx/dt
  double dy;  // dy/dt
};
OvalPoint oval_point(SystemId sys, const OvalEndpoints& ends, double t);

double abelian_integral(const IntegralId& id, double h, const QuadratureOptions& opt = {});
double abelian_integral(const IntegralId& id, const OvalEndpoints& ends, const QuadratureOptions& opt = {});

/// J_{i,j}: the same integrand over the lower branch, from x_b back to x_a.
double lower_abelian_integral(const IntegralId& id, double h, const QuadratureOptions& opt = {});

/// d^order/dh^order I_{i,j}(h), order >= 0.
///   j >= 2: I' = j I_{i+3, j-2} (LV), j I_{i, j-2} (BT)
///   j == 1: I' = I_{i+3,-1} (LV), I_{i,-1} (BT) by quadrature of the 1/y integrand;
///           higher orders by Richardson-extrapolated central differences of that
///   j == 0: exact up to order 3, from the endpoint derivatives x' = 1/F'(x)
double abelian_derivative(const IntegralId& id, double h, int order = 1,
                          const QuadratureOptions& opt = {});

/// Endpoint derivatives dx/dh, d2x/dh2, d3x/dh3 at one crossing x(h).
struct EndpointJet {
  double x, d1, d2, d3;
};
EndpointJet endpoint_jet(SystemId sys, double x);

/// Five-point central difference with one Richardson step; the step is
/// width * 1e-3, shrunk so all stencil points stay inside the guarded interval.
double richardson_derivative(SystemId sys, const std::function<double(double)>& f, double h);

enum class MelnikovForm {
  green,  // dy-terms rewritten as dx-integrals by Green's identity
  raw,    // g dx - f dy integrated as is
};

struct MelnikovValue {
  double value = 0.0;
  double magnitude = 0.0;  // integral of |integrand| over the oval
};

/// M(h) = int_{upper} mu (g+ dx - f+ dy) + int_{lower} mu (g- dx - f- dy) by direct quadrature.
MelnikovValue melnikov_direct_detail(SystemId sys, const Perturbation& p, double h,
                                     MelnikovForm form = MelnikovForm::green,
                                     const QuadratureOptions& opt = {});
double melnikov_direct(SystemId sys, const Perturbation& p, double h,
                       MelnikovForm form = MelnikovForm::green, const QuadratureOptions& opt = {});

/// Upper-branch integral of x^(i + offset) y^j dy (tests Green's identity).
double abelian_dy_integral(const IntegralId& id, double h, const QuadratureOptions& opt = {});

}  // namespace melnikov

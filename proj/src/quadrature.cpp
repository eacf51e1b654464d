#include "melnikov/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include <boost/math/constants/constants.hpp>

#include "melnikov/errors.hpp"

namespace melnikov {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr int kMinNodes = 16;
constexpr int kLevels = 16;

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

// power of x for possibly negative exponents, x != 0
double ipow(double x, int k) {
  if (k >= 0) {
    double r = 1.0, b = x;
    for (unsigned e = static_cast<unsigned>(k); e; e >>= 1) {
      if (e & 1u) r *= b;
      b *= b;
    }
    return r;
  }
  return 1.0 / ipow(x, -k);
}

// b^m - a^m without cancellation when a and b are close and of equal sign
double pow_diff(double a, double b, int m) {
  if (m == 0) return 0.0;
  if (a != 0.0 && b != 0.0 && (a > 0) == (b > 0)) {
    double sign = (a < 0 && (m % 2 != 0)) ? -1.0 : 1.0;
    double aa = std::fabs(a), bb = std::fabs(b);
    return sign * std::pow(aa, m) * std::expm1(m * std::log1p((bb - aa) / aa));
  }
  return ipow(b, m) - ipow(a, m);
}

// integral of x^k over [a, b]
double power_integral(double a, double b, int k) {
  if (k == -1) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("log antiderivative needs positive endpoints");
    return std::log1p((b - a) / a);
  }
  return pow_diff(a, b, k + 1) / (k + 1);
}

double gradient_q(SystemId sys, const OvalEndpoints& e) { return sys == SystemId::LV ? -2.0 * e.h : -2.0 / 3.0; }

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::array<std::once_flag, kLevels> flags;
  static std::array<GaussRule, kLevels> rules;
  int level = 0;
  while ((8 << level) < n) ++level;
  if ((8 << level) != n || level >= kLevels) throw PreconditionError("Gauss rule size must be 8 * 2^k");
  auto l = static_cast<std::size_t>(level);
  std::call_once(flags[l], [&] { rules[l] = build_rule(n); });
  return rules[l];
}

std::vector<QuadResult> integrate_many(const std::function<void(double, double*)>& f, int count,
                                       double a, double b, const QuadratureOptions& opt) {
  auto nc = static_cast<std::size_t>(count);
  std::vector<double> buf(nc);
  auto estimate = [&](int n) {
    const GaussRule& rule = gauss_legendre(n);
    std::vector<QuadResult> out(nc);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      f(mid + half * rule.nodes[k], buf.data());
      for (std::size_t c = 0; c < nc; ++c) {
        out[c].value += rule.weights[k] * buf[c];
        out[c].magnitude += rule.weights[k] * std::fabs(buf[c]);
      }
    }
    for (auto& r : out) {
      r.value *= half;
      r.magnitude *= std::fabs(half);
      r.nodes = n;
    }
    return out;
  };

  std::vector<QuadResult> prev = estimate(kMinNodes);
  for (int n = 2 * kMinNodes; n <= opt.max_nodes; n *= 2) {
    std::vector<QuadResult> cur = estimate(n);
    bool ok = true;
    double worst = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      double diff = std::fabs(cur[c].value - prev[c].value);
      if (!(diff <= opt.abs_tol + opt.rel_tol * cur[c].magnitude)) {
        ok = false;
        worst = std::max(worst, diff);
      }
    }
    if (ok) return cur;
    if (n * 2 > opt.max_nodes) {
      throw AccuracyError("quadrature did not converge within the node cap", cur[0].value, worst);
    }
    prev = std::move(cur);
  }
  throw AccuracyError("quadrature node cap below the starting order", prev[0].value, 0.0);
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& opt) {
  return integrate_many([&](double t, double* out) { out[0] = f(t); }, 1, a, b, opt)[0];
}

OvalPoint oval_point(SystemId sys, const OvalEndpoints& e, double t) {
  double c = e.center(), r = e.half_width();
  double s = std::sin(t), co = std::cos(t);
  double x = c + r * s;
  double q = std::max(branch_cofactor(sys, e, x), 0.0);
  double sq = std::sqrt(q);
  OvalPoint p;
  p.x = x;
  p.y = r * co * sq;
  p.dx = r * co;
  p.dy = -r * s * sq + (sq > 0.0 ? r * r * co * co * gradient_q(sys, e) / (2.0 * sq) : 0.0);
  return p;
}

double abelian_integral(const IntegralId& id, const OvalEndpoints& e, const QuadratureOptions& opt) {
  if (id.j < -1) throw UnsupportedIndexError("integrand exponent j must be >= -1");
  int k = id.i + exponent_offset(id.sys);
  if (id.j == 0) return power_integral(e.x_a, e.x_b, k);
  double c = e.center(), r = e.half_width();
  // x = c + r sin t:  x^k y^j dx = x^k (r cos t)^(j+1) q^(j/2) dt
  auto f = [&](double t) {
    double x = c + r * std::sin(t);
    double q = branch_cofactor(id.sys, e, x);
    double rc = r * std::cos(t);
    return ipow(x, k) * ipow(rc, id.j + 1) * std::pow(q, 0.5 * id.j);
  };
  return integrate(f, -0.5 * kPi, 0.5 * kPi, opt).value;
}

double abelian_integral(const IntegralId& id, double h, const QuadratureOptions& opt) {
  return abelian_integral(id, oval_endpoints(id.sys, h), opt);
}

double lower_abelian_integral(const IntegralId& id, double h, const QuadratureOptions& opt) {
  if (id.j < 0) throw UnsupportedIndexError("lower integral needs j >= 0");
  OvalEndpoints e = oval_endpoints(id.sys, h);
  int k = id.i + exponent_offset(id.sys);
  auto f = [&](double t) {
    OvalPoint p = oval_point(id.sys, e, t);
    return ipow(p.x, k) * ipow(p.y, id.j) * p.dx;
  };
  return integrate(f, 0.5 * kPi, 1.5 * kPi, opt).value;
}

double abelian_dy_integral(const IntegralId& id, double h, const QuadratureOptions& opt) {
  if (id.j < 0) throw UnsupportedIndexError("dy integral needs j >= 0");
  OvalEndpoints e = oval_endpoints(id.sys, h);
  int k = id.i + exponent_offset(id.sys);
  auto f = [&](double t) {
    OvalPoint p = oval_point(id.sys, e, t);
    return ipow(p.x, k) * ipow(p.y, id.j) * p.dy;
  };
  return integrate(f, -0.5 * kPi, 0.5 * kPi, opt).value;
}

EndpointJet endpoint_jet(SystemId sys, double x) {
  SectionEnergy F = section_energy(sys, x);
  if (F.d1 == 0.0) throw DegenerateOvalError("endpoint derivative at a critical point");
  EndpointJet j{x, 1.0 / F.d1, 0.0, 0.0};
  j.d2 = -F.d2 * j.d1 * j.d1 * j.d1;
  j.d3 = -F.d3 * j.d1 * j.d1 * j.d1 * j.d1 - 3.0 * F.d2 * j.d1 * j.d1 * j.d2;
  return j;
}

double richardson_derivative(SystemId sys, const std::function<double(double)>& f, double h) {
  EnergyInterval I = energy_interval(sys);
  double room = std::min(h - I.lo, I.hi - h) - 1e-9 * I.width();
  double step = std::min(I.width() * 1e-3, room / 2.5);
  if (!(step > 0.0)) throw DegenerateOvalError("no room for a difference stencil");
  auto d5 = [&](double d) {
    return (-f(h + 2 * d) + 8 * f(h + d) - 8 * f(h - d) + f(h - 2 * d)) / (12 * d);
  };
  double coarse = d5(step), fine = d5(0.5 * step);
  return (16.0 * fine - coarse) / 15.0;
}

double abelian_derivative(const IntegralId& id, double h, int order, const QuadratureOptions& opt) {
  if (order < 0) throw PreconditionError("derivative order must be nonnegative");
  if (order == 0) return abelian_integral(id, h, opt);
  int shift = id.sys == SystemId::LV ? 3 : 0;
  if (id.j >= 2) return id.j * abelian_derivative({id.sys, id.i + shift, id.j - 2}, h, order - 1, opt);
  if (id.j == 1 && order == 1) return abelian_integral({id.sys, id.i + shift, -1}, h, opt);
  if (id.j == 0 && order <= 3) {
    OvalEndpoints e = oval_endpoints(id.sys, h);
    int k = id.i + exponent_offset(id.sys);
    auto term = [&](double x) {
      EndpointJet d = endpoint_jet(id.sys, x);
      double p0 = ipow(x, k);
      if (order == 1) return p0 * d.d1;
      double p1 = k * ipow(x, k - 1);
      if (order == 2) return p1 * d.d1 * d.d1 + p0 * d.d2;
      double p2 = k * (k - 1) * ipow(x, k - 2);
      return p2 * d.d1 * d.d1 * d.d1 + 3.0 * p1 * d.d1 * d.d2 + p0 * d.d3;
    };
    return term(e.x_b) - term(e.x_a);
  }
  return richardson_derivative(
      id.sys, [&](double s) { return abelian_derivative(id, s, order - 1, opt); }, h);
}

namespace {

struct Term {
  int k;  // power of x (integrating factor included)
  int j;
  double c;
};

// mu * sum c x^i y^j  ->  terms with the offset applied
std::vector<Term> weighted_terms(SystemId sys, const TriangularArray& a) {
  std::vector<Term> out;
  int off = exponent_offset(sys);
  for (int d = 0; d <= a.degree(); ++d)
    for (int j = 0; j <= d; ++j)
      if (a(d - j, j) != 0) out.push_back({d - j + off, j, to_double(a(d - j, j))});
  return out;
}

// Green: -int mu f dy  =  int sum a (i+off)/(j+1) x^(i+off-1) y^(j+1) dx
std::vector<Term> green_terms(SystemId sys, const TriangularArray& a) {
  std::vector<Term> out;
  for (const Term& t : weighted_terms(sys, a))
    if (t.k != 0) out.push_back({t.k - 1, t.j + 1, t.c * t.k / (t.j + 1)});
  return out;
}

double sum_terms(const std::vector<Term>& terms, double x, double y) {
  double s = 0.0;
  for (const Term& t : terms) s += t.c * ipow(x, t.k) * ipow(y, t.j);
  return s;
}

}  // namespace

MelnikovValue melnikov_direct_detail(SystemId sys, const Perturbation& p, double h, MelnikovForm form,
                                     const QuadratureOptions& opt) {
  OvalEndpoints e = oval_endpoints(sys, h);
  MelnikovValue out;
  for (int branch = 0; branch < 2; ++branch) {
    bool upper = branch == 0;
    std::vector<Term> g = weighted_terms(sys, upper ? p.b_plus() : p.b_minus());
    std::vector<Term> f = form == MelnikovForm::green ? green_terms(sys, upper ? p.a_plus() : p.a_minus())
                                                      : weighted_terms(sys, upper ? p.a_plus() : p.a_minus());
    if (g.empty() && f.empty()) continue;
    auto integrand = [&](double t) {
      OvalPoint q = oval_point(sys, e, t);
      if (form == MelnikovForm::green) return (sum_terms(g, q.x, q.y) + sum_terms(f, q.x, q.y)) * q.dx;
      return sum_terms(g, q.x, q.y) * q.dx - sum_terms(f, q.x, q.y) * q.dy;
    };
    double t0 = upper ? -0.5 * kPi : 0.5 * kPi;
    QuadResult r = integrate(integrand, t0, t0 + kPi, opt);
    out.value += r.value;
    out.magnitude += r.magnitude;
  }
  return out;
}

double melnikov_direct(SystemId sys, const Perturbation& p, double h, MelnikovForm form,
                       const QuadratureOptions& opt) {
  return melnikov_direct_detail(sys, p, h, form, opt).value;
}

}  // namespace melnikov

#include "melnikov/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "melnikov/errors.hpp"

namespace melnikov {

std::string_view to_string(SystemId sys) { return sys == SystemId::LV ? "LV" : "BT"; }

SystemId parse_system(std::string_view name) {
  if (name == "LV" || name == "lv") return SystemId::LV;
  if (name == "BT" || name == "bt") return SystemId::BT;
  throw std::invalid_argument("unknown system: " + std::string(name));
}

EnergyInterval energy_interval(SystemId sys) {
  if (sys == SystemId::LV) return {-0.5, 0.0};
  return {-2.0 / 3.0, 2.0 / 3.0};
}

double integrating_factor(SystemId sys, double x) {
  if (sys == SystemId::BT) return 1.0;
  if (x <= 0.0) throw DomainError("integrating factor needs x > 0");
  double x2 = x * x;
  return 1.0 / (x2 * x2);
}

double hamiltonian(SystemId sys, double x, double y) {
  if (sys == SystemId::LV) {
    if (x <= 0.0) throw DomainError("LV Hamiltonian is defined for x > 0 only");
    return (0.5 * y * y - 1.125 * x * x + 0.75 * x - 0.125) / (x * x * x);
  }
  return 0.5 * y * y + x - x * x * x / 3.0;
}

SectionEnergy section_energy(SystemId sys, double x) {
  if (sys == SystemId::LV) {
    if (x <= 0.0) throw DomainError("LV section energy is defined for x > 0 only");
    double u = 1.0 / x, u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u, u6 = u5 * u;
    return {-1.125 * u + 0.75 * u2 - 0.125 * u3,
            1.125 * u2 - 1.5 * u3 + 0.375 * u4,
            -2.25 * u3 + 4.5 * u4 - 1.5 * u5,
            6.75 * u4 - 18.0 * u5 + 7.5 * u6};
  }
  return {x - x * x * x / 3.0, 1.0 - x * x, -2.0 * x, -2.0};
}

namespace {

double solve_section(SystemId sys, double h, double lo, double hi) {
  auto fn = [&](double x) {
    SectionEnergy s = section_energy(sys, x);
    return std::make_pair(s.value - h, s.d1);
  };
  double flo = section_energy(sys, lo).value - h, fhi = section_energy(sys, hi).value - h;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  // Start from the secant point; the Newton iteration falls back to bisection inside [lo, hi].
  double guess = lo - flo * (hi - lo) / (fhi - flo);
  guess = std::clamp(guess, lo, hi);
  std::uintmax_t iters = 200;
  double x = boost::math::tools::newton_raphson_iterate(fn, guess, lo, hi,
                                                        std::numeric_limits<double>::digits - 4, iters);
  return x;
}

}  // namespace

OvalEndpoints oval_endpoints(SystemId sys, double h) {
  EnergyInterval I = energy_interval(sys);
  if (!(h > I.lo && h < I.hi)) throw RangeError("energy outside the period annulus");
  if (h - I.lo < kDegenerateGuard || I.hi - h < kDegenerateGuard)
    throw DegenerateOvalError("energy within the degenerate guard band");
  OvalEndpoints e{};
  e.h = h;
  if (sys == SystemId::LV) {
    double xmax = std::max(2.0, 9.0 / (4.0 * std::fabs(h)));
    e.x_a = solve_section(sys, h, 1.0 / 3.0, 1.0);
    e.x_b = solve_section(sys, h, 1.0, xmax);
  } else {
    e.x_a = solve_section(sys, h, -2.0, -1.0);
    e.x_b = solve_section(sys, h, -1.0, 1.0);
  }
  return e;
}

double third_root(SystemId sys, const OvalEndpoints& e) {
  if (sys == SystemId::LV) return -1.0 / (8.0 * e.h * e.x_a * e.x_b);
  return -e.x_a - e.x_b;
}

double branch_cofactor(SystemId sys, const OvalEndpoints& e, double x) {
  double xc = third_root(sys, e);
  if (sys == SystemId::LV) return -2.0 * e.h * (x - xc);
  return (2.0 / 3.0) * (xc - x);
}

double upper_branch(SystemId sys, double x, const OvalEndpoints& e) {
  double slack = 1e-12 * (1.0 + std::fabs(e.x_b - e.x_a));
  if (x < e.x_a - slack || x > e.x_b + slack) throw DomainError("abscissa outside the oval");
  double r = (x - e.x_a) * (e.x_b - x);
  if (r <= 0.0) return 0.0;
  return std::sqrt(r * branch_cofactor(sys, e, x));
}

double upper_branch(SystemId sys, double x, double h) {
  return upper_branch(sys, x, oval_endpoints(sys, h));
}

Side side_of(double y) {
  if (y > 0.0) return Side::upper;
  if (y < 0.0) return Side::lower;
  return Side::on_section;
}

// ---------------------------------------------------------------------------

TriangularArray::TriangularArray(int degree) : degree_(degree) {
  if (degree < 0) throw RangeError("perturbation degree must be nonnegative");
  std::size_t n = static_cast<std::size_t>(degree + 1) * static_cast<std::size_t>(degree + 2) / 2;
  values_.assign(n, Rational(0));
  numeric_.assign(n, 0.0);
}

std::size_t TriangularArray::index(int i, int j) const {
  if (i < 0 || j < 0 || i + j > degree_) throw RangeError("coefficient index outside the triangle");
  // rows by total degree d = i + j, then by j
  int d = i + j;
  return static_cast<std::size_t>(d * (d + 1) / 2 + j);
}

void TriangularArray::set(int i, int j, const Rational& value) {
  std::size_t k = index(i, j);
  values_[k] = value;
  numeric_[k] = to_double(value);
}

bool TriangularArray::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& r) { return r == 0; });
}

double TriangularArray::evaluate(double x, double y) const {
  double acc = 0.0;
  double yp = 1.0;
  for (int j = 0; j <= degree_; ++j) {
    // Horner in x for the column j
    double col = 0.0;
    for (int i = degree_ - j; i >= 0; --i) col = col * x + numeric_[index(i, j)];
    acc += col * yp;
    yp *= y;
  }
  return acc;
}

Perturbation::Perturbation(int degree)
    : degree_(degree),
      arrays_{TriangularArray(degree), TriangularArray(degree), TriangularArray(degree),
              TriangularArray(degree)} {}

const Rational& Perturbation::coefficient(Component c, int i, int j) const { return pick(c)(i, j); }

void Perturbation::set(Component c, int i, int j, const Rational& value) { pick(c).set(i, j, value); }

bool Perturbation::is_zero() const {
  return std::all_of(arrays_.begin(), arrays_.end(), [](const TriangularArray& a) { return a.is_zero(); });
}

double Perturbation::f(Side side, double x, double y) const {
  if (side == Side::on_section) throw PreconditionError("side must be resolved before evaluating f");
  return (side == Side::upper ? arrays_[0] : arrays_[1]).evaluate(x, y);
}

double Perturbation::g(Side side, double x, double y) const {
  if (side == Side::on_section) throw PreconditionError("side must be resolved before evaluating g");
  return (side == Side::upper ? arrays_[2] : arrays_[3]).evaluate(x, y);
}

Perturbation Perturbation::combined(const Perturbation& other, const Rational& scale) const {
  Perturbation out(std::max(degree_, other.degree_));
  for (int c = 0; c < 4; ++c) {
    auto comp = static_cast<Component>(c);
    for (int d = 0; d <= out.degree_; ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        Rational v = 0;
        if (d <= degree_) v += coefficient(comp, i, j);
        if (d <= other.degree_) v += scale * other.coefficient(comp, i, j);
        out.set(comp, i, j, v);
      }
  }
  return out;
}

std::string_view to_string(Perturbation::Component c) {
  switch (c) {
    case Perturbation::Component::a_plus: return "a+";
    case Perturbation::Component::a_minus: return "a-";
    case Perturbation::Component::b_plus: return "b+";
    case Perturbation::Component::b_minus: return "b-";
  }
  return "?";
}

Perturbation::Component parse_component(std::string_view name) {
  if (name == "a+") return Perturbation::Component::a_plus;
  if (name == "a-") return Perturbation::Component::a_minus;
  if (name == "b+") return Perturbation::Component::b_plus;
  if (name == "b-") return Perturbation::Component::b_minus;
  throw std::invalid_argument("unknown coefficient array: " + std::string(name));
}

std::pair<double, double> vector_field(SystemId sys, const PlanarState& s, double eps,
                                       const Perturbation& p) {
  if (s.side == Side::on_section) throw PreconditionError("vector_field: resolve the side first");
  double x = s.x, y = s.y;
  double dx, dy;
  if (sys == SystemId::LV) {
    dx = x * y;
    dy = 1.5 * y * y - 1.125 * x * x + 1.5 * x - 0.375;
  } else {
    dx = y;
    dy = -1.0 + x * x;
  }
  if (eps != 0.0) {
    dx += eps * p.f(s.side, x, y);
    dy += eps * p.g(s.side, x, y);
  }
  return {dx, dy};
}

}  // namespace melnikov

#include "melnikov/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "melnikov/errors.hpp"
#include "melnikov/quadrature.hpp"

namespace melnikov {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

constexpr Perturbation::Component kComponents[] = {Perturbation::Component::a_plus, Perturbation::Component::a_minus,
                                                   Perturbation::Component::b_plus, Perturbation::Component::b_minus};

}  // namespace

Perturbation parse_perturbation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int degree = -1;
  Perturbation p;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("perturbation line " + std::to_string(lineno) + ": " + why);
    };
    if (head == "degree") {
      if (degree >= 0) fail("duplicate degree");
      if (!(ls >> degree) || degree < 0) fail("bad degree");
      p = Perturbation(degree);
      continue;
    }
    if (degree < 0) fail("coefficient before the degree line");
    Perturbation::Component c;
    try {
      c = parse_component(head);
    } catch (const std::exception&) {
      fail("unknown component '" + head + "'");
    }
    int i, j;
    std::string value, extra;
    if (!(ls >> i >> j >> value) || (ls >> extra)) fail("expected: <component> <i> <j> <value>");
    if (i < 0 || j < 0 || i + j > degree) fail("index outside the triangular array");
    p.set(c, i, j, parse_rational(value));
  }
  if (degree < 0) throw std::invalid_argument("perturbation: missing degree line");
  return p;
}

std::string format_perturbation(const Perturbation& p) {
  std::ostringstream os;
  os << "degree " << p.degree() << '\n';
  for (auto c : kComponents)
    for (int d = 0; d <= p.degree(); ++d)
      for (int j = 0; j <= d; ++j) {
        const Rational& v = p.coefficient(c, d - j, j);
        if (v != 0) os << to_string(c) << ' ' << d - j << ' ' << j << ' ' << to_string(v) << '\n';
      }
  return os.str();
}

Perturbation read_perturbation_file(const std::string& path) { return parse_perturbation(read_text_file(path)); }

Perturbation random_perturbation(int n, std::mt19937_64& rng) {
  constexpr std::uint64_t span = 2 * 65536 + 1;
  Perturbation p(n);
  for (auto c : kComponents)
    for (int d = 0; d <= n; ++d)
      for (int j = 0; j <= d; ++j) {
        long k = static_cast<long>(rng() % span) - 65536;
        p.set(c, d - j, j, make_rational(k, 65536));
      }
  return p;
}

Perturbation one_zero_perturbation(SystemId sys, double h_star, const Rational& scale) {
  double a = -abelian_integral({sys, 1, 0}, h_star) / abelian_integral({sys, 0, 0}, h_star);
  Rational ar(a);  // exact binary value of a
  Perturbation p(1);
  p.set(Perturbation::Component::b_plus, 0, 0, scale * ar);
  p.set(Perturbation::Component::b_minus, 0, 0, -scale * ar);
  p.set(Perturbation::Component::b_plus, 1, 0, scale);
  p.set(Perturbation::Component::b_minus, 1, 0, -scale);
  return p;
}

Perturbation sign_definite_perturbation(int variant) {
  static const int table[][3] = {{1, 0, 0}, {2, 1, 0}, {1, 0, 3}, {1, 2, 1}, {2, 1, 1}};
  const int* c = table[((variant % 5) + 5) % 5];
  int sign = (variant / 5) % 2 == 0 ? 1 : -1;
  Perturbation p(2);
  for (int i = 0; i < 3; ++i) {
    if (!c[i]) continue;
    p.set(Perturbation::Component::b_plus, i, 0, Rational(sign * c[i]));
    p.set(Perturbation::Component::b_minus, i, 0, Rational(-sign * c[i]));
  }
  return p;
}

std::vector<double> guarded_grid(SystemId sys, int count, double guard) {
  if (count < 2) throw PreconditionError("guarded_grid: need at least 2 points");
  EnergyInterval I = energy_interval(sys);
  std::vector<double> h(count);
  for (int k = 0; k < count; ++k) h[k] = I.lo + I.width() * (guard + (1.0 - 2.0 * guard) * k / (count - 1));
  return h;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace melnikov

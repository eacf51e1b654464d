#include "melnikov/zeros.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/tools/minima.hpp>
#include <json.hpp>

#include "melnikov/errors.hpp"
#include "melnikov/parallel.hpp"

namespace melnikov {

int theoretical_bound(SystemId sys, int n) {
  if (n < 1) throw RangeError("degree must be >= 1");
  if (sys == SystemId::BT) return 12 * n + 6;
  if (n == 1) return 37;
  if (n == 2) return 57;
  if (n == 3) return 93;
  return 36 * n - 65;
}

std::string_view to_string(ZeroKind k) { return k == ZeroKind::odd_simple ? "odd-simple" : "even-suspected"; }

int ZeroReport::odd_count() const {
  return static_cast<int>(std::count_if(brackets.begin(), brackets.end(),
                                        [](const ZeroBracket& b) { return b.kind == ZeroKind::odd_simple; }));
}

int ZeroReport::even_count() const { return static_cast<int>(brackets.size()) - odd_count(); }

const BasisGrid& basis_grid(SystemId sys, int grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<BasisGrid>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(static_cast<int>(sys), grid);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto g = std::make_unique<BasisGrid>();
  EnergyInterval I = energy_interval(sys);
  double guard = kZeroGuard * I.width();
  double lo = I.lo + guard, step = (I.width() - 2 * guard) / (grid - 1);
  for (int k = 0; k < grid; ++k) g->h.push_back(k == grid - 1 ? I.hi - guard : lo + k * step);
  g->values.resize(g->h.size());
  parallel_for(g->h.size(), [&](std::size_t k) { g->values[k] = basis_values(sys, g->h[k]); });
  return *cache.emplace(key, std::move(g)).first->second;
}

ZeroReport isolate_zeros(const MelnikovRepresentation& rep, int grid, double tol) {
  if (grid < 64) throw PreconditionError("zero isolation needs a grid of at least 64 points");
  ZeroReport r;
  r.sys = rep.sys;
  r.n = rep.n;
  r.grid = grid;
  r.tol = tol;
  r.bound = theoretical_bound(rep.sys, rep.n);
  const BasisGrid& g = basis_grid(rep.sys, grid);
  std::vector<double> M(g.h.size());
  for (std::size_t k = 0; k < M.size(); ++k) M[k] = evaluate_representation(rep, g.h[k], g.values[k]);
  for (double v : M) r.max_abs = std::max(r.max_abs, std::fabs(v));
  r.threshold = tol * (1.0 + r.max_abs);
  if (rep.decomposition.is_zero() || r.max_abs == 0.0) {
    r.all_zero = true;
    return r;
  }
  auto eval = [&](double h) { return evaluate_representation(rep, h); };

  auto bisect = [&](double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      double fm = eval(m);
      if (std::fabs(fm) < r.threshold && b - a < 1e-12 * (1 + std::fabs(m))) return m;
      if (fm == 0.0) return m;
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
      if (b - a <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(m))) break;
    }
    return 0.5 * (a + b);
  };

  std::size_t n = M.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double a = M[k], b = M[k + 1];
    if (a == 0.0) {
      // exact grid zero: a sign change across it counts once, from the left neighbour
      if (k == 0) continue;
      double left = M[k - 1];
      if (left == 0.0) continue;
      ZeroKind kind = (left > 0) != (b > 0) ? ZeroKind::odd_simple : ZeroKind::even_suspected;
      if (b == 0.0) continue;
      r.brackets.push_back({g.h[k - 1], g.h[k + 1], g.h[k], kind});
      continue;
    }
    if (b == 0.0) continue;
    if ((a > 0) != (b > 0)) r.brackets.push_back({g.h[k], g.h[k + 1], bisect(g.h[k], g.h[k + 1], a), ZeroKind::odd_simple});
  }
  // near-zero local minima of |M| without a sign change
  for (std::size_t k = 1; k + 1 < n; ++k) {
    double a = M[k - 1], b = M[k], c = M[k + 1];
    if (a == 0.0 || b == 0.0 || c == 0.0) continue;
    if ((a > 0) != (b > 0) || (b > 0) != (c > 0)) continue;
    if (!(std::fabs(b) <= std::fabs(a) && std::fabs(b) <= std::fabs(c))) continue;
    auto [hm, fm] = boost::math::tools::brent_find_minima(
        [&](double h) { return std::fabs(eval(h)); }, g.h[k - 1], g.h[k + 1], std::numeric_limits<double>::digits / 2);
    if (fm < r.threshold) r.brackets.push_back({g.h[k - 1], g.h[k + 1], hm, ZeroKind::even_suspected});
  }
  std::sort(r.brackets.begin(), r.brackets.end(),
            [](const ZeroBracket& x, const ZeroBracket& y) { return x.h_lo < y.h_lo; });
  r.within_bound = r.odd_count() <= r.bound;
  return r;
}

double bt_i00_second(double h) {
  OvalEndpoints e = oval_endpoints(SystemId::BT, h);
  auto d2 = [](double x) {
    double u = 1 - x * x;
    return 2 * x / (u * u * u);
  };
  return d2(e.x_b) - d2(e.x_a);
}

SecondDerivativeZero bt_second_derivative_zero_detail(int samples) {
  EnergyInterval I = energy_interval(SystemId::BT);
  double guard = kZeroGuard * I.width();
  double lo = I.lo + guard, hi = I.hi - guard;
  SecondDerivativeZero z{0, 0, 0, 0};
  double prev_h = lo, prev = bt_i00_second(lo);
  for (int k = 1; k < samples; ++k) {
    double h = lo + (hi - lo) * k / (samples - 1);
    double v = bt_i00_second(h);
    if ((v > 0) != (prev > 0)) {
      ++z.sign_changes;
      z.h_lo = prev_h;
      z.h_hi = h;
    }
    prev_h = h;
    prev = v;
  }
  if (z.sign_changes != 1)
    throw InvariantViolation("I(0,0)'' has " + std::to_string(z.sign_changes) + " sign changes, expected one");
  double a = z.h_lo, b = z.h_hi, fa = bt_i00_second(a);
  while (true) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    double fm = bt_i00_second(m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  z.h_lo = a;
  z.h_hi = b;
  z.h0 = 0.5 * (a + b);
  return z;
}

double bt_second_derivative_zero() { return bt_second_derivative_zero_detail().h0; }

namespace {
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}
}  // namespace

std::string zero_report_json(const ZeroReport& r) {
  nlohmann::ordered_json doc;
  doc["system"] = std::string(to_string(r.sys));
  doc["degree"] = r.n;
  doc["grid"] = r.grid;
  doc["tol"] = r.tol;
  doc["threshold"] = r.threshold;
  doc["all_zero"] = r.all_zero;
  doc["odd_simple"] = r.odd_count();
  doc["even_suspected"] = r.even_count();
  doc["bound"] = r.bound;
  doc["within_bound"] = r.within_bound;
  nlohmann::ordered_json br = nlohmann::ordered_json::array();
  for (const auto& b : r.brackets) {
    nlohmann::ordered_json e;
    e["h_lo"] = b.h_lo;
    e["h_hi"] = b.h_hi;
    e["root"] = b.root;
    e["kind"] = std::string(to_string(b.kind));
    br.push_back(e);
  }
  doc["brackets"] = br;
  return doc.dump(2) + "\n";
}

std::string zero_report_csv(const ZeroReport& r) {
  std::string out = "index,h_lo,h_hi,root,kind\n";
  for (std::size_t k = 0; k < r.brackets.size(); ++k) {
    const auto& b = r.brackets[k];
    out += std::to_string(k) + "," + num(b.h_lo) + "," + num(b.h_hi) + "," + num(b.root) + "," +
           std::string(to_string(b.kind)) + "\n";
  }
  return out;
}

}  // namespace melnikov

#include "melnikov/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>

#include <json.hpp>

#include "melnikov/errors.hpp"

namespace melnikov {

std::string to_string(const IndexPair& ij) {
  return "I(" + std::to_string(ij.i) + "," + std::to_string(ij.j) + ")";
}

const std::vector<IndexPair>& basis(SystemId sys) {
  static const std::vector<IndexPair> lv{{0, 1}, {-1, 1}, {1, 0}, {0, 0}, {0, 2}};
  static const std::vector<IndexPair> bt{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  return sys == SystemId::LV ? lv : bt;
}

int basis_index(SystemId sys, IndexPair e) {
  const auto& b = basis(sys);
  auto it = std::find(b.begin(), b.end(), e);
  return it == b.end() ? -1 : static_cast<int>(it - b.begin());
}

BasisDecomposition::BasisDecomposition(SystemId sys) : sys_(sys), coeffs_(basis(sys).size()) {}

BasisDecomposition BasisDecomposition::element(SystemId sys, IndexPair e) {
  int k = basis_index(sys, e);
  if (k < 0) throw PreconditionError(to_string(e) + " is not a basis element");
  BasisDecomposition d(sys);
  d.coeffs_[static_cast<std::size_t>(k)] = RationalPoly::constant(1);
  return d;
}

const RationalPoly& BasisDecomposition::coeff(IndexPair e) const {
  int k = basis_index(sys_, e);
  if (k < 0) throw PreconditionError(to_string(e) + " is not a basis element");
  return coeffs_[static_cast<std::size_t>(k)];
}

bool BasisDecomposition::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const RationalPoly& p) { return p.is_zero(); });
}

BasisDecomposition BasisDecomposition::normalized() const {
  if (is_zero()) return BasisDecomposition(sys_);
  int strip = denom_power_;
  for (const auto& p : coeffs_)
    if (!p.is_zero()) strip = std::min(strip, p.low_order());
  BasisDecomposition out = *this;
  out.denom_power_ -= strip;
  for (auto& p : out.coeffs_) p = p.unshifted(strip);
  return out;
}

BasisDecomposition BasisDecomposition::over_power(int m) const {
  BasisDecomposition base = normalized();
  if (m < base.denom_power_)
    throw InternalError("requested denominator power below the minimal one");
  int k = m - base.denom_power_;
  base.denom_power_ = m;
  for (auto& p : base.coeffs_) p = p.shifted(k);
  return base;
}

BasisDecomposition BasisDecomposition::scaled(const RationalPoly& p, int k) const {
  BasisDecomposition out = *this;
  out.denom_power_ += k;
  for (auto& c : out.coeffs_) c = c * p;
  return out;
}

BasisDecomposition& BasisDecomposition::operator+=(const BasisDecomposition& o) {
  if (coeffs_.empty()) return *this = o;
  if (o.coeffs_.empty()) return *this;
  if (sys_ != o.sys_) throw PreconditionError("adding decompositions of different systems");
  int m = std::max(denom_power_, o.denom_power_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    coeffs_[k] = coeffs_[k].shifted(m - denom_power_) + o.coeffs_[k].shifted(m - o.denom_power_);
  denom_power_ = m;
  return *this;
}

bool operator==(const BasisDecomposition& a, const BasisDecomposition& b) {
  if (a.sys_ != b.sys_) return false;
  BasisDecomposition x = a.normalized(), y = b.normalized();
  return x.denom_power_ == y.denom_power_ && x.coeffs_ == y.coeffs_;
}

double BasisDecomposition::evaluate(const std::vector<double>& v, double h) const {
  if (v.size() != coeffs_.size()) throw PreconditionError("basis value count mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero()) s += coeffs_[k](h) * v[k];
  return denom_power_ == 0 ? s : s / std::pow(h, denom_power_);
}

// ---------------------------------------------------------------------------

std::map<IndexPair, Rational> rho_from_perturbation(SystemId sys, const Perturbation& p) {
  std::map<IndexPair, Rational> rho;
  int off = exponent_offset(sys);
  auto add = [&](IndexPair ij, const Rational& v) {
    if (v == 0) return;
    Rational& slot = rho[ij];
    slot += v;
    if (slot == 0) rho.erase(ij);
  };
  for (int d = 0; d <= p.degree(); ++d)
    for (int j = 0; j <= d; ++j) {
      int i = d - j;
      Rational sign_j = (j % 2 == 0) ? Rational(1) : Rational(-1);
      // J_ij = (-1)^(j+1) I_ij
      add({i, j}, p.b_plus()(i, j) - sign_j * p.b_minus()(i, j));
      // -int x^k y^j dy = k/(j+1) int x^(k-1) y^(j+1) dx on either branch
      int k = i + off;
      if (k != 0) add({i - 1, j + 1}, Rational(k, j + 1) * (p.a_plus()(i, j) + sign_j * p.a_minus()(i, j)));
    }
  return rho;
}

namespace {

using Poly = RationalPoly;

// gmp_rational wants a positive denominator
Rational q(long a, long b) { return b < 0 ? Rational(-a, -b) : Rational(a, b); }

class ReductionCache {
 public:
  BasisDecomposition get(SystemId sys, int i, int j) {
    Key key{sys == SystemId::LV ? 0 : 1, i, j};
    {
      std::shared_lock lock(mutex_);
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    BasisDecomposition d = sys == SystemId::LV ? reduce_lv(i, j) : reduce_bt(i, j);
    d = d.normalized();
    std::unique_lock lock(mutex_);
    return table_.emplace(key, std::move(d)).first->second;
  }

 private:
  using Key = std::tuple<int, int, int>;

  BasisDecomposition lv(int i, int j) { return get(SystemId::LV, i, j); }
  BasisDecomposition bt(int i, int j) { return get(SystemId::BT, i, j); }

  BasisDecomposition reduce_lv(int i, int j) {
    constexpr SystemId S = SystemId::LV;
    if (j < 0 || i < -3) throw UnsupportedIndexError("LV reduction needs i >= -3, j >= 0: " + to_string(IndexPair{i, j}));
    if (basis_index(S, {i, j}) >= 0) return BasisDecomposition::element(S, {i, j});
    if (j >= 2) {
      int c = 2 * i + 3 * j - 6;
      if (c != 0) {
        // (2i+3j-6) I_ij = -2j [-9/8 I_{i+2,j-2} + 3/2 I_{i+1,j-2} - 3/8 I_{i,j-2}]
        Rational f = q(-2 * j, c);
        return (f * q(-9, 8)) * lv(i + 2, j - 2) + (f * q(3, 2)) * lv(i + 1, j - 2) + (f * q(-3, 8)) * lv(i, j - 2);
      }
      // 2i + 3j = 6 kills the left side; use the energy relation instead
      return lv(i + 3, j - 2).scaled(Poly{0, 2}) + q(9, 4) * lv(i + 2, j - 2) + q(-3, 2) * lv(i + 1, j - 2) +
             q(1, 4) * lv(i, j - 2);
    }
    if (i == 1 && j == 1) return lv(0, 1);
    if (i == 2 && j == 0) return q(4, 3) * lv(1, 0) + q(-1, 3) * lv(0, 0);
    if (i == 3 && j == 0)
      return (q(1, 2) * lv(0, 2) + q(-3, 4) * lv(1, 0) + q(1, 4) * lv(0, 0)).scaled(Poly{1}, 1);
    int lo = j == 1 ? -1 : 0;
    if (i > lo) {
      // (2i+3j-6) h I_ij = -(i+j-4) 9/4 I_{i-1} + (2i+j-10) 3/4 I_{i-2} - (i-6)/4 I_{i-3}
      int c = 2 * i + 3 * j - 6;
      BasisDecomposition s = (q(-9 * (i + j - 4), 4) * lv(i - 1, j)) +
                             (q(3 * (2 * i + j - 10), 4) * lv(i - 2, j)) +
                             (q(-(i - 6), 4) * lv(i - 3, j));
      return s.scaled(Poly{q(1, c)}, 1);
    }
    // same relation solved for the lowest index, written at i' = i + 3
    int ip = i + 3;
    Rational f = q(4, ip - 6);
    return lv(ip, j).scaled(Poly{0, f * Rational(-(2 * ip + 3 * j - 6))}) +
           (f * q(-9 * (ip + j - 4), 4)) * lv(ip - 1, j) + (f * q(3 * (2 * ip + j - 10), 4)) * lv(ip - 2, j);
  }

  BasisDecomposition reduce_bt(int i, int j) {
    constexpr SystemId S = SystemId::BT;
    if (i < 0 || j < 0) throw UnsupportedIndexError("BT reduction needs i, j >= 0: " + to_string(IndexPair{i, j}));
    if (basis_index(S, {i, j}) >= 0) return BasisDecomposition::element(S, {i, j});
    if (i == 2) return bt(0, j);
    if (i >= 3) return bt(i - 2, j) + q(-(i - 2), j + 2) * bt(i - 3, j + 2);
    // i <= 1, j >= 2:  (2i+3j+2) I_ij = 6j (h I_{i,j-2} - 2/3 I_{i+1,j-2})
    Rational f = q(6 * j, 2 * i + 3 * j + 2);
    return bt(i, j - 2).scaled(Poly{0, f}) + (f * q(-2, 3)) * bt(i + 1, j - 2);
  }

  std::shared_mutex mutex_;
  std::map<Key, BasisDecomposition> table_;
};

ReductionCache& cache() {
  static ReductionCache c;
  return c;
}

}  // namespace

BasisDecomposition reduce_monomial(SystemId sys, int i, int j) { return cache().get(sys, i, j); }

int representation_denom_power(SystemId sys, int n) {
  if (n < 1) throw RangeError("degree must be >= 1");
  if (sys == SystemId::BT) return 0;
  if (n >= 4) return n - 3;
  if (n >= 2) return n - 2;
  return 0;
}

std::vector<int> representation_degree_bounds(SystemId sys, int n) {
  if (n < 1) throw RangeError("degree must be >= 1");
  auto fl = [](int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); };
  if (sys == SystemId::BT) return {fl(n), fl(n - 1), fl(n - 1), fl(n - 2)};
  int m = representation_denom_power(sys, n);
  return {m, m, m, m, n == 1 ? -1 : m};
}

MelnikovRepresentation melnikov_representation(SystemId sys, const Perturbation& p) {
  MelnikovRepresentation rep;
  rep.sys = sys;
  rep.n = p.degree();
  if (rep.n < 1) throw RangeError("perturbation degree must be >= 1");
  BasisDecomposition sum(sys);
  for (const auto& [ij, r] : rho_from_perturbation(sys, p)) sum += r * reduce_monomial(sys, ij.i, ij.j);
  rep.decomposition = sum.over_power(representation_denom_power(sys, rep.n));
  return rep;
}

std::vector<double> basis_values(SystemId sys, double h, const QuadratureOptions& opt) {
  OvalEndpoints e = oval_endpoints(sys, h);
  std::vector<double> v;
  for (const IndexPair& b : basis(sys)) v.push_back(abelian_integral({sys, b.i, b.j}, e, opt));
  return v;
}

double evaluate_representation(const MelnikovRepresentation& rep, double h, const std::vector<double>& bv) {
  return rep.decomposition.evaluate(bv, h);
}

double evaluate_representation(const MelnikovRepresentation& rep, double h) {
  if (rep.decomposition.is_zero()) return 0.0;
  return evaluate_representation(rep, h, basis_values(rep.sys, h));
}

bool DegreeCheck::ok() const {
  return denom_ok && std::all_of(excess.begin(), excess.end(), [](int e) { return e == 0; });
}

DegreeCheck check_degrees(const MelnikovRepresentation& rep) {
  DegreeCheck c;
  c.bounds = representation_degree_bounds(rep.sys, rep.n);
  c.denom_ok = rep.decomposition.denom_power() == representation_denom_power(rep.sys, rep.n);
  const auto& coeffs = rep.decomposition.coeffs();
  for (std::size_t k = 0; k < c.bounds.size(); ++k) {
    int d = k < coeffs.size() ? coeffs[k].degree() : -1;
    c.degrees.push_back(d);
    c.excess.push_back(std::max(0, d - c.bounds[k]));
  }
  return c;
}

std::string export_representation(const MelnikovRepresentation& rep) {
  nlohmann::ordered_json doc;
  doc["system"] = std::string(to_string(rep.sys));
  doc["degree"] = rep.n;
  doc["denom_power"] = rep.decomposition.denom_power();
  nlohmann::ordered_json elems = nlohmann::ordered_json::array();
  const auto& b = basis(rep.sys);
  for (std::size_t k = 0; k < b.size(); ++k) {
    nlohmann::ordered_json e;
    e["element"] = to_string(b[k]);
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    if (k < rep.decomposition.coeffs().size())
      for (const Rational& c : rep.decomposition.coeffs()[k].coefficients())
        cs.push_back({numerator(c).str(), denominator(c).str()});
    e["coefficients"] = cs;
    elems.push_back(e);
  }
  doc["basis"] = elems;
  return doc.dump(2) + "\n";
}

MelnikovRepresentation import_representation(const std::string& text) {
  auto doc = nlohmann::json::parse(text);
  MelnikovRepresentation rep;
  rep.sys = parse_system(doc.at("system").get<std::string>());
  rep.n = doc.at("degree").get<int>();
  int m = doc.at("denom_power").get<int>();
  const auto& b = basis(rep.sys);
  BasisDecomposition d(rep.sys);
  for (const auto& e : doc.at("basis")) {
    std::string name = e.at("element").get<std::string>();
    auto it = std::find_if(b.begin(), b.end(), [&](const IndexPair& x) { return to_string(x) == name; });
    if (it == b.end()) throw std::invalid_argument("unknown basis element " + name);
    std::vector<Rational> cs;
    for (const auto& pair : e.at("coefficients"))
      cs.push_back(Rational(Integer(pair.at(0).get<std::string>()), Integer(pair.at(1).get<std::string>())));
    d += BasisDecomposition::element(rep.sys, *it).scaled(RationalPoly(std::move(cs)));
  }
  d = d.scaled(RationalPoly{1}, m);
  rep.decomposition = d.over_power(m);
  return rep;
}

}  // namespace melnikov

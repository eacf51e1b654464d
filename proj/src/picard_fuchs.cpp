#include "melnikov/picard_fuchs.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "melnikov/errors.hpp"

namespace melnikov {

namespace {

using Poly = RationalPoly;

Rational q(long a, long b) { return b < 0 ? Rational(-a, -b) : Rational(a, b); }

RationalMatrix mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  RationalMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

PolyMatrix linear(const RationalMatrix& A, const RationalMatrix& B) {
  PolyMatrix out(static_cast<std::size_t>(A.rows()), PolyRow(static_cast<std::size_t>(A.cols())));
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c)
      out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = Poly{B(r, c), A(r, c)};
  return out;
}

PolyMatrix constant(const RationalMatrix& M) {
  return linear(RationalMatrix::Zero(M.rows(), M.cols()), M);
}

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b) {
  std::size_t n = a.size(), k = b.size(), m = b.front().size();
  PolyMatrix out(n, PolyRow(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) out[i][j] += a[i][l] * b[l][j];
  return out;
}

PolyRow row_times(const PolyRow& r, const PolyMatrix& M) {
  PolyRow out(M.front().size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += r[i] * M[i][j];
  return out;
}

PolyRow derivative(const PolyRow& r) {
  PolyRow out;
  for (const auto& p : r) out.push_back(p.derivative());
  return out;
}

PolyRow operator+(PolyRow a, const PolyRow& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

PolyRow operator*(const Poly& p, PolyRow r) {
  for (auto& x : r) x = p * x;
  return r;
}

bool is_zero(const PolyRow& r) {
  return std::all_of(r.begin(), r.end(), [](const Poly& p) { return p.is_zero(); });
}

// Rows giving Phi, Phi', Phi'' of c(h) V in terms of W, where V = T0 W and V' = T1 W and W' is not needed:
//   R0 = c T0,  R1 = c' T0 + c T1,  R2 = c'' T0 + 2 c' T1 + c   (the last term acts on V'' = W)
struct Rows {
  PolyRow r0, r1, r2;
};

Rows rows_for(const PolyRow& c, const PolyMatrix& T0, const PolyMatrix& T1) {
  PolyRow c1 = derivative(c), c2 = derivative(c1);
  Rows out;
  out.r0 = row_times(c, T0);
  out.r1 = row_times(c1, T0) + row_times(c, T1);
  out.r2 = row_times(c2, T0) + Poly{2} * row_times(c1, T1) + c;
  return out;
}

// T1 = (E - A)^-1 (A h + B),  T0 = (A h + B) T1
std::pair<PolyMatrix, PolyMatrix> second_derivative_frame(const PFSystem& pf) {
  RationalMatrix E = RationalMatrix::Identity(pf.A.rows(), pf.A.cols());
  RationalMatrix EA = E - pf.A;
  if (EA.rows() != 2) throw PreconditionError("frame needs a 2x2 block");
  Rational det = EA(0, 0) * EA(1, 1) - EA(0, 1) * EA(1, 0);
  if (det == 0) throw InternalError("E - A is singular");
  RationalMatrix K(2, 2);
  K(0, 0) = EA(1, 1) / det;
  K(0, 1) = -EA(0, 1) / det;
  K(1, 0) = -EA(1, 0) / det;
  K(1, 1) = EA(0, 0) / det;
  PolyMatrix G = linear(pf.A, pf.B);
  PolyMatrix T1 = matmul(constant(K), G);
  PolyMatrix T0 = matmul(G, T1);
  return {T0, T1};
}

void check_interior(SystemId sys, double h) {
  EnergyInterval I = energy_interval(sys);
  if (!I.contains(h)) throw RangeError("energy outside the period annulus");
  if (h - I.lo < kSingularStandoff || I.hi - h < kSingularStandoff)
    throw NearSingularError("energy within the singular standoff of an interval end");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> values(SystemId sys, const std::vector<IndexPair>& els, double h, int order) {
  std::vector<double> v;
  for (const auto& e : els) v.push_back(abelian_derivative({sys, e.i, e.j}, h, order));
  return v;
}

std::vector<double> apply(const PolyMatrix& M, const std::vector<double>& v, double h) {
  std::vector<double> out(M.size(), 0.0);
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += M[i][j](h) * v[j];
  return out;
}

double row_dot(const PolyRow& r, const std::vector<double>& v, double h, double* mag = nullptr) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double t = r[i](h) * v[i];
    s += t;
    if (mag) *mag += std::fabs(t);
  }
  return s;
}

// Fraction-free elimination to echelon form, then one kernel vector with the
// first free column set to 1. Returns the kernel dimension through dim.
std::vector<Rational> kernel_vector(const std::vector<std::vector<Rational>>& rows, std::size_t cols, int& dim) {
  std::vector<std::vector<Integer>> M;
  for (const auto& r : rows) {
    Integer l = 1;
    for (const auto& x : r) l = boost::multiprecision::lcm(l, denominator(x));
    std::vector<Integer> ir;
    bool any = false;
    for (const auto& x : r) {
      ir.push_back(numerator(x) * (l / denominator(x)));
      any = any || ir.back() != 0;
    }
    if (any) M.push_back(std::move(ir));
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < M.size(); ++c) {
    std::size_t p = r;
    while (p < M.size() && M[p][c] == 0) ++p;
    if (p == M.size()) continue;
    std::swap(M[p], M[r]);
    for (std::size_t i = r + 1; i < M.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer num = M[r][c] * M[i][j] - M[i][c] * M[r][j];
        if (num % prev != 0) throw InternalError("fraction-free elimination lost exactness");
        M[i][j] = num / prev;
      }
      M[i][c] = 0;
    }
    prev = M[r][c];
    pivots.push_back(c);
    ++r;
  }
  dim = static_cast<int>(cols - pivots.size());
  if (dim == 0) return {};
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  std::vector<Rational> x(cols, Rational(0));
  x[free_col] = 1;
  for (std::size_t k = pivots.size(); k-- > 0;) {
    std::size_t c = pivots[k];
    Rational s = 0;
    for (std::size_t j = c + 1; j < cols; ++j)
      if (x[j] != 0) s += Rational(M[k][j]) * x[j];
    x[c] = -s / Rational(M[k][c]);
  }
  auto first = std::find_if(x.begin(), x.end(), [](const Rational& v) { return v != 0; });
  Rational lead = *first;
  for (auto& v : x) v /= lead;
  return x;
}

PolyRow lv_tau(const MelnikovRepresentation& rep) { return block_coefficients(rep, Block::V2); }

}  // namespace

const std::vector<IndexPair>& block_elements(SystemId sys, Block block) {
  static const std::vector<IndexPair> lv1{{0, 1}, {-1, 1}}, lv2{{1, 0}, {0, 0}, {0, 2}};
  static const std::vector<IndexPair> bt1{{0, 0}, {1, 0}}, bt2{{0, 1}, {1, 1}};
  if (sys == SystemId::LV) return block == Block::V1 ? lv1 : lv2;
  return block == Block::V1 ? bt1 : bt2;
}

PFSystem pf_system(SystemId sys, Block block) {
  PFSystem pf;
  pf.sys = sys;
  pf.block = block;
  if (sys == SystemId::LV && block == Block::V1) {
    pf.A = mat({{q(3, 2), 0}, {q(3, 2), q(3, 4)}});
    pf.B = mat({{q(9, 8), q(-3, 8)}, {q(27, 16), q(-9, 16)}});
  } else if (sys == SystemId::LV) {
    pf.A = mat({{q(11, 2), -1, 0}, {10, -1, 0}, {q(13, 4), -1, 1}});
    pf.B = mat({{q(27, 8), q(-9, 8), 0}, {q(27, 4), q(-9, 4), 0}, {q(27, 16), q(-9, 16), 0}});
  } else if (block == Block::V1) {
    pf.A = mat({{3, 0}, {0, q(3, 2)}});
    pf.B = mat({{0, -2}, {-1, 0}});
  } else {
    pf.A = mat({{q(6, 5), 0}, {0, q(6, 7)}});
    pf.B = mat({{0, q(-4, 5)}, {q(-4, 7), 0}});
  }
  return pf;
}

double pf_residual(const PFSystem& pf, double h) {
  check_interior(pf.sys, h);
  const auto& els = block_elements(pf.sys, pf.block);
  std::vector<double> V = values(pf.sys, els, h, 0), dV = values(pf.sys, els, h, 1);
  std::vector<double> rhs = apply(linear(pf.A, pf.B), dV, h);
  double r = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) r = std::max(r, std::fabs(V[i] - rhs[i]));
  return r / (1.0 + max_abs(V));
}

double pf_differentiated_residual(const PFSystem& pf, double h) {
  check_interior(pf.sys, h);
  const auto& els = block_elements(pf.sys, pf.block);
  std::vector<double> dV = values(pf.sys, els, h, 1), d2V = values(pf.sys, els, h, 2);
  std::vector<double> lhs = apply(linear(pf.A, pf.B), d2V, h);
  RationalMatrix EA = RationalMatrix::Identity(pf.A.rows(), pf.A.cols()) - pf.A;
  std::vector<double> rhs = apply(constant(EA), dV, h);
  double r = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) r = std::max(r, std::fabs(lhs[i] - rhs[i]));
  return r / (1.0 + max_abs(dV));
}

PolyMatrix second_order_matrix(SecondOrder rel, MatrixSource src) {
  bool printed = src == MatrixSource::printed;
  switch (rel) {
    case SecondOrder::lv_v2: {
      Poly c2{0, q(4, 9)};
      Poly half{q(1, 2), 1};  // (2h+1)/2
      if (printed)
        return {{Poly{q(-171, 18), q(-116, 18)}, c2},
                {Poly{q(-513, 18), q(-800, 18)}, c2},
                {Poly{-15, -30}, half}};
      return {{Poly{q(-9, 18), q(-44, 18)}, c2},
              {Poly{q(-27, 18), q(-80, 18)}, c2},
              {Poly{q(-3, 2), -3}, half}};
    }
    case SecondOrder::bt_v1_value:
      return {{Poly{-4, 0, q(-9, 2)}, Poly{0, 9}}, {Poly{0, q(9, 2)}, Poly{-1, 0, q(-9, 2)}}};
    case SecondOrder::bt_v1_slope:
      return {{Poly{0, q(-3, 2)}, Poly{1}}, {Poly{2}, Poly{0, -3}}};
    case SecondOrder::bt_v2_value:
      return {{Poly{q(16, 5), 0, q(-36, 5)}, Poly{}}, {Poly{}, Poly{q(-16, 7), 0, q(36, 7)}}};
    case SecondOrder::bt_v2_slope:
      return {{Poly{0, -6}, Poly{4}}, {Poly{printed ? 4 : -4}, Poly{0, 6}}};
  }
  throw PreconditionError("unknown relation");
}

double second_order_residual(SecondOrder rel, double h, MatrixSource src) {
  PolyMatrix M = second_order_matrix(rel, src);
  if (rel == SecondOrder::lv_v2) {
    check_interior(SystemId::LV, h);
    const auto& els = block_elements(SystemId::LV, Block::V2);
    std::vector<double> d1 = values(SystemId::LV, els, h, 1), d2 = values(SystemId::LV, els, h, 2);
    double f = h * (2 * h + 1);
    std::vector<double> rhs = apply(M, {d1[0], d1[1]}, h);
    double r = 0.0, s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      r = std::max(r, std::fabs(f * d2[i] - rhs[i]));
      s = std::max(s, std::fabs(f * d2[i]));
    }
    return r / (1.0 + s);
  }
  check_interior(SystemId::BT, h);
  bool v1 = rel == SecondOrder::bt_v1_value || rel == SecondOrder::bt_v1_slope;
  bool value = rel == SecondOrder::bt_v1_value || rel == SecondOrder::bt_v2_value;
  const auto& els = block_elements(SystemId::BT, v1 ? Block::V1 : Block::V2);
  std::vector<double> lhs = values(SystemId::BT, els, h, value ? 0 : 1);
  std::vector<double> rhs = apply(M, values(SystemId::BT, els, h, 2), h);
  double r = 0.0;
  for (std::size_t i = 0; i < 2; ++i) r = std::max(r, std::fabs(lhs[i] - rhs[i]));
  return r / (1.0 + max_abs(lhs));
}

double second_order_residual(SystemId sys, Block block, double h) {
  if (sys == SystemId::LV) {
    if (block == Block::V1) throw PreconditionError("no second-order relation for the LV V1 block");
    return second_order_residual(SecondOrder::lv_v2, h);
  }
  if (block == Block::V1)
    return std::max(second_order_residual(SecondOrder::bt_v1_value, h),
                    second_order_residual(SecondOrder::bt_v1_slope, h));
  return std::max(second_order_residual(SecondOrder::bt_v2_value, h),
                  second_order_residual(SecondOrder::bt_v2_slope, h));
}

// ---------------------------------------------------------------------------

AnnihilatorDegrees annihilator_degrees(SystemId sys, int n) {
  if (n < 1) throw RangeError("degree must be >= 1");
  if (sys == SystemId::BT) return {n + 1, n, n - 1};
  if (n >= 4) return {2 * n - 3, 2 * n - 4, 2 * n - 5};
  int s = n == 3 ? 1 : 0;
  return {2 * s + 3, 2 * s + 2, 2 * s + 1};
}

Block target_block(SystemId sys) { return sys == SystemId::LV ? Block::V1 : Block::V2; }

PolyRow block_coefficients(const MelnikovRepresentation& rep, Block block) {
  PolyRow out;
  for (const auto& e : block_elements(rep.sys, block)) out.push_back(rep.decomposition.coeff(e));
  return out;
}

namespace {

Rows target_rows(const MelnikovRepresentation& rep) {
  PFSystem pf = pf_system(rep.sys, target_block(rep.sys));
  auto [T0, T1] = second_derivative_frame(pf);
  return rows_for(block_coefficients(rep, pf.block), T0, T1);
}

PolyRow combine(const Rows& R, const Poly& P2, const Poly& P1, const Poly& P0) {
  return P2 * R.r2 + P1 * R.r1 + P0 * R.r0;
}

}  // namespace

Annihilator construct_annihilator(const MelnikovRepresentation& rep) {
  PolyRow c = block_coefficients(rep, target_block(rep.sys));
  if (is_zero(c)) throw PreconditionError("target block of the representation is identically zero");
  Rows R = target_rows(rep);
  AnnihilatorDegrees d = annihilator_degrees(rep.sys, rep.n);
  std::vector<int> widths{d.p2 + 1, d.p1 + 1, d.p0 + 1};
  std::vector<const PolyRow*> parts{&R.r2, &R.r1, &R.r0};
  std::size_t cols = static_cast<std::size_t>(widths[0] + widths[1] + widths[2]);

  // one equation per power of h in each component
  std::vector<std::vector<Rational>> eqs;
  for (std::size_t k = 0; k < c.size(); ++k) {
    int top = -1;
    for (int p = 0; p < 3; ++p) {
      int dk = (*parts[static_cast<std::size_t>(p)])[k].degree();
      if (dk >= 0) top = std::max(top, dk + widths[static_cast<std::size_t>(p)] - 1);
    }
    for (int e = 0; e <= top; ++e) {
      std::vector<Rational> row(cols, Rational(0));
      std::size_t col = 0;
      for (int p = 0; p < 3; ++p) {
        const Poly& base = (*parts[static_cast<std::size_t>(p)])[k];
        for (int t = 0; t < widths[static_cast<std::size_t>(p)]; ++t, ++col) row[col] = base.coefficient(e - t);
      }
      eqs.push_back(std::move(row));
    }
  }
  int dim = 0;
  std::vector<Rational> x = kernel_vector(eqs, cols, dim);
  if (dim == 0) throw InternalError("annihilator system has a trivial kernel");
  Annihilator ann;
  ann.sys = rep.sys;
  ann.n = rep.n;
  ann.kernel_dim = dim;
  auto slice = [&](std::size_t from, int w) {
    return Poly(std::vector<Rational>(x.begin() + static_cast<long>(from), x.begin() + static_cast<long>(from) + w));
  };
  ann.P2 = slice(0, widths[0]);
  ann.P1 = slice(static_cast<std::size_t>(widths[0]), widths[1]);
  ann.P0 = slice(static_cast<std::size_t>(widths[0] + widths[1]), widths[2]);
  if (!is_zero(annihilation_remainder(rep, ann)))
    throw InternalError("annihilator does not cancel the target block");
  return ann;
}

PolyRow annihilation_remainder(const MelnikovRepresentation& rep, const Annihilator& ann) {
  return combine(target_rows(rep), ann.P2, ann.P1, ann.P0);
}

OperatorValue annihilator_residual(const MelnikovRepresentation& rep, const Annihilator& ann, double h) {
  check_interior(rep.sys, h);
  if (rep.sys == SystemId::LV && std::fabs(h) < kSingularStandoff)
    throw NearSingularError("energy within the standoff of h = 0");
  const auto& els = basis(rep.sys);
  std::vector<double> v0 = values(rep.sys, els, h, 0), v1 = values(rep.sys, els, h, 1),
                      v2 = values(rep.sys, els, h, 2);
  double n0 = 0, n1 = 0, n2 = 0, s0 = 0, s1 = 0, s2 = 0;
  const auto& cs = rep.decomposition.coeffs();
  for (std::size_t k = 0; k < els.size(); ++k) {
    const Poly& p = cs[k];
    if (p.is_zero()) continue;
    Poly dp = p.derivative(), ddp = dp.derivative();
    double t0 = p(h) * v0[k];
    double t1a = dp(h) * v0[k], t1b = p(h) * v1[k];
    double t2a = ddp(h) * v0[k], t2b = 2.0 * dp(h) * v1[k], t2c = p(h) * v2[k];
    n0 += t0;
    n1 += t1a + t1b;
    n2 += t2a + t2b + t2c;
    s0 += std::fabs(t0);
    s1 += std::fabs(t1a) + std::fabs(t1b);
    s2 += std::fabs(t2a) + std::fabs(t2b) + std::fabs(t2c);
  }
  double a2 = ann.P2(h), a1 = ann.P1(h), a0 = ann.P0(h);
  OperatorValue out;
  out.value = a2 * n2 + a1 * n1 + a0 * n0;
  out.scale = std::fabs(a2) * s2 + std::fabs(a1) * s1 + std::fabs(a0) * s0;
  return out;
}

PolyRow residual_polynomials(const MelnikovRepresentation& rep, const Annihilator& ann) {
  if (rep.sys == SystemId::BT) {
    PFSystem pf = pf_system(SystemId::BT, Block::V1);
    PolyMatrix W0 = second_order_matrix(SecondOrder::bt_v1_value);
    PolyMatrix W1 = second_order_matrix(SecondOrder::bt_v1_slope);
    Rows R = rows_for(block_coefficients(rep, Block::V1), W0, W1);
    return combine(R, ann.P2, ann.P1, ann.P0);
  }
  // Phi2 = tau G V2', Phi2' = (tau' G + tau) V2', Phi2'' = (tau'' G + 2 tau') V2' + tau V2'',
  // with h(2h+1) V2'' = N (I10', I00')^T
  PFSystem pf = pf_system(SystemId::LV, Block::V2);
  PolyMatrix G = linear(pf.A, pf.B);
  PolyRow tau = lv_tau(rep), t1 = derivative(tau), t2 = derivative(t1);
  PolyRow qrow = ann.P2 * (row_times(t2, G) + Poly{2} * t1) + ann.P1 * (row_times(t1, G) + tau) +
                 ann.P0 * row_times(tau, G);
  PolyRow extra = ann.P2 * row_times(tau, second_order_matrix(SecondOrder::lv_v2));
  Poly f{0, 1, 2};  // h(2h+1)
  return {f * qrow[0] + extra[0], f * qrow[1] + extra[1], qrow[2]};
}

OperatorValue block_residual(const MelnikovRepresentation& rep, const Annihilator& ann, double h) {
  check_interior(rep.sys, h);
  PolyRow Q = residual_polynomials(rep, ann);
  OperatorValue out;
  if (rep.sys == SystemId::BT) {
    std::vector<double> d2 = values(SystemId::BT, block_elements(SystemId::BT, Block::V1), h, 2);
    out.value = row_dot(Q, d2, h, &out.scale);
    return out;
  }
  if (std::fabs(h) < kSingularStandoff) throw NearSingularError("energy within the standoff of h = 0");
  std::vector<double> d1 = values(SystemId::LV, block_elements(SystemId::LV, Block::V2), h, 1);
  double f = h * (2 * h + 1);
  double mag = 0.0;
  double a = row_dot({Q[0], Q[1]}, {d1[0], d1[1]}, h, &mag) / f;
  double b = Q[2](h) * d1[2];
  out.value = a + b;
  out.scale = mag / std::fabs(f) + std::fabs(b);
  return out;
}

double riccati_residual(SystemId sys, RiccatiKind kind, double h) {
  check_interior(sys, h);
  double w, dw, G;
  std::vector<double> rhs_terms;
  auto ratio = [&](double num, double dnum, double den, double dden, const char* name) {
    if (std::fabs(den) < 1e-6 * (std::fabs(num) + std::fabs(den)))
      throw RatioDenominatorError(std::string(name) + " nearly vanishes at this energy");
    w = num / den;
    dw = (dnum * den - num * dden) / (den * den);
  };
  switch (kind) {
    case RiccatiKind::omega_lv: {
      if (sys != SystemId::LV) throw PreconditionError("omega_lv is an LV relation");
      if (std::fabs(h) < kSingularStandoff) throw NearSingularError("energy within the standoff of h = 0");
      ratio(abelian_integral({sys, -1, 1}, h), abelian_derivative({sys, -1, 1}, h), abelian_integral({sys, 0, 1}, h),
            abelian_derivative({sys, 0, 1}, h), "I(0,1)");
      G = h * (2 * h + 1);
      rhs_terms = {-2.0 / 3.0 * w * w, (4 * h + 9) / 3.0 * w, -(8 * h + 9) / 3.0};
      break;
    }
    case RiccatiKind::chi_bt_v2: {
      if (sys != SystemId::BT) throw PreconditionError("chi_bt_v2 is a BT relation");
      ratio(abelian_integral({sys, 1, 1}, h), abelian_derivative({sys, 1, 1}, h), abelian_integral({sys, 0, 1}, h),
            abelian_derivative({sys, 0, 1}, h), "I(0,1)");
      G = 4.0 / 35.0 * (9 * h * h - 4);
      rhs_terms = {-0.8 * w * w, 12.0 / 35.0 * h * w, 4.0 / 7.0};
      break;
    }
    case RiccatiKind::omega_bt_second: {
      if (sys != SystemId::BT) throw PreconditionError("omega_bt_second is a BT relation");
      ratio(abelian_derivative({sys, 1, 0}, h, 2), abelian_derivative({sys, 1, 0}, h, 3),
            abelian_derivative({sys, 0, 0}, h, 2), abelian_derivative({sys, 0, 0}, h, 3), "I(0,0)''");
      G = 0.2 * (2.25 * h * h - 1);
      rhs_terms = {0.4 * w * w, 0.15 * h * w, -0.5};
      break;
    }
    default:
      throw PreconditionError("unknown Riccati relation");
  }
  double rhs = 0.0, scale = 1.0 + std::fabs(G * dw);
  for (double t : rhs_terms) {
    rhs += t;
    scale += std::fabs(t);
  }
  return std::fabs(G * dw - rhs) / scale;
}

std::string export_annihilator(const Annihilator& ann) {
  nlohmann::ordered_json doc;
  doc["system"] = std::string(to_string(ann.sys));
  doc["degree"] = ann.n;
  doc["kernel_dim"] = ann.kernel_dim;
  auto poly = [](const Poly& p) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& c : p.coefficients()) a.push_back({numerator(c).str(), denominator(c).str()});
    return a;
  };
  doc["P2"] = poly(ann.P2);
  doc["P1"] = poly(ann.P1);
  doc["P0"] = poly(ann.P0);
  return doc.dump(2) + "\n";
}

}  // namespace melnikov

#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <utility>
#include <vector>

#include "melnikov/rational.hpp"

namespace melnikov {

/// Dense univariate polynomial in h with ascending coefficients.
///
/// Trailing zeros are stripped on every mutation, so degree() is exact and
/// the zero polynomial has degree -1. Works for any field-like Scalar
/// (Rational for the exact engine, double for evaluation).
template <typename Scalar>
class Polynomial {
 public:
  using scalar_type = Scalar;

  Polynomial() = default;
  Polynomial(std::initializer_list<Scalar> coeffs) : coeffs_(coeffs) { trim(); }
  explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Scalar& c) { return Polynomial(std::vector<Scalar>{c}); }

  /// c * h^k
  static Polynomial monomial(const Scalar& c, int k) {
    std::vector<Scalar> v(static_cast<std::size_t>(k) + 1, Scalar(0));
    v.back() = c;
    return Polynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }

  Scalar coefficient(int k) const {
    if (k < 0 || k > degree()) return Scalar(0);
    return coeffs_[static_cast<std::size_t>(k)];
  }

  /// Horner evaluation; T may differ from Scalar (e.g. Rational coefficients at a double h).
  template <typename T>
  T operator()(const T& h) const {
    T acc = T(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * h + convert<T>(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Scalar> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * Scalar(static_cast<long>(k));
    return Polynomial(std::move(d));
  }

  /// Multiply by h^k (k >= 0).
  Polynomial shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<Scalar> v(static_cast<std::size_t>(k), Scalar(0));
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return Polynomial(std::move(v));
  }

  /// Divide by h^k; requires the k lowest coefficients to vanish.
  Polynomial unshifted(int k) const {
    if (is_zero() || k == 0) return *this;
    return Polynomial(std::vector<Scalar>(coeffs_.begin() + k, coeffs_.end()));
  }

  /// Multiplicity of h = 0 as a root (0 for the zero polynomial).
  int low_order() const {
    int k = 0;
    while (k <= degree() && coeffs_[static_cast<std::size_t>(k)] == Scalar(0)) ++k;
    return is_zero() ? 0 : k;
  }

  template <typename To>
  Polynomial<To> cast() const {
    std::vector<To> v;
    v.reserve(coeffs_.size());
    for (const auto& c : coeffs_) v.push_back(convert<To>(c));
    return Polynomial<To>(std::move(v));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Scalar> v(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == Scalar(0)) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  template <typename To, typename From>
  static To convert(const From& x) {
    if constexpr (std::is_same_v<To, double> && std::is_same_v<From, Rational>)
      return to_double(x);
    else
      return static_cast<To>(x);
  }

  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == Scalar(0)) coeffs_.pop_back();
  }

  std::vector<Scalar> coeffs_;
};

using RationalPoly = Polynomial<Rational>;
using RealPoly = Polynomial<double>;

}  // namespace melnikov

#pragma once

// Exact-rational (and double) polynomials in one variable and in the three
// variables (u, v, t) used throughout the cap bound machinery.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "capsdp/rational.hpp"

namespace capsdp {

/// Exponent triple of the monomial u^u v^v t^t.
struct Exponent3 {
  int u = 0;
  int v = 0;
  int t = 0;

  int total() const { return u + v + t; }
  Exponent3 swapped() const { return {v, u, t}; }
  Exponent3 operator+(const Exponent3& o) const {
    return {u + o.u, v + o.v, t + o.t};
  }
  bool operator==(const Exponent3&) const = default;
};

// Graded lexicographic order with u > v > t: lower total degree first, then
// the larger u exponent, then the larger v exponent. Gives [1, u, v, t, u^2,
// uv, ut, v^2, vt, t^2, ...].
struct GrlexLess {
  bool operator()(const Exponent3& a, const Exponent3& b) const {
    if (a.total() != b.total()) return a.total() < b.total();
    if (a.u != b.u) return a.u > b.u;
    if (a.v != b.v) return a.v > b.v;
    return a.t > b.t;
  }
};

namespace detail {

template <class T>
bool is_zero(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return x == 0.0;
  } else {
    return sgn(x) == 0;
  }
}

template <class T>
double pow_int(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace detail

/// Dense univariate polynomial; coefficients_[i] multiplies x^i.
template <class T>
class UniPolyT {
 public:
  UniPolyT() = default;
  explicit UniPolyT(std::vector<T> coefficients)
      : coefficients_(std::move(coefficients)) {
    trim();
  }
  static UniPolyT constant(const T& c) { return UniPolyT(std::vector<T>{c}); }
  static UniPolyT monomial(int degree, const T& c = T(1)) {
    std::vector<T> cs(degree + 1, T(0));
    cs[degree] = c;
    return UniPolyT(std::move(cs));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }
  const std::vector<T>& coefficients() const { return coefficients_; }
  T coefficient(int i) const {
    return (i >= 0 && i < static_cast<int>(coefficients_.size()))
               ? coefficients_[i]
               : T(0);
  }
  T leading() const { return is_zero() ? T(0) : coefficients_.back(); }

  T operator()(const T& x) const {
    T acc(0);
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }
  double eval_double(double x) const {
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = acc * x + to_double(*it);
    }
    return acc;
  }

  UniPolyT operator+(const UniPolyT& o) const {
    std::vector<T> cs(std::max(coefficients_.size(), o.coefficients_.size()),
                      T(0));
    for (std::size_t i = 0; i < coefficients_.size(); ++i) cs[i] += coefficients_[i];
    for (std::size_t i = 0; i < o.coefficients_.size(); ++i) cs[i] += o.coefficients_[i];
    return UniPolyT(std::move(cs));
  }
  UniPolyT operator-() const {
    std::vector<T> cs = coefficients_;
    for (auto& c : cs) c = -c;
    return UniPolyT(std::move(cs));
  }
  UniPolyT operator-(const UniPolyT& o) const { return *this + (-o); }
  UniPolyT operator*(const UniPolyT& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<T> cs(coefficients_.size() + o.coefficients_.size() - 1, T(0));
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      if (detail::is_zero(coefficients_[i])) continue;
      for (std::size_t j = 0; j < o.coefficients_.size(); ++j) {
        cs[i + j] += coefficients_[i] * o.coefficients_[j];
      }
    }
    return UniPolyT(std::move(cs));
  }
  UniPolyT scaled(const T& s) const {
    std::vector<T> cs = coefficients_;
    for (auto& c : cs) c *= s;
    return UniPolyT(std::move(cs));
  }
  bool operator==(const UniPolyT& o) const {
    return coefficients_ == o.coefficients_;
  }

 private:
  void trim() {
    while (!coefficients_.empty() && detail::is_zero(coefficients_.back())) {
      coefficients_.pop_back();
    }
  }

  std::vector<T> coefficients_;
};

/// Sparse polynomial in (u, v, t) with terms kept in graded-lex order and no
/// stored zero coefficients.
template <class T>
class TriPolyT {
 public:
  using TermMap = std::map<Exponent3, T, GrlexLess>;

  TriPolyT() = default;
  static TriPolyT constant(const T& c) {
    TriPolyT p;
    p.add_term({0, 0, 0}, c);
    return p;
  }
  static TriPolyT monomial(Exponent3 e, const T& c = T(1)) {
    TriPolyT p;
    p.add_term(e, c);
    return p;
  }
  static TriPolyT u() { return monomial({1, 0, 0}); }
  static TriPolyT v() { return monomial({0, 1, 0}); }
  static TriPolyT t() { return monomial({0, 0, 1}); }

  // Univariate embedding: x -> u, v or t.
  static TriPolyT from_uni(const UniPolyT<T>& p, int variable) {
    TriPolyT out;
    for (int i = 0; i <= p.degree(); ++i) {
      Exponent3 e;
      (variable == 0 ? e.u : variable == 1 ? e.v : e.t) = i;
      out.add_term(e, p.coefficient(i));
    }
    return out;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  T coefficient(const Exponent3& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const Exponent3& e, const T& c) {
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  int deg_u() const { return max_over([](const Exponent3& e) { return e.u; }); }
  int deg_v() const { return max_over([](const Exponent3& e) { return e.v; }); }
  int deg_t() const { return max_over([](const Exponent3& e) { return e.t; }); }
  int deg_total() const {
    return max_over([](const Exponent3& e) { return e.total(); });
  }
  // Total degree in (u, t); the degree notion defining R_d.
  int deg_ut() const {
    return max_over([](const Exponent3& e) { return e.u + e.t; });
  }

  TriPolyT operator+(const TriPolyT& o) const {
    TriPolyT out = *this;
    out += o;
    return out;
  }
  TriPolyT& operator+=(const TriPolyT& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  TriPolyT operator-() const {
    TriPolyT out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
  }
  TriPolyT operator-(const TriPolyT& o) const { return *this + (-o); }
  TriPolyT& operator-=(const TriPolyT& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  TriPolyT operator*(const TriPolyT& o) const {
    TriPolyT out;
    for (const auto& [ea, ca] : terms_) {
      for (const auto& [eb, cb] : o.terms_) out.add_term(ea + eb, ca * cb);
    }
    return out;
  }
  TriPolyT scaled(const T& s) const {
    if (detail::is_zero(s)) return {};
    TriPolyT out = *this;
    for (auto& [e, c] : out.terms_) c *= s;
    return out;
  }
  // Multiplication by a single monomial.
  TriPolyT shifted(const Exponent3& by, const T& s = T(1)) const {
    TriPolyT out;
    for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + by, c * s);
    if (detail::is_zero(s)) out.terms_.clear();
    return out;
  }
  bool operator==(const TriPolyT& o) const { return terms_ == o.terms_; }

  T eval(const T& u, const T& v, const T& t) const {
    T acc(0);
    for (const auto& [e, c] : terms_) {
      T m = c;
      for (int i = 0; i < e.u; ++i) m *= u;
      for (int i = 0; i < e.v; ++i) m *= v;
      for (int i = 0; i < e.t; ++i) m *= t;
      acc += m;
    }
    return acc;
  }
  double eval_double(double u, double v, double t) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
      acc += to_double(c) * detail::pow_int<double>(u, e.u) *
             detail::pow_int<double>(v, e.v) * detail::pow_int<double>(t, e.t);
    }
    return acc;
  }

  // Sum of absolute coefficients; bounds |F| on the cube [-1, 1]^3.
  double coefficient_l1() const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += std::abs(to_double(c));
    return s;
  }

 private:
  template <class F>
  int max_over(F f) const {
    int m = -1;
    for (const auto& [e, c] : terms_) m = std::max(m, f(e));
    return m;
  }

  TermMap terms_;
};

using UniPoly = UniPolyT<Rational>;
using UniPolyF = UniPolyT<double>;
using TriPoly = TriPolyT<Rational>;
using TriPolyF = TriPolyT<double>;

/// P_k^n(t): Gegenbauer polynomial with parameter n/2 - 1 normalized by
/// P_k^n(1) = 1 (Chebyshev T_k for n = 2). Throws for n < 2 or k < 0.
UniPoly gegenbauer(int n, int k);

/// P_0^n, ..., P_kmax^n in one pass of the three-term recurrence.
std::vector<UniPoly> gegenbauer_sequence(int n, int kmax);

TriPoly swap_uv(const TriPoly& f);
TriPolyF swap_uv(const TriPolyF& f);
bool is_uv_symmetric(const TriPoly& f);

/// u -> F(u, u, 1).
UniPoly restrict_diagonal(const TriPoly& f);

/// Coefficients of f in the tensor Chebyshev basis T_a(u) T_b(v) T_c(t); the
/// exponent triple of each returned term is read as (a, b, c).
TriPoly to_chebyshev(const TriPoly& f);
TriPoly from_chebyshev(const TriPoly& f);
/// Product of two polynomials both given in the tensor Chebyshev basis.
TriPoly chebyshev_product(const TriPoly& f, const TriPoly& g);

TriPolyF to_float(const TriPoly& f);
UniPolyF to_float(const UniPoly& f);

/// Composition p(q) where q is trivariate.
TriPoly compose(const UniPoly& p, const TriPoly& q);

// {"terms": [[a, b, c, "num/den"], ...]} in graded-lex order.
nlohmann::json to_json(const TriPoly& f);
nlohmann::json to_json(const TriPolyF& f);
TriPoly tripoly_from_json(const nlohmann::json& j);

std::string to_string(const TriPoly& f);

}  // namespace capsdp

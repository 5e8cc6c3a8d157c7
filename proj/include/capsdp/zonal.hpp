#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "capsdp/polynomial.hpp"

namespace capsdp {

/// Dense square matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int size) : size_(size), data_(size * size, Rational(0)) {}

  int size() const { return size_; }
  Rational& operator()(int i, int j) { return data_[i * size_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[i * size_ + j]; }
  bool operator==(const RationalMatrix&) const = default;
  bool is_symmetric() const;
  Eigen::MatrixXd to_double() const;

 private:
  int size_ = 0;
  std::vector<Rational> data_;
};

/// Thrown when a polynomial is not in R_d (u<->v symmetric with (u,t)-degree
/// at most d).
class MembershipError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AsymmetryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// h_k^m: dimension of the homogeneous harmonic polynomials of degree k in m
/// variables.
std::int64_t harm_dim(int m, int k);

/// Caches h_k^m lookups; values are cheap but requested in inner loops.
class DimensionTable {
 public:
  std::int64_t operator()(int m, int k);

 private:
  std::vector<std::vector<std::int64_t>> cache_;
};

/// Q_k^{n-1}(u, v, t) = ((1-u^2)(1-v^2))^{k/2} P_k^{n-1}((t-uv)/sqrt(...)),
/// expanded into a polynomial.
TriPoly q_poly(int n, int k);

/// omega_m / omega_{m-1} with omega_m = 2 pi^{m/2} / Gamma(m/2) the surface
/// area of S^{m-1}.
double sphere_area_ratio(int m);

enum class Normalization { kNormalized, kUnnormalized };

/// The matrices Y_k^n, k = 0..d, of size (d-k+1). Entries are stored in the
/// unnormalized form P_i^{n+2k}(u) P_j^{n+2k}(v) Q_k^{n-1}(u,v,t) with exact
/// coefficients; the normalized family additionally carries the factors
/// lambda_{i,j} as doubles.
class ZonalFamily {
 public:
  ZonalFamily(int n, int d, Normalization normalization);

  int n() const { return n_; }
  int d() const { return d_; }
  Normalization normalization() const { return normalization_; }
  int block_size(int k) const { return d_ - k + 1; }

  /// P_i^{n+2k}
  const UniPoly& gegenbauer_factor(int k, int i) const { return p_[k][i]; }
  const TriPoly& q(int k) const { return q_[k]; }

  /// Unnormalized (Y_k)_{i,j}, exact.
  const TriPoly& exact_entry(int k, int i, int j) const;
  /// Unnormalized symmetrized entry (Ybar_k)_{i,j}, exact.
  const TriPoly& exact_sym_entry(int k, int i, int j) const;
  /// 1 in unnormalized mode.
  double lambda(int k, int i, int j) const;
  /// (Y_k)_{i,j} in the family's normalization.
  TriPolyF entry(int k, int i, int j) const;
  TriPolyF sym_entry(int k, int i, int j) const;

  /// Numeric Ybar_k(u, v, t) in the family's normalization.
  Eigen::MatrixXd evaluate_sym(int k, double u, double v, double t) const;

 private:
  int n_;
  int d_;
  Normalization normalization_;
  std::vector<std::vector<UniPoly>> p_;
  std::vector<TriPoly> q_;
  std::vector<std::vector<TriPoly>> entries_;
  std::vector<std::vector<TriPoly>> sym_entries_;
  std::vector<std::vector<double>> lambda_;
  std::vector<std::vector<UniPolyF>> p_float_;
  std::vector<TriPolyF> q_float_;
};

/// Matrix coefficients (F_0, ..., F_d) of a polynomial in R_d with respect to
/// a zonal family. `exact` is present for unnormalized decompositions of
/// rational input.
struct MatrixCoefficients {
  int d = 0;
  std::vector<Eigen::MatrixXd> matrices;
  std::optional<std::vector<RationalMatrix>> exact;
};

/// Unique symmetric (F_k) with F = sum_k <F_k, Ybar_k>. Throws AsymmetryError
/// or MembershipError.
MatrixCoefficients decompose(const TriPoly& f, const ZonalFamily& family);

/// sum_k <F_k, Ybar_k>; exact when coefficients and family are exact.
TriPoly reconstruct_exact(const MatrixCoefficients& coeffs, const ZonalFamily& family);
TriPolyF reconstruct(const MatrixCoefficients& coeffs, const ZonalFamily& family);

/// sum_k <F_k, Ybar_k(u, v, t)> evaluated numerically.
double evaluate(const MatrixCoefficients& coeffs, const ZonalFamily& family,
                double u, double v, double t);

struct PositiveDefiniteReport {
  bool positive_definite = false;
  std::vector<double> min_eigenvalues;
  std::vector<Eigen::VectorXd> spectra;
};

PositiveDefiniteReport is_positive_definite(const TriPoly& f, const ZonalFamily& family,
                                            double tol);

/// Smallest eigenvalue of a symmetric matrix (0 for an empty matrix).
double min_eigenvalue(const Eigen::MatrixXd& m);

/// K_d(., p) = sum_k h_k^{n-1} <Ybar_k(.), Ybar_k(p)>. Requires a normalized
/// family.
TriPolyF reproducing_kernel(const ZonalFamily& family, double u, double v, double t);

nlohmann::json to_json(const ZonalFamily& family);
nlohmann::json to_json(const MatrixCoefficients& coeffs, const ZonalFamily& family);

}  // namespace capsdp

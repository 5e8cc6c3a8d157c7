#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "capsdp/codes.hpp"
#include "capsdp/conic.hpp"
#include "capsdp/relax.hpp"
#include "capsdp/zonal.hpp"

namespace capsdp {

struct CertifyOptions {
  // Smallest eigenvalue allowed for any F_k or Gram block, relative to
  // max(1, largest eigenvalue of that block).
  double psd_tolerance = 1e-6;
  // Largest coefficient of either identity residual, relative to the largest
  // coefficient of the matched polynomial.
  double identity_tolerance = 1e-6;
};

struct AuditCheck {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

struct BlockAudit {
  std::string label;
  int size = 0;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  // Shift making the block provably PSD in the margin analysis.
  double deficit = 0;
};

struct ResidualTerm {
  std::string monomial;
  double value = 0;
};

struct IdentityAudit {
  std::string group;
  double max_abs = 0;
  double l1 = 0;
  double scale = 0;  // largest coefficient of the matched polynomial
  std::vector<ResidualTerm> largest;  // a few largest coefficients
};

/// sup over Delta_0 of F'(u,u,1) - M <= eta_diagonal and
/// sup over Delta of F' + 1 <= eta_offdiagonal, where F' is the polynomial of
/// the PSD-shifted blocks.
struct MarginAnalysis {
  double eta_diagonal = 0;
  double eta_offdiagonal = 0;
  double residual_diagonal = 0;
  double residual_offdiagonal = 0;
  double zonal_shift_diagonal = 0;
  double zonal_shift_offdiagonal = 0;
  double gram_shift_diagonal = 0;
  double gram_shift_offdiagonal = 0;
};

struct BoundCertificate {
  CapParams params;
  bool verified = false;
  std::string failure;  // name of the first failed check
  double m = 0;
  double reported_bound = 0;  // 1 + M
  double bound = 0;           // 1 + (M + eta_diag) / (1 - eta_off)
  MatrixCoefficients matrix_coefficients;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> sos_witnesses;
  std::vector<BlockAudit> blocks;
  std::vector<IdentityAudit> identities;
  MarginAnalysis margin;
  std::vector<AuditCheck> checks;
  std::string solver_status;
};

BoundCertificate verify_certificate(const SdpSolution& solution, const CapRelaxation& relaxation,
                                    const CertifyOptions& options = {});

/// sum_k <F_k, Ybar_k> + 1 for the unnormalized family: the polynomial of the
/// pol-bound formulation with f_0 = 1 and B = 1 + M.
TriPolyF certificate_polynomial(const BoundCertificate& certificate);

struct EqualityCaseReport {
  int cross_pairs = 0;
  int diagonal_points = 0;
  double max_abs_cross = 0;      // max |F| over cross pairs
  double max_cross = 0;          // max F over cross pairs
  double min_cross = 0;
  double max_diagonal_gap = 0;   // max |F(u,u,1) - B|
  double tight_tolerance = 0;
  bool near_tight = false;
};

EqualityCaseReport equality_case_report(const BoundCertificate& certificate, const Code& code,
                                        double tight_tolerance = 1e-4);

// ---------------------------------------------------------------------------
// Closed-form bounds. Each returns nullopt when the formula is inapplicable.

/// (1 - cos theta) / (cos^2 phi - cos theta); needs cos phi >= 0 and
/// cos theta < cos^2 phi.
template <class T>
std::optional<T> bound_example1(const T& cos_theta, const T& cos_phi) {
  if (cos_phi < 0 || !(cos_theta < cos_phi * cos_phi)) return std::nullopt;
  return T((1 - cos_theta) / (cos_phi * cos_phi - cos_theta));
}

template <class T>
struct Example2 {
  T a;       // maximizer of f_0(a)
  T f0_max;
  T bound;   // 2 (1 - cos theta) / f0_max
};

/// f_0(a) = -a^2 ((1+c)^2/(1-ct) + 1 - 1/n) + 2a (1/n + c) + 1/n - ct.
template <class T>
T example2_f0(int n, const T& cos_theta, const T& cos_phi, const T& a) {
  const T inv_n = T(1) / T(n);
  const T quad = (1 + cos_phi) * (1 + cos_phi) / (1 - cos_theta) + 1 - inv_n;
  return T(-a * a * quad + 2 * a * (inv_n + cos_phi) + inv_n - cos_theta);
}

template <class T>
std::optional<Example2<T>> example2(int n, const T& cos_theta, const T& cos_phi) {
  if (n < 2 || !(cos_theta < 1)) return std::nullopt;
  const T inv_n = T(1) / T(n);
  const T lin = inv_n + cos_phi;
  if (!(lin > 0)) return std::nullopt;
  const T quad = (1 + cos_phi) * (1 + cos_phi) / (1 - cos_theta) + 1 - inv_n;
  Example2<T> out;
  out.a = lin / quad;
  out.f0_max = T(inv_n - cos_theta + lin * lin / quad);
  if (!(out.f0_max > 0)) return std::nullopt;
  out.bound = T(2 * (1 - cos_theta) / out.f0_max);
  return out;
}

template <class T>
std::optional<T> bound_example2(int n, const T& cos_theta, const T& cos_phi) {
  const auto e = example2(n, cos_theta, cos_phi);
  if (!e) return std::nullopt;
  return e->bound;
}

/// F_0 of (t+1)(t - cos theta) + a ((u - cos phi)(u - 1) + (v - cos phi)(v - 1))
/// in the unnormalized family.
template <class T>
std::array<std::array<T, 3>, 3> example2_f0_matrix(int n, const T& cos_theta, const T& cos_phi,
                                                   const T& a) {
  const T inv_n = T(1) / T(n);
  std::array<std::array<T, 3>, 3> m;
  m[0] = {T(2 * a * (inv_n + cos_phi) + inv_n - cos_theta), T(-a * (1 + cos_phi)),
          T(a * (1 - inv_n))};
  m[1] = {T(-a * (1 + cos_phi)), T(1 - cos_theta), T(0)};
  m[2] = {T(a * (1 - inv_n)), T(0), T(1 - inv_n)};
  return m;
}

/// LP bound 2 (1 - cos theta) / (1/n - cos theta) of (t+1)(t - cos theta) on
/// the whole sphere; needs cos theta < 1/n.
template <class T>
std::optional<T> lp_bound_quadratic(int n, const T& cos_theta) {
  const T inv_n = T(1) / T(n);
  if (!(cos_theta < inv_n)) return std::nullopt;
  return T(2 * (1 - cos_theta) / (inv_n - cos_theta));
}

nlohmann::json to_json(const BoundCertificate& certificate, bool include_matrices = true);
nlohmann::json to_json(const EqualityCaseReport& report);

/// "n | cos theta | cos phi | d | N | bound".
std::string summary_row(const BoundCertificate& certificate);

}  // namespace capsdp

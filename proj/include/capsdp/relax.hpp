#pragma once

#include <array>
#include <string>
#include <vector>

#include "capsdp/polynomial.hpp"
#include "capsdp/sdp_problem.hpp"
#include "capsdp/zonal.hpp"

namespace capsdp {

/// Basis in which both polynomial identities are matched and in which the
/// SOS Gram matrices are expressed. Both span the same spaces, so the
/// optimum does not depend on the choice; the Chebyshev basis T_a(u) T_b(v)
/// T_c(t) keeps the solver data far better conditioned at higher degree.
enum class PolyBasis { kMonomial, kChebyshev };

std::string basis_name(PolyBasis basis);

/// How the SOS multiplier degrees are chosen. kMatchZonal sizes every Gram
/// basis from D = max(2d, N), so that the squares reach the full degree 2d of
/// the zonal side. kMultiplierCap sizes them from N alone (bases of degree
/// floor(N/2), floor((N-2)/2), floor((N-3)/2)); zonal coefficients above the
/// reach of the multipliers are then forced to vanish.
enum class GramDegreeRule { kMatchZonal, kMultiplierCap };

std::string gram_rule_name(GramDegreeRule rule);

/// Parameters of A(n, theta, phi) and of the relaxation degrees.
struct CapParams {
  int n = 3;
  Rational cos_theta{1, 2};
  Rational cos_phi{0};
  int d = 4;   // zonal degree cap
  int N = 4;   // SOS multiplier degree cap
  bool symmetry_reduction = false;
  PolyBasis basis = PolyBasis::kMonomial;
  GramDegreeRule gram_rule = GramDegreeRule::kMatchZonal;

  void validate() const;
  /// D such that q_0, r_0 have basis degree floor(D/2), q_1, r_1..r_3
  /// floor((D-2)/2) and r_4 floor((D-3)/2).
  int sos_degree() const;
};

/// p(u) = -(u - cos phi)(u - 1) and the four polynomials cutting out Delta.
struct DomainSystem {
  UniPoly p;
  std::array<TriPoly, 4> p_i;

  static DomainSystem build(const CapParams& params);
};

/// Ordered monomials of total degree <= max_total_degree; num_vars = 1 uses
/// the u slot only.
std::vector<Exponent3> monomial_basis(int num_vars, int max_total_degree);

std::string monomial_label(const Exponent3& e);
std::string basis_label(const Exponent3& e, PolyBasis basis);

/// An SOS multiplier s(x) = b(x)^T G b(x) entering one of the identities as
/// multiplier * s. Basis elements are monomials or tensor Chebyshev
/// products according to CapParams::basis; the multiplier is always stored in
/// monomial form.
struct GramInfo {
  std::string label;
  int block = -1;
  std::vector<Exponent3> basis;
  TriPoly multiplier;
  bool diagonal_identity = false;  // Delta_0 identity (univariate in u)
};

/// The assembled cap relaxation together with the bookkeeping needed to audit
/// a solution of it.
struct CapRelaxation {
  CapParams params;
  SdpProblem problem;
  std::vector<int> f_blocks;  // F_0..F_d
  std::vector<GramInfo> grams;
  int m_var = -1;
  // Sup bounds on [-1,1]^3 of trace(Ybar_k) and of trace(Ybar_k(u,u,1)).
  std::vector<double> trace_sup_offdiagonal;
  std::vector<double> trace_sup_diagonal;
};

/// minimize M subject to F_k PSD,
///   sum_k <F_k, Ybar_k(u,u,1)> = M - q_0 - p q_1,
///   sum_k <F_k, Ybar_k(u,v,t)> = -1 - r_0 - sum_i p_i r_i,
/// with the unnormalized zonal family. The bound is 1 + M.
CapRelaxation build_cap_sdp(const CapParams& params);

/// Degree-d Delsarte LP bound for the whole sphere A(n, theta): minimize
/// sum_k f_k subject to 1 + sum_{k>=1} f_k P_k^n(t) = -s_0(t) - (t+1)(cos theta - t) s_1(t),
/// f_k >= 0. Bound is 1 + optimum.
CapRelaxation assemble_distance_lp_comparison(const CapParams& params);

}  // namespace capsdp

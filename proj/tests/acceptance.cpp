#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "capsdp/certify.hpp"
#include "capsdp/codes.hpp"
#include "capsdp/conic.hpp"
#include "capsdp/harness.hpp"
#include "capsdp/relax.hpp"
#include "capsdp/zonal.hpp"
#include "test_util.hpp"

namespace capsdp {
namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct BoundRun {
  BoundCertificate cert;
  double seconds = 0;
};

BoundRun certified_bound(int n, int deg, bool symmetry = false) {
  const auto start = std::chrono::steady_clock::now();
  CapParams p;
  p.n = n;
  p.d = deg;
  p.N = deg;
  p.cos_theta = Rational(1, 2);
  p.cos_phi = Rational(0);
  p.symmetry_reduction = symmetry;
  const CapRelaxation relax = build_cap_sdp(p);
  BoundRun run;
  run.cert = verify_certificate(solve(relax.problem), relax);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::string describe(const BoundRun& r) {
  char buf[160];
  if (!r.cert.verified) {
    std::snprintf(buf, sizeof buf, "not verified (%s), %.1f s", r.cert.failure.c_str(), r.seconds);
  } else {
    std::snprintf(buf, sizeof buf, "bound %.6f (solver 1+M = %.6f), %.1f s", r.cert.bound,
                  r.cert.reported_bound, r.seconds);
  }
  return buf;
}

Outcome bound_in(int n, int deg, double lo, double hi, double max_seconds, bool symmetry = false) {
  const BoundRun r = certified_bound(n, deg, symmetry);
  return {r.cert.verified && r.cert.bound > lo && r.cert.bound <= hi && r.seconds <= max_seconds, describe(r)};
}

Outcome criterion1() { return bound_in(3, 4, 9.0, 9.67, 60); }

Outcome criterion2() { return bound_in(4, 6, 18.0, 18.51, 600); }

Outcome criterion3() {
  const Code cap = cap_subcode(e8_roots(), root_pole(8), Rational(0));
  const BoundRun r = certified_bound(8, 8, true);
  const bool ok = r.cert.verified && r.cert.bound < 184 && r.cert.bound >= cap.size() && r.seconds <= 7200;
  return {ok, describe(r) + ", lower bound " + std::to_string(cap.size())};
}

Outcome criterion4() {
  const BoundRun r5 = certified_bound(5, 6);
  const BoundRun r6 = certified_bound(6, 6);
  const bool ok5 = r5.cert.verified && r5.cert.bound <= 35;
  const bool ok6 = r6.cert.verified && r6.cert.bound <= 64;
  return {ok5 && ok6, "n=5: " + describe(r5) + " (limit 35); n=6: " + describe(r6) + " (limit 64)"};
}

Outcome criterion5() {
  for (int n = 2; n <= 12; ++n) {
    const auto b = bound_example2(n, Rational(0), Rational(0));
    if (!b || *b != 2 * n - 1) return {false, "n=" + std::to_string(n)};
  }
  return {true, "2n-1 exactly for n=2..12"};
}

Outcome criterion6() {
  const OrthogonalityReport orth = orthogonality_matrix(4, 3);
  double mass_err = 0;
  for (int n = 3; n <= 10; ++n) {
    const double e = std::abs(QuadratureRule(n, 8).total_mass() - 1.0);
    if (!(e <= mass_err)) mass_err = e;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max entry error %.2e, max mass error %.2e", orth.max_error, mass_err);
  return {orth.max_error <= 1e-9 && mass_err <= 1e-13, buf};
}

Outcome criterion7() {
  const double r = kernel_reproduce_test(4, 2, 50, 1);
  char buf[80];
  std::snprintf(buf, sizeof buf, "max residual %.2e", r);
  return {r <= 1e-8, buf};
}

Outcome criterion8() {
  double worst = std::numeric_limits<double>::infinity();
  for (int n : {3, 4, 5})
    for (int d : {2, 3, 4}) worst = std::min(worst, positivity_sample_test(n, d, 20, 100, 1));
  char buf[80];
  std::snprintf(buf, sizeof buf, "min eigenvalue %.2e", worst);
  return {worst >= -1e-9, buf};
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  const ZonalFamily fam(4, 4, Normalization::kUnnormalized);
  int exact = 0;
  for (int i = 0; i < 100; ++i) {
    const TriPoly f = testing::random_symmetric_rd(rng, 4);
    exact += reconstruct_exact(decompose(f, fam), fam) == f;
  }
  const Rational ct(1, 2), cp(3, 4);
  const TriPoly ex1 = testing::T() - TriPoly::constant(ct) - testing::U() * testing::V() +
                      TriPoly::constant(cp * cp);
  const MatrixCoefficients m = decompose(ex1, ZonalFamily(4, 1, Normalization::kUnnormalized));
  RationalMatrix f0(2), f1(1);
  f0(0, 0) = cp * cp - ct;
  f1(0, 0) = 1;
  const bool ex1_ok = m.exact && (*m.exact)[0] == f0 && (*m.exact)[1] == f1;
  return {exact == 100 && ex1_ok,
          std::to_string(exact) + "/100 exact round trips, linear certificate matrices " + (ex1_ok ? "match" : "differ")};
}

Outcome criterion10() {
  const Code e8 = e8_roots();
  std::set<Rational> ips;
  for (int i = 0; i < e8.size(); ++i)
    for (int j = 0; j < e8.size(); ++j) ips.insert(e8.inner(i, j));
  const std::set<Rational> allowed{Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  bool subset = true;
  for (const auto& r : ips) subset = subset && allowed.count(r);
  const Code cap = cap_subcode(e8, root_pole(8), Rational(0));
  const DistanceDistribution dist = distance_distribution(cap);
  const bool ok = e8.size() == 240 && subset && cap.size() == 183 && dist.diagonal_sum() == 1 &&
                  dist.total_sum() == 183;
  return {ok, std::to_string(e8.size()) + " roots, " + std::to_string(cap.size()) + " in hemisphere, sums " +
                  to_string(dist.diagonal_sum()) + " and " + to_string(dist.total_sum())};
}

Outcome criterion11() {
  CapParams p;
  p.n = 3;
  p.d = 4;
  p.N = 4;
  const CapRelaxation relax = build_cap_sdp(p);
  const SdpSolution good = solve(relax.problem);
  if (!verify_certificate(good, relax).verified) return {false, "baseline certificate not verified"};
  std::vector<std::pair<std::string, std::function<BoundCertificate()>>> faults;
  faults.push_back({"psd", [&] {
                      SdpSolution s = good;
                      s.block_values[relax.problem.find_block("r0")] *= -1.0;
                      return verify_certificate(s, relax);
                    }});
  faults.push_back({"identity", [&] {
                      SdpSolution s = good;
                      s.block_values[relax.problem.find_block("q0")](0, 0) += 1.0;
                      return verify_certificate(s, relax);
                    }});
  faults.push_back({"sign of M", [&] {
                      SdpSolution s = good;
                      s.scalars[relax.m_var] *= -1.0;
                      return verify_certificate(s, relax);
                    }});
  faults.push_back({"truncated block", [&] {
                      SdpSolution s = good;
                      Eigen::MatrixXd& b = s.block_values[relax.f_blocks[0]];
                      b = b.topLeftCorner(b.rows() - 1, b.cols() - 1).eval();
                      return verify_certificate(s, relax);
                    }});
  faults.push_back({"wrong d", [&] {
                      CapParams q = p;
                      q.d = 3;
                      return verify_certificate(good, build_cap_sdp(q));
                    }});
  bool ok = true;
  std::string detail;
  for (const auto& [name, fn] : faults) {
    const BoundCertificate c = fn();
    ok = ok && !c.verified;
    detail += (detail.empty() ? "" : ", ") + name + " -> " + (c.verified ? "verified" : c.failure);
  }
  return {ok, detail};
}

}  // namespace
}  // namespace capsdp

int main() {
  using namespace capsdp;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"B(3) pipeline", criterion1},
      {"B(4) pipeline", criterion2},
      {"B(8) pipeline", criterion3},
      {"n=5 and n=6 at d=N=6", criterion4},
      {"quadratic closed form 2n-1", criterion5},
      {"orthogonality suite", criterion6},
      {"reproducing kernel suite", criterion7},
      {"positivity suite", criterion8},
      {"decomposition round trip", criterion9},
      {"E8 facts", criterion10},
      {"certification soundness", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("criterion %2zu %s: %s -- %s\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

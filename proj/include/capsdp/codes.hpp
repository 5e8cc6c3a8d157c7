#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "capsdp/rational.hpp"

namespace capsdp {

/// Points of S^{n-1} stored as integer-or-rational coordinate vectors sharing
/// the normalizer sqrt(scale2): point = coords / sqrt(scale2). Inner products
/// between stored vectors are therefore exact rationals.
class Code {
 public:
  Code(int n, Rational scale2);

  /// Float points are stored through their exact binary values with
  /// scale2 = 1, so inner products are exact for the stored doubles.
  static Code from_doubles(const std::vector<Eigen::VectorXd>& points);

  int n() const { return n_; }
  int size() const { return static_cast<int>(coords_.size()); }
  const Rational& scale2() const { return scale2_; }
  const std::vector<Rational>& coords(int i) const { return coords_.at(i); }
  Eigen::VectorXd point(int i) const;

  void add(std::vector<Rational> coords);
  void set_pole(std::vector<Rational> coords);
  bool has_pole() const { return pole_.has_value(); }
  const std::vector<Rational>& pole() const;
  Eigen::VectorXd pole_point() const;

  Rational inner(int i, int j) const;
  Rational pole_inner(int i) const;
  Rational squared_norm(int i) const { return inner(i, i); }

  /// False for codes built from doubles, whose norms are only checked to 1e-12.
  bool exact() const { return exact_; }

  /// Throws when a point is not unit, two points coincide, or the pole is not
  /// unit.
  void validate() const;

 private:
  friend Code cap_subcode(const Code&, const std::vector<Rational>&, const Rational&);

  Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) const;

  int n_;
  Rational scale2_;
  std::vector<std::vector<Rational>> coords_;
  std::optional<std::vector<Rational>> pole_;
  bool exact_ = true;
};

/// The 240 roots of E8 scaled to unit length.
Code e8_roots();
/// The 2n(n-1) roots (+-1, +-1, 0^{n-2}) / sqrt(2) of D_n.
Code dn_roots(int n);

/// (1, 1, 0, ..., 0) / sqrt(2) in the coordinates of e8_roots / dn_roots.
std::vector<Rational> root_pole(int n);

/// Points c with e.c >= cos_phi; the pole is recorded on the result.
Code cap_subcode(const Code& code, const std::vector<Rational>& pole, const Rational& cos_phi);

struct DistanceKey {
  Rational u, v, t;
  auto operator<=>(const DistanceKey& o) const {
    if (auto c = cmp(u, o.u); c != 0) return c <=> 0;
    if (auto c = cmp(v, o.v); c != 0) return c <=> 0;
    return cmp(t, o.t) <=> 0;
  }
  bool operator==(const DistanceKey& o) const { return u == o.u && v == o.v && t == o.t; }
};

/// y(u, v, t) keyed with u <= v; Delta_0 keys are those with t = 1.
struct DistanceDistribution {
  std::vector<std::pair<DistanceKey, Rational>> entries;
  int cardinality = 0;

  Rational diagonal_sum() const;
  Rational total_sum() const;
};

DistanceDistribution distance_distribution(const Code& code);

/// Largest inner product between distinct points. Requires size >= 2.
Rational max_inner_product(const Code& code);
double min_angle(const Code& code);

/// Min eigenvalue over k <= d of sum y(u,v,t) Ybar_k(u,v,t) for the
/// normalized zonal family.
double primal_min_eigenvalue(const DistanceDistribution& dist, int n, int d);

nlohmann::json to_json(const Code& code);
nlohmann::json to_json(const DistanceDistribution& dist);
/// One point per line, coordinates printed with %.17g.
std::string to_text(const Code& code);

}  // namespace capsdp

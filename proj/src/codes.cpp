#include "capsdp/codes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "capsdp/zonal.hpp"

namespace capsdp {

Code::Code(int n, Rational scale2) : n_(n), scale2_(std::move(scale2)) {
  if (n < 1) throw std::invalid_argument("Code: dimension must be positive");
  if (sgn(scale2_) <= 0) throw std::invalid_argument("Code: scale must be positive");
}

Code Code::from_doubles(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) throw std::invalid_argument("Code::from_doubles: empty point list");
  Code code(static_cast<int>(points.front().size()), Rational(1));
  code.exact_ = false;
  for (const auto& p : points) {
    std::vector<Rational> c;
    for (int i = 0; i < p.size(); ++i) c.push_back(rational_from_double(p[i]));
    code.add(std::move(c));
  }
  return code;
}

Eigen::VectorXd Code::point(int i) const {
  const double s = std::sqrt(to_double(scale2_));
  Eigen::VectorXd p(n_);
  for (int a = 0; a < n_; ++a) p[a] = to_double(coords_.at(i)[a]) / s;
  return p;
}

void Code::add(std::vector<Rational> coords) {
  if (static_cast<int>(coords.size()) != n_) throw std::invalid_argument("Code::add: wrong dimension");
  coords_.push_back(std::move(coords));
}

void Code::set_pole(std::vector<Rational> coords) {
  if (static_cast<int>(coords.size()) != n_) {
    throw std::invalid_argument("Code::set_pole: wrong dimension");
  }
  pole_ = std::move(coords);
}

const std::vector<Rational>& Code::pole() const {
  if (!pole_) throw std::logic_error("Code: no pole set");
  return *pole_;
}

Eigen::VectorXd Code::pole_point() const {
  const double s = std::sqrt(to_double(scale2_));
  Eigen::VectorXd p(n_);
  for (int a = 0; a < n_; ++a) p[a] = to_double(pole()[a]) / s;
  return p;
}

Rational Code::dot(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
  Rational s(0);
  for (int i = 0; i < n_; ++i) s += a[i] * b[i];
  return s / scale2_;
}

Rational Code::inner(int i, int j) const { return dot(coords_.at(i), coords_.at(j)); }
Rational Code::pole_inner(int i) const { return dot(pole(), coords_.at(i)); }

void Code::validate() const {
  auto unit = [&](const Rational& norm2) {
    return exact_ ? norm2 == 1 : std::abs(to_double(norm2) - 1.0) <= 1e-12;
  };
  std::set<std::vector<Rational>, std::less<>> seen;
  for (int i = 0; i < size(); ++i) {
    if (!unit(squared_norm(i))) {
      throw std::domain_error("Code: point " + std::to_string(i) + " is not unit");
    }
    const auto key = coords_[i];
    if (!seen.insert(key).second) {
      throw std::domain_error("Code: duplicate point " + std::to_string(i));
    }
  }
  if (pole_ && !unit(dot(*pole_, *pole_))) throw std::domain_error("Code: pole is not unit");
}

Code e8_roots() {
  Code code(8, Rational(2));
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      for (int sa : {1, -1})
        for (int sb : {1, -1}) {
          std::vector<Rational> c(8, Rational(0));
          c[a] = sa;
          c[b] = sb;
          code.add(std::move(c));
        }
  for (int mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) % 2 != 0) continue;
    std::vector<Rational> c(8);
    for (int i = 0; i < 8; ++i) c[i] = (mask >> i & 1) ? Rational(-1, 2) : Rational(1, 2);
    code.add(std::move(c));
  }
  return code;
}

Code dn_roots(int n) {
  if (n < 3) throw std::invalid_argument("dn_roots: n must be >= 3");
  Code code(n, Rational(2));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int sa : {1, -1})
        for (int sb : {1, -1}) {
          std::vector<Rational> c(n, Rational(0));
          c[a] = sa;
          c[b] = sb;
          code.add(std::move(c));
        }
  return code;
}

std::vector<Rational> root_pole(int n) {
  if (n < 2) throw std::invalid_argument("root_pole: n must be >= 2");
  std::vector<Rational> e(n, Rational(0));
  e[0] = e[1] = 1;
  return e;
}

Code cap_subcode(const Code& code, const std::vector<Rational>& pole, const Rational& cos_phi) {
  Code out(code.n(), code.scale2());
  out.exact_ = code.exact_;
  out.set_pole(pole);
  for (int i = 0; i < code.size(); ++i) {
    Rational s(0);
    for (int a = 0; a < code.n(); ++a) s += pole[a] * code.coords(i)[a];
    if (s / code.scale2() >= cos_phi) out.add(code.coords(i));
  }
  return out;
}

Rational DistanceDistribution::diagonal_sum() const {
  Rational s(0);
  for (const auto& [k, y] : entries)
    if (k.t == 1) s += y;
  return s;
}

Rational DistanceDistribution::total_sum() const {
  Rational s(0);
  for (const auto& [k, y] : entries) s += y;
  return s;
}

DistanceDistribution distance_distribution(const Code& code) {
  if (!code.has_pole()) throw std::invalid_argument("distance_distribution: code has no pole");
  DistanceDistribution dist;
  dist.cardinality = code.size();
  if (code.size() == 0) return dist;
  std::vector<Rational> e;
  for (int i = 0; i < code.size(); ++i) e.push_back(code.pole_inner(i));
  std::map<DistanceKey, long> counts;
  for (int i = 0; i < code.size(); ++i)
    for (int j = 0; j < code.size(); ++j) {
      const bool ordered = e[i] <= e[j];
      ++counts[DistanceKey{ordered ? e[i] : e[j], ordered ? e[j] : e[i], code.inner(i, j)}];
    }
  for (const auto& [k, c] : counts) {
    Rational y(c, code.size());
    y.canonicalize();
    dist.entries.emplace_back(k, y);
  }
  return dist;
}

Rational max_inner_product(const Code& code) {
  if (code.size() < 2) throw std::invalid_argument("min_angle: code needs at least two points");
  Rational best = code.inner(0, 1);
  for (int i = 0; i < code.size(); ++i)
    for (int j = i + 1; j < code.size(); ++j) best = std::max(best, code.inner(i, j));
  return best;
}

double min_angle(const Code& code) {
  return std::acos(std::clamp(to_double(max_inner_product(code)), -1.0, 1.0));
}

double primal_min_eigenvalue(const DistanceDistribution& dist, int n, int d) {
  const ZonalFamily family(n, d, Normalization::kNormalized);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= d; ++k) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(family.block_size(k), family.block_size(k));
    for (const auto& [key, y] : dist.entries) {
      s += to_double(y) *
           family.evaluate_sym(k, to_double(key.u), to_double(key.v), to_double(key.t));
    }
    worst = std::min(worst, min_eigenvalue(s));
  }
  return worst;
}

namespace {

nlohmann::json rational_vector(const std::vector<Rational>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

}  // namespace

nlohmann::json to_json(const Code& code) {
  nlohmann::json points = nlohmann::json::array();
  for (int i = 0; i < code.size(); ++i) points.push_back(rational_vector(code.coords(i)));
  nlohmann::json out{{"n", code.n()},
                     {"size", code.size()},
                     {"scale2", to_string(code.scale2())},
                     {"points", points}};
  if (code.has_pole()) out["pole"] = rational_vector(code.pole());
  if (code.size() >= 2) {
    out["max_inner_product"] = to_string(max_inner_product(code));
    out["min_angle"] = min_angle(code);
  }
  return out;
}

nlohmann::json to_json(const DistanceDistribution& dist) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [k, y] : dist.entries) {
    entries.push_back({{"u", to_string(k.u)},
                       {"v", to_string(k.v)},
                       {"t", to_string(k.t)},
                       {"y", to_string(y)}});
  }
  return {{"cardinality", dist.cardinality},
          {"diagonal_sum", to_string(dist.diagonal_sum())},
          {"total_sum", to_string(dist.total_sum())},
          {"entries", entries}};
}

std::string to_text(const Code& code) {
  std::string out;
  char buf[32];
  for (int i = 0; i < code.size(); ++i) {
    const Eigen::VectorXd p = code.point(i);
    for (int a = 0; a < p.size(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", p[a]);
      if (a) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace capsdp

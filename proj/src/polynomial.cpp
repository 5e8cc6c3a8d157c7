#include "capsdp/polynomial.hpp"

#include <cctype>
#include <sstream>

namespace capsdp {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (s.find_first_of(".eE") != std::string::npos) {
    // Decimal literal: read it exactly as a base-10 fraction.
    std::string mantissa = s;
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string::npos) {
      mantissa = s.substr(0, epos);
      exponent = std::stol(s.substr(epos + 1));
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa = mantissa.substr(1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
      if (c == '.') {
        if (seen_point) throw std::invalid_argument("bad decimal: " + s);
        seen_point = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (seen_point) ++frac_digits;
      } else {
        throw std::invalid_argument("bad decimal: " + s);
      }
    }
    if (digits.empty()) throw std::invalid_argument("bad decimal: " + s);
    BigInt num(digits, 10);
    long shift = exponent - frac_digits;
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }

  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::domain_error("rational with zero denominator");
  r.canonicalize();
  return r;
}

std::vector<UniPoly> gegenbauer_sequence(int n, int kmax) {
  if (n < 2) throw std::invalid_argument("gegenbauer: n must be >= 2");
  if (kmax < 0) throw std::invalid_argument("gegenbauer: k must be >= 0");
  std::vector<UniPoly> p;
  p.reserve(kmax + 1);
  p.push_back(UniPoly::constant(1));
  if (kmax >= 1) p.push_back(UniPoly::monomial(1));
  const UniPoly t = UniPoly::monomial(1);
  // (k + n - 2) P_{k+1} = (2k + n - 2) t P_k - k P_{k-1}
  for (int k = 1; k < kmax; ++k) {
    UniPoly next = (t * p[k]).scaled(Rational(2 * k + n - 2)) - p[k - 1].scaled(Rational(k));
    p.push_back(next.scaled(Rational(1, k + n - 2)));
  }
  return p;
}

UniPoly gegenbauer(int n, int k) {
  if (k < 0) throw std::invalid_argument("gegenbauer: k must be >= 0");
  return gegenbauer_sequence(n, k).back();
}

template <class T>
static TriPolyT<T> swap_impl(const TriPolyT<T>& f) {
  TriPolyT<T> out;
  for (const auto& [e, c] : f.terms()) out.add_term(e.swapped(), c);
  return out;
}

TriPoly swap_uv(const TriPoly& f) { return swap_impl(f); }
TriPolyF swap_uv(const TriPolyF& f) { return swap_impl(f); }

bool is_uv_symmetric(const TriPoly& f) {
  for (const auto& [e, c] : f.terms()) {
    if (e.u != e.v && f.coefficient(e.swapped()) != c) return false;
  }
  return true;
}

UniPoly restrict_diagonal(const TriPoly& f) {
  int deg = 0;
  for (const auto& [e, c] : f.terms()) deg = std::max(deg, e.u + e.v);
  std::vector<Rational> cs(deg + 1, Rational(0));
  for (const auto& [e, c] : f.terms()) cs[e.u + e.v] += c;
  return UniPoly(std::move(cs));
}

namespace {

// row k: coefficients of x^k in T_0, ..., T_k
std::vector<std::vector<Rational>> power_to_chebyshev(int kmax) {
  std::vector<std::vector<Rational>> rows(kmax + 1);
  rows[0] = {Rational(1)};
  for (int k = 1; k <= kmax; ++k) {
    std::vector<Rational> next(k + 1, Rational(0));
    const auto& prev = rows[k - 1];
    // x T_j = (T_{j+1} + T_{|j-1|}) / 2, x T_0 = T_1
    for (int j = 0; j < static_cast<int>(prev.size()); ++j) {
      if (sgn(prev[j]) == 0) continue;
      if (j == 0) {
        next[1] += prev[0];
      } else {
        next[j + 1] += prev[j] / 2;
        next[j - 1] += prev[j] / 2;
      }
    }
    rows[k] = std::move(next);
  }
  return rows;
}

}  // namespace

TriPoly to_chebyshev(const TriPoly& f) {
  const int deg = std::max({f.deg_u(), f.deg_v(), f.deg_t(), 0});
  const auto table = power_to_chebyshev(deg);
  TriPoly out;
  for (const auto& [e, c] : f.terms()) {
    const auto& tu = table[e.u];
    const auto& tv = table[e.v];
    const auto& tt = table[e.t];
    for (int a = 0; a <= e.u; ++a) {
      if (sgn(tu[a]) == 0) continue;
      for (int b = 0; b <= e.v; ++b) {
        if (sgn(tv[b]) == 0) continue;
        for (int k = 0; k <= e.t; ++k) {
          if (sgn(tt[k]) == 0) continue;
          out.add_term({a, b, k}, c * tu[a] * tv[b] * tt[k]);
        }
      }
    }
  }
  return out;
}

TriPoly from_chebyshev(const TriPoly& f) {
  const int deg = std::max({f.deg_u(), f.deg_v(), f.deg_t(), 0});
  const auto cheb = gegenbauer_sequence(2, deg);
  TriPoly out;
  for (const auto& [e, c] : f.terms()) {
    TriPoly term = TriPoly::from_uni(cheb[e.u], 0) * TriPoly::from_uni(cheb[e.v], 1) *
                   TriPoly::from_uni(cheb[e.t], 2);
    out += term.scaled(c);
  }
  return out;
}

TriPoly chebyshev_product(const TriPoly& f, const TriPoly& g) {
  TriPoly out;
  for (const auto& [e1, c1] : f.terms()) {
    for (const auto& [e2, c2] : g.terms()) {
      const int su[2] = {e1.u + e2.u, std::abs(e1.u - e2.u)};
      const int sv[2] = {e1.v + e2.v, std::abs(e1.v - e2.v)};
      const int st[2] = {e1.t + e2.t, std::abs(e1.t - e2.t)};
      const Rational c = c1 * c2 / 8;
      for (int a : su)
        for (int b : sv)
          for (int k : st) out.add_term({a, b, k}, c);
    }
  }
  return out;
}

TriPolyF to_float(const TriPoly& f) {
  TriPolyF out;
  for (const auto& [e, c] : f.terms()) out.add_term(e, c.get_d());
  return out;
}

UniPolyF to_float(const UniPoly& f) {
  std::vector<double> cs;
  for (const auto& c : f.coefficients()) cs.push_back(c.get_d());
  return UniPolyF(std::move(cs));
}

TriPoly compose(const UniPoly& p, const TriPoly& q) {
  TriPoly acc;
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * q;
    acc.add_term({0, 0, 0}, p.coefficient(i));
  }
  return acc;
}

nlohmann::json to_json(const TriPoly& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) {
    terms.push_back({e.u, e.v, e.t, to_string(c)});
  }
  return {{"terms", terms}};
}

nlohmann::json to_json(const TriPolyF& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({e.u, e.v, e.t, c});
  return {{"terms", terms}};
}

TriPoly tripoly_from_json(const nlohmann::json& j) {
  TriPoly out;
  for (const auto& term : j.at("terms")) {
    if (!term.is_array() || term.size() != 4) {
      throw std::invalid_argument("polynomial term must be [a, b, c, coef]");
    }
    Exponent3 e{term[0].get<int>(), term[1].get<int>(), term[2].get<int>()};
    if (e.u < 0 || e.v < 0 || e.t < 0) throw std::invalid_argument("negative exponent");
    const auto& coef = term[3];
    out.add_term(e, coef.is_string() ? parse_rational(coef.get<std::string>())
                                     : rational_from_double(coef.get<double>()));
  }
  return out;
}

std::string to_string(const TriPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.get_str() << ")";
    if (e.u) os << "*u^" << e.u;
    if (e.v) os << "*v^" << e.v;
    if (e.t) os << "*t^" << e.t;
  }
  return os.str();
}

}  // namespace capsdp

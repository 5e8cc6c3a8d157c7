#include "capsdp/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <regex>
#include <sstream>

#include "CLI11.hpp"

#include "capsdp/certify.hpp"
#include "capsdp/codes.hpp"
#include "capsdp/conic.hpp"
#include "capsdp/harness.hpp"
#include "capsdp/sdpa.hpp"

namespace capsdp {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rational cosines of rational multiples of pi (Niven).
std::optional<Rational> exact_cos_of_pi_fraction(long num, long den) {
  // Reduce num/den modulo 2 and look at the angle in sixths.
  const long period = 2 * den;
  long r = ((num % period) + period) % period;
  if ((6 * r) % den != 0) return std::nullopt;
  switch ((6 * r) / den) {
    case 0: return Rational(1);
    case 2: case 10: return Rational(1, 2);
    case 3: case 9: return Rational(0);
    case 4: case 8: return Rational(-1, 2);
    case 6: return Rational(-1);
    default: return std::nullopt;
  }
}

}  // namespace

ParsedAngle parse_angle(const std::string& text) {
  ParsedAngle out;
  out.text = text;
  static const std::regex pi_form(R"(^\s*(\d*)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    const long num = m[1].length() ? std::stol(m[1]) : 1;
    const long den = m[2].length() ? std::stol(m[2]) : 1;
    if (den == 0) throw ConfigError("angle '" + text + "' has a zero denominator");
    if (auto c = exact_cos_of_pi_fraction(num, den)) {
      out.cos = *c;
      out.exact = true;
    } else {
      out.cos = rational_from_double(std::cos(std::numbers::pi * num / den));
    }
    return out;
  }
  double radians = 0.0;
  try {
    std::size_t used = 0;
    radians = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse angle '" + text + "'");
  }
  if (radians == 0.0) {
    out.cos = 1;
    out.exact = true;
  } else {
    out.cos = rational_from_double(std::cos(radians));
  }
  return out;
}

std::string angle_name(const Rational& cos) {
  if (cos == 1) return "0";
  if (cos == Rational(1, 2)) return "π/3";
  if (cos == 0) return "π/2";
  if (cos == Rational(-1, 2)) return "2π/3";
  if (cos == -1) return "π";
  std::ostringstream s;
  s << "acos(" << std::setprecision(17) << to_double(cos) << ")";
  return s.str();
}

std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config,
                                      std::ostream& out, std::ostream& err) {
  CLI::App app{"Semidefinite programming bounds for codes in spherical caps"};
  app.require_subcommand(1);

  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--n", config.n, "ambient dimension");
    sub->add_option("--theta", config.theta, "minimal angle: pi/3, pi/2, or radians");
    sub->add_option("--phi", config.phi, "cap angular radius: pi/3, pi/2, or radians");
    sub->add_option("--cos-theta", config.cos_theta, "exact cosine of theta, e.g. 1/2");
    sub->add_option("--cos-phi", config.cos_phi, "exact cosine of phi");
  };
  auto add_relaxation = [&](CLI::App* sub) {
    add_cap(sub);
    sub->add_option("--d", config.d, "zonal degree");
    sub->add_option("--N", config.N, "SOS multiplier degree");
    sub->add_option("--basis", config.basis, "identity basis")
        ->check(CLI::IsMember({"monomial", "chebyshev"}));
    sub->add_option("--gram-rule", config.gram_rule, "SOS multiplier degree rule")
        ->check(CLI::IsMember({"match-zonal", "multiplier-cap"}));
    sub->add_flag("--symmetry,!--no-symmetry", config.symmetry,
                  "fold mirror monomials of the Delta identity");
  };

  auto* bound = app.add_subcommand("bound", "solve and certify the cap relaxation");
  add_relaxation(bound);
  bound->add_option("--tolerance", config.tolerance, "solver tolerance");
  bound->add_option("--max-iterations", config.max_iterations, "solver iteration cap");
  bound->add_option("--backend", config.backend, "registered solver backend");
  bound->add_option("--format", config.format, "output format")
      ->check(CLI::IsMember({"json", "table"}));
  bound->add_option("--output", config.output, "write the certificate JSON here");
  bound->add_flag("--summary", config.summary, "print the (n, theta, phi, d, N, bound) row");
  bound->add_flag("--verbose", config.verbose, "echo the solver log");

  auto* analytic = app.add_subcommand("analytic", "closed-form bounds: 1 linear, 2 quadratic certificate");
  add_cap(analytic);
  analytic->add_option("--example", config.example, "1 or 2")->check(CLI::IsMember({1, 2}));
  analytic->add_option("--format", config.format, "output format")
      ->check(CLI::IsMember({"json", "table"}));

  auto* verify = app.add_subcommand("verify", "numerical verification suites");
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  verify->add_option("--suite", config.suite, "suite name")->check(CLI::IsMember(suites));
  verify->add_option("--seed", config.seed, "random seed");
  verify->add_option("--output", config.output, "write the JSON report here");

  auto* codes = app.add_subcommand("codes", "reference codes and cap subcodes");
  codes->add_option("--family", config.family, "e8, d3, d4 or d5")
      ->check(CLI::IsMember({"e8", "d3", "d4", "d5"}));
  codes->add_option("--cap", config.cap, "cap angular radius");
  codes->add_option("--format", config.format, "output format")
      ->check(CLI::IsMember({"json", "table"}));
  codes->add_option("--output", config.output, "write the cap points, one per line");

  auto* exp = app.add_subcommand("export", "write the relaxation in SDPA sparse format");
  add_relaxation(exp);
  exp->add_option("--output", config.output, "SDPA file")->required();

  for (auto* sub : {bound, analytic, verify, codes, exp}) {
    sub->add_flag("!--no-timestamp", config.timestamp, "omit the timestamp field");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitConfig;
  }
  for (auto* sub : app.get_subcommands()) config.command = sub->get_name();
  if (config.command == "export") config.format = "sdpa";
  return std::nullopt;
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Rational cap_cosine(const std::optional<std::string>& exact, const std::string& angle,
                    const char* name, std::vector<std::string>& notes) {
  if (exact) {
    try {
      return parse_rational(*exact);
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse --cos-") + name + " '" + *exact + "'");
    }
  }
  const ParsedAngle a = parse_angle(angle);
  if (!a.exact) {
    std::ostringstream s;
    s << name << " = " << angle << " has an irrational cosine; using the double "
      << std::setprecision(17) << to_double(a.cos);
    notes.push_back(s.str());
  }
  return a.cos;
}

CapParams cap_params(const RunConfig& c, std::vector<std::string>& notes) {
  CapParams p;
  p.n = c.n;
  p.cos_theta = cap_cosine(c.cos_theta, c.theta, "theta", notes);
  p.cos_phi = cap_cosine(c.cos_phi, c.phi, "phi", notes);
  p.d = c.d;
  p.N = c.N;
  p.symmetry_reduction = c.symmetry;
  p.basis = c.basis == "chebyshev" ? PolyBasis::kChebyshev : PolyBasis::kMonomial;
  p.gram_rule = c.gram_rule == "multiplier-cap" ? GramDegreeRule::kMultiplierCap
                                                : GramDegreeRule::kMatchZonal;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void stamp(nlohmann::json& j, const RunConfig& c) {
  if (c.timestamp) j["timestamp"] = now_utc();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f << text;
}

// Best lower bound and previously known upper bound for B(n).
struct KissingRow {
  int n;
  int lower;
  int known_upper;
};
constexpr KissingRow kKissingRows[] = {{3, 9, 9},   {4, 18, 18},   {5, 32, 35},
                                       {6, 51, 64}, {7, 93, 110},  {8, 183, 186}};

std::string ceil2(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << std::ceil(x * 100.0 - 1e-9) / 100.0;
  return s.str();
}

std::string table_row(const BoundCertificate& cert) {
  const CapParams& p = cert.params;
  const std::string sdp = cert.verified ? "≤" + ceil2(cert.bound) : "failed";
  if (p.cos_theta == Rational(1, 2) && p.cos_phi == 0) {
    for (const auto& row : kKissingRows) {
      if (row.n != p.n) continue;
      return std::to_string(p.n) + " | " + std::to_string(row.lower) + " | " +
             std::to_string(row.known_upper) + " | " + sdp;
    }
    return std::to_string(p.n) + " |  |  | " + sdp;
  }
  return summary_row(cert);
}

int run_bound(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> notes;
  const CapParams params = cap_params(c, notes);
  for (const auto& n : notes) err << "warning: " << n << "\n";
  SolverConfig solver;
  solver.tolerance = c.tolerance;
  solver.max_iterations = c.max_iterations;
  solver.backend = c.backend;
  solver.verbose = c.verbose;
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Timer timer;
  const CapRelaxation relax = build_cap_sdp(params);
  const double t_build = timer.seconds();
  const SdpSolution sol = solve(relax.problem, solver);
  const double t_solve = timer.seconds() - t_build;
  const BoundCertificate cert = verify_certificate(sol, relax);
  const double t_total = timer.seconds();

  nlohmann::json j = to_json(cert);
  j["solver"] = to_json(sol);
  j["notes"] = notes;
  j["row"] = table_row(cert);
  stamp(j, c);
  if (c.timestamp) {
    j["timing"] = {{"build_seconds", t_build}, {"solve_seconds", t_solve}, {"total_seconds", t_total}};
  }
  if (!c.output.empty()) write_file(c.output, j.dump(1) + "\n");

  if (c.format == "json") {
    out << j.dump(1) << "\n";
  } else {
    if (c.summary) out << summary_row(cert) << "\n";
    out << table_row(cert) << "\n";
  }
  if (!sol.usable()) {
    err << "solver failure: " << status_name(sol.status) << " (" << sol.message << ")\n";
    return kExitSolver;
  }
  if (!cert.verified) {
    err << "certification failure: " << cert.failure << "\n";
    return kExitCertification;
  }
  return 0;
}

std::string format_value(const std::optional<Rational>& exact, double approx) {
  if (exact) return exact->get_den() == 1 ? exact->get_num().get_str() : to_string(*exact);
  std::ostringstream s;
  s << std::setprecision(12) << approx;
  return s.str();
}

int run_analytic(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> notes;
  if (c.n < 2) throw ConfigError("n must be >= 2");
  const Rational ct = cap_cosine(c.cos_theta, c.theta, "theta", notes);
  const Rational cp = cap_cosine(c.cos_phi, c.phi, "phi", notes);
  const bool exact = notes.empty();
  for (const auto& n : notes) err << "warning: " << n << "\n";
  std::optional<Rational> value;
  nlohmann::json j{{"example", c.example},
                   {"n", c.n},
                   {"exact", exact},
                   {"cos_theta", to_string(ct)},
                   {"cos_phi", to_string(cp)}};
  if (c.example == 1) {
    value = bound_example1(ct, cp);
  } else {
    const auto e = example2(c.n, ct, cp);
    if (e) {
      value = e->bound;
      j["a"] = to_string(e->a);
      j["f0_max"] = to_string(e->f0_max);
    }
    if (auto lp = lp_bound_quadratic(c.n, ct)) j["lp_bound"] = to_string(*lp);
  }
  if (!value) {
    err << "inapplicable: closed-form bound " << c.example << " does not apply to these parameters\n";
    return kExitConfig;
  }
  j["bound"] = to_string(*value);
  j["bound_double"] = to_double(*value);
  stamp(j, c);
  if (c.format == "json") {
    out << j.dump(1) << "\n";
  } else {
    out << format_value(exact ? value : std::nullopt, to_double(*value)) << "\n";
  }
  return 0;
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  std::vector<std::string> names = c.suite == "all" ? suite_names() : std::vector{c.suite};
  nlohmann::json j{{"suites", nlohmann::json::array()}};
  bool passed = true;
  for (const auto& name : names) {
    nlohmann::json r = run_suite(name, c.seed);
    passed = passed && r["passed"].get<bool>();
    j["suites"].push_back(std::move(r));
  }
  j["passed"] = passed;
  stamp(j, c);
  if (!c.output.empty()) write_file(c.output, j.dump(1) + "\n");
  out << j.dump(1) << "\n";
  return passed ? 0 : kExitCertification;
}

int run_codes(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Code code = c.family == "e8" ? e8_roots() : dn_roots(c.family[1] - '0');
  std::vector<std::string> notes;
  const Rational cos_cap = cap_cosine(std::nullopt, c.cap, "cap", notes);
  for (const auto& n : notes) err << "warning: " << n << "\n";
  const Code cap = cap_subcode(code, root_pole(code.n()), cos_cap);
  const DistanceDistribution dist = distance_distribution(cap);
  const Rational max_ip = max_inner_product(code);
  if (!c.output.empty()) write_file(c.output, to_text(cap));
  if (c.format == "json") {
    nlohmann::json j{{"family", c.family},
                     {"size", code.size()},
                     {"cap", c.cap},
                     {"cap_size", cap.size()},
                     {"max_inner_product", to_string(max_ip)},
                     {"min_angle", min_angle(code)},
                     {"cap_code", to_json(cap)},
                     {"distribution", to_json(dist)}};
    stamp(j, c);
    out << j.dump(1) << "\n";
  } else {
    out << code.size() << " roots, " << cap.size() << " in cap, min angle "
        << angle_name(max_ip) << "\n";
  }
  return 0;
}

int run_export(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> notes;
  const CapParams params = cap_params(c, notes);
  for (const auto& n : notes) err << "warning: " << n << "\n";
  const CapRelaxation relax = build_cap_sdp(params);
  write_file(c.output, export_sdpa(relax.problem));
  out << "wrote " << c.output << ": " << relax.problem.constraints.size() << " constraints, "
      << relax.problem.blocks.size() << " blocks\n";
  return 0;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "bound") return run_bound(config, out, err);
    if (config.command == "analytic") return run_analytic(config, out, err);
    if (config.command == "verify") return run_verify(config, out, err);
    if (config.command == "codes") return run_codes(config, out, err);
    if (config.command == "export") return run_export(config, out, err);
    throw ConfigError("unknown command '" + config.command + "'");
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace capsdp

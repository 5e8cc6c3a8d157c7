#include "capsdp/sdpa.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace capsdp {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using EntryKey = std::tuple<int, int, int, int>;  // matno, blkno, i, j (1-based)

}  // namespace

std::string export_sdpa(const SdpProblem& problem) {
  problem.validate();
  const int m = static_cast<int>(problem.constraints.size());
  const int nfree = static_cast<int>(problem.scalar_vars.size());
  const int nblocks = static_cast<int>(problem.blocks.size()) + (nfree > 0 ? 1 : 0);
  const int lp_block = static_cast<int>(problem.blocks.size()) + 1;

  std::map<EntryKey, Rational> entries;
  auto add_form = [&](int matno, const LinearForm& form, const Rational& sign) {
    for (const auto& t : form.matrix_terms) entries[{matno, t.block + 1, t.row + 1, t.col + 1}] += sign * t.coef;
    for (const auto& t : form.scalar_terms) {
      entries[{matno, lp_block, 2 * t.var + 1, 2 * t.var + 1}] += sign * t.coef;
      entries[{matno, lp_block, 2 * t.var + 2, 2 * t.var + 2}] -= sign * t.coef;
    }
  };
  add_form(0, problem.objective, Rational(-1));
  for (int i = 0; i < m; ++i) add_form(i + 1, problem.constraints[i].lhs, Rational(1));

  std::ostringstream os;
  os << "* capsdp sdpa\n";
  for (std::size_t b = 0; b < problem.blocks.size(); ++b) os << "* block " << b + 1 << " " << problem.blocks[b].label << "\n";
  for (int v = 0; v < nfree; ++v) os << "* free " << v + 1 << " " << problem.scalar_vars[v] << "\n";
  if (sgn(problem.objective_offset) != 0) os << "* offset " << to_string(problem.objective_offset) << "\n";
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    if (c.group.empty() && c.tag.empty()) continue;
    os << "* row " << i + 1 << " " << (c.group.empty() ? "-" : c.group) << " " << c.tag << "\n";
  }
  os << m << "\n" << nblocks << "\n";
  for (std::size_t b = 0; b < problem.blocks.size(); ++b) os << (b ? " " : "") << problem.blocks[b].size;
  if (nfree > 0) os << (problem.blocks.empty() ? "" : " ") << -2 * nfree;
  os << "\n";
  for (int i = 0; i < m; ++i) os << (i ? " " : "") << format_double(to_double(problem.constraints[i].rhs));
  os << "\n";
  for (const auto& [k, v] : entries) {
    if (sgn(v) == 0) continue;
    const auto [mat, blk, i, j] = k;
    os << mat << " " << blk << " " << i << " " << j << " " << format_double(to_double(v)) << "\n";
  }
  return os.str();
}

SdpProblem import_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<int, std::string> labels;
  std::map<int, std::string> free_names;
  std::map<int, std::pair<std::string, std::string>> row_meta;
  Rational offset;
  std::string body;
  bool in_header = true;
  while (std::getline(in, line)) {
    if (in_header && !line.empty() && (line[0] == '*' || line[0] == '"')) {
      std::istringstream ls(line.substr(1));
      std::string kind;
      ls >> kind;
      if (kind == "block") {
        int k;
        std::string label;
        ls >> k >> label;
        labels[k] = label;
      } else if (kind == "free") {
        int k;
        std::string name;
        ls >> k >> name;
        free_names[k] = name;
      } else if (kind == "offset") {
        std::string r;
        ls >> r;
        offset = parse_rational(r);
      } else if (kind == "row") {
        int k;
        std::string group, tag;
        ls >> k >> group;
        std::getline(ls, tag);
        if (!tag.empty() && tag[0] == ' ') tag.erase(0, 1);
        row_meta[k] = {group == "-" ? "" : group, tag};
      }
      continue;
    }
    in_header = false;
    for (char& ch : line)
      if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
    body += line + "\n";
  }

  std::istringstream tok(body);
  auto next_int = [&]() {
    long v;
    if (!(tok >> v)) throw std::invalid_argument("import_sdpa: truncated header");
    return static_cast<int>(v);
  };
  auto next_value = [&]() {
    std::string s;
    if (!(tok >> s)) throw std::invalid_argument("import_sdpa: truncated data");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::invalid_argument("import_sdpa: bad number " + s);
    return rational_from_double(v);
  };
  const int m = next_int();
  const int nblocks = next_int();
  if (m < 0 || nblocks < 0) throw std::invalid_argument("import_sdpa: negative counts");
  std::vector<int> sizes(nblocks);
  for (auto& s : sizes) s = next_int();

  SdpProblem problem;
  problem.objective_offset = offset;
  const int nfree = static_cast<int>(free_names.size());
  // SDPA block index -> (our block index per diagonal position or PSD block)
  std::vector<int> psd_index(nblocks, -1);
  std::vector<std::vector<int>> lp_index(nblocks);
  int free_block = -1;
  for (int b = 0; b < nblocks; ++b) {
    if (sizes[b] > 0) {
      psd_index[b] = static_cast<int>(problem.blocks.size());
      auto it = labels.find(b + 1);
      problem.blocks.push_back({it != labels.end() ? it->second : "B" + std::to_string(b + 1), sizes[b]});
    } else if (sizes[b] < 0) {
      if (b == nblocks - 1 && nfree > 0 && -sizes[b] == 2 * nfree) {
        free_block = b;
        continue;
      }
      for (int j = 0; j < -sizes[b]; ++j) {
        lp_index[b].push_back(static_cast<int>(problem.blocks.size()));
        problem.blocks.push_back({"L" + std::to_string(b + 1) + "_" + std::to_string(j + 1), 1});
      }
    } else {
      throw std::invalid_argument("import_sdpa: zero block size");
    }
  }
  for (int v = 1; v <= nfree; ++v) problem.scalar_vars.push_back(free_names.count(v) ? free_names[v] : "x" + std::to_string(v));

  problem.constraints.resize(m);
  for (int i = 0; i < m; ++i) {
    problem.constraints[i].rhs = next_value();
    auto it = row_meta.find(i + 1);
    if (it != row_meta.end()) {
      problem.constraints[i].group = it->second.first;
      problem.constraints[i].tag = it->second.second;
    }
  }
  int mat;
  while (tok >> mat) {
    const int blk = next_int(), i = next_int(), j = next_int();
    Rational v = next_value();
    if (mat < 0 || mat > m || blk < 1 || blk > nblocks) throw std::invalid_argument("import_sdpa: entry out of range");
    LinearForm& form = mat == 0 ? problem.objective : problem.constraints[mat - 1].lhs;
    if (mat == 0) v = -v;
    const int b = blk - 1;
    if (b == free_block) {
      if (i != j) throw std::invalid_argument("import_sdpa: off-diagonal LP entry");
      if (i % 2 == 1) form.scalar_terms.push_back({(i - 1) / 2, v});
      continue;
    }
    if (sizes[b] < 0) {
      if (i != j || i < 1 || i > -sizes[b]) throw std::invalid_argument("import_sdpa: bad LP entry");
      form.matrix_terms.push_back({lp_index[b][i - 1], 0, 0, v});
      continue;
    }
    const int r = std::min(i, j) - 1, c = std::max(i, j) - 1;
    form.matrix_terms.push_back({psd_index[b], r, c, v});
  }
  problem.validate();
  return problem;
}

}  // namespace capsdp

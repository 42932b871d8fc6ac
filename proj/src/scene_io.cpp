#include "tmscat/scene_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

namespace tmscat {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct LineParser {
  int line;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, what); }

  double number(std::string_view s) const {
    auto v = to_double(s);
    if (!v) fail("not a number: '" + std::string(trim(s)) + "'");
    return *v;
  }

  std::vector<double> numbers(std::string_view s) const {
    std::vector<double> out;
    while (true) {
      const auto c = s.find(',');
      out.push_back(number(s.substr(0, c)));
      if (c == std::string_view::npos) break;
      s.remove_prefix(c + 1);
    }
    return out;
  }

  Medium medium(const std::vector<std::string_view>& tok) const {
    if (tok.size() != 3) fail("expected three material values: eps_r mu_r sigma");
    return {number(tok[0]), number(tok[1]), number(tok[2])};
  }

  // "shape(args) eps mu sigma [pec]"
  Layer layer(std::string_view body, bool allow_pec) const {
    const auto open = body.find('('), close = body.find(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
      fail("expected shape(...)");
    const std::string_view kind = trim(body.substr(0, open));
    const auto args = numbers(body.substr(open + 1, close - open - 1));
    Layer l;
    if (kind == "circle") {
      if (args.size() != 3) fail("circle takes cx, cy, r");
      l.boundary = Circle{{args[0], args[1]}, args[2]};
    } else if (kind == "polygon") {
      if (args.size() < 6 || args.size() % 2) fail("polygon takes at least three x, y pairs");
      Polygon p;
      for (std::size_t i = 0; i < args.size(); i += 2) p.vertices.emplace_back(args[i], args[i + 1]);
      l.boundary = p;
    } else if (kind == "sector") {
      if (args.size() != 5) fail("sector takes cx, cy, r, start_deg, end_deg");
      l.boundary = Sector{{args[0], args[1]}, args[2], args[3] * kPi / 180.0, args[4] * kPi / 180.0};
    } else {
      fail("unknown shape '" + std::string(kind) + "'");
    }
    auto tok = split_ws(body.substr(close + 1));
    if (!tok.empty() && tok.back() == "pec") {
      if (!allow_pec) fail("pec is not allowed here");
      l.pec = true;
      tok.pop_back();
    }
    l.medium = medium(tok);
    return l;
  }
};

}  // namespace

Scene parse_scene(std::istream& in) {
  Scene s;
  bool have_bg = false, in_group = false, have_ext = false;
  std::vector<Group> groups;
  Group loose;  // layers outside group blocks
  std::string raw;
  int lineno = 0;
  auto expect_index = [](const LineParser& lp, std::string_view idx, std::size_t next) {
    const double v = lp.number(idx);
    if (v != double(next)) lp.fail("expected index " + std::to_string(next));
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const LineParser lp{lineno};
    std::string_view line = raw;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "group") {
      if (in_group) lp.fail("nested group");
      if (!loose.layers.empty()) lp.fail("mixing loose layers with group blocks");
      in_group = true;
      groups.emplace_back();
      continue;
    }
    if (line == "end") {
      if (!in_group) lp.fail("'end' without 'group'");
      if (groups.back().layers.empty()) lp.fail("empty group");
      in_group = false;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) lp.fail("expected 'key: value'");
    const auto key = split_ws(line.substr(0, colon));
    const std::string_view body = trim(line.substr(colon + 1));
    if (key.empty()) lp.fail("missing key");
    if (key[0] == "background" && key.size() == 1) {
      if (have_bg) lp.fail("duplicate background");
      s.background = lp.medium(split_ws(body));
      have_bg = true;
    } else if (key[0] == "extension" && key.size() == 1) {
      if (have_ext) lp.fail("duplicate extension");
      s.extension = lp.number(body);
      if (s.extension < 0.0) lp.fail("extension must be non-negative");
      have_ext = true;
    } else if (key[0] == "layer" && key.size() == 2) {
      if (!s.shells.empty()) lp.fail("layer after shell");
      Group& g = in_group ? groups.back() : loose;
      if (!in_group && !groups.empty()) lp.fail("mixing loose layers with group blocks");
      expect_index(lp, key[1], g.layers.size() + 1);
      g.layers.push_back(lp.layer(body, true));
    } else if (key[0] == "shell" && key.size() == 2) {
      if (in_group) lp.fail("shell inside group");
      expect_index(lp, key[1], s.shells.size() + 1);
      s.shells.push_back(lp.layer(body, false));
    } else {
      lp.fail("unknown key '" + std::string(trim(line.substr(0, colon))) + "'");
    }
  }
  if (in_group) throw ParseError(lineno, "unterminated group");
  if (!have_bg) throw ParseError(lineno, "missing background");
  if (!loose.layers.empty()) groups.push_back(loose);
  if (groups.empty()) throw ParseError(lineno, "no layers");
  s.groups = std::move(groups);
  validate(s);
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open " + path);
  return parse_scene(f);
}

void write_rcs_csv(std::ostream& os, const RcsCurve& c) {
  os << "phi_deg,sigma_m,sigma_db\n";
  char buf[128];
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double deg = c.phi[i] * 180.0 / kPi;
    const double sg = c.sigma[i];
    std::string db;
    if (sg > 0.0) {
      char t[48];
      auto r = std::to_chars(t, t + sizeof t, to_db(sg), std::chars_format::scientific, 8);
      db.assign(t, r.ptr);
    } else {
      db = "-inf";
    }
    char a[48], m[48];
    auto ra = std::to_chars(a, a + sizeof a, deg, std::chars_format::fixed, 6);
    auto rm = std::to_chars(m, m + sizeof m, sg, std::chars_format::scientific, 8);
    std::snprintf(buf, sizeof buf, "%.*s,%.*s,%s\n", int(ra.ptr - a), a, int(rm.ptr - m), m, db.c_str());
    os << buf;
  }
}

RcsCurve read_rcs_csv(std::istream& in) {
  RcsCurve c;
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || trim(line) != "phi_deg,sigma_m,sigma_db") throw ParseError(1, "bad CSV header");
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const LineParser lp{lineno};
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) lp.fail("expected three columns");
    c.phi.push_back(lp.number(std::string_view(line).substr(0, c1)) * kPi / 180.0);
    c.sigma.push_back(lp.number(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)));
  }
  return c;
}

}  // namespace tmscat

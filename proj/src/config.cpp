#include "jumpfrac/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"

namespace jumpfrac {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("not an unsigned integer: '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) { return static_cast<std::size_t>(parse_u64(s)); }

int parse_int(const std::string& s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ValidationError("not an integer: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_double(trim(item)));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Member>
Field number(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](RunConfig& c, const std::string& v) { member(c) = parse_double(v); },
          [member](const RunConfig& c) { return format_double(member(c)); }};
}

template <typename Member>
Field count(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](RunConfig& c, const std::string& v) { member(c) = parse_count(v); },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

template <typename Member>
Field integer(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](RunConfig& c, const std::string& v) { member(c) = parse_int(v); },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

template <typename Member>
Field list(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](RunConfig& c, const std::string& v) { member(c) = parse_list(v); },
          [member](const RunConfig& c) { return join(member(c)); }};
}

template <typename Member>
Field text(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](RunConfig& c, const std::string& v) { member(c) = v; },
          [member](const RunConfig& c) { return member(c); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"model", "sigma",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "ZERO") c.model.sigma.reset();
                   else c.model.sigma = Expr::parse(v);
                 },
                 [](const RunConfig& c) { return c.model.sigma ? c.model.sigma->to_string() : std::string("ZERO"); }});
    f.push_back({"model", "b", [](RunConfig& c, const std::string& v) { c.model.b = Expr::parse(v); },
                 [](const RunConfig& c) { return c.model.b.to_string(); }});
    f.push_back({"model", "jump",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "builtin") c.model.jump_kind = JumpKind::Builtin;
                   else if (v == "custom") c.model.jump_kind = JumpKind::Custom;
                   else throw ValidationError("expected builtin or custom");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.model.jump_kind == JumpKind::Builtin ? "builtin" : "custom");
                 }});
    f.push_back({"model", "beta_tilde", [](RunConfig& c, const std::string& v) { c.model.beta_tilde = Expr::parse(v); },
                 [](const RunConfig& c) { return c.model.beta_tilde.to_string(); }});
    f.push_back({"model", "g", [](RunConfig& c, const std::string& v) { c.model.g = Expr::parse(v, true); },
                 [](const RunConfig& c) { return c.model.g.to_string(); }});
    f.push_back(number("model", "beta_band_lo", [](auto& c) -> auto& { return c.model.beta_band.lo; }));
    f.push_back(number("model", "beta_band_hi", [](auto& c) -> auto& { return c.model.beta_band.hi; }));
    f.push_back({"model", "hypothesis",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "none") c.model.hypothesis = Hypothesis::None;
                   else if (v == "case_a") c.model.hypothesis = Hypothesis::CaseA;
                   else if (v == "case_b") c.model.hypothesis = Hypothesis::CaseB;
                   else throw ValidationError("expected none, case_a or case_b");
                 },
                 [](const RunConfig& c) {
                   switch (c.model.hypothesis) {
                     case Hypothesis::CaseA: return std::string("case_a");
                     case Hypothesis::CaseB: return std::string("case_b");
                     default: return std::string("none");
                   }
                 }});
    f.push_back(number("model", "x0", [](auto& c) -> auto& { return c.model.x0; }));

    f.push_back(number("sim", "dt", [](auto& c) -> auto& { return c.sim.dt; }));
    f.push_back(number("sim", "z_min", [](auto& c) -> auto& { return c.sim.z_min; }));
    f.push_back(number("sim", "horizon", [](auto& c) -> auto& { return c.sim.horizon; }));
    f.push_back(integer("sim", "quad_n", [](auto& c) -> auto& { return c.sim.quad_n; }));

    f.push_back({"run", "seed", [](RunConfig& c, const std::string& v) { c.master_seed = parse_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.master_seed); }});
    f.push_back(text("run", "output_dir", [](auto& c) -> auto& { return c.output_dir; }));

    f.push_back(count("simulate", "n_paths", [](auto& c) -> auto& { return c.simulate_paths; }));

    f.push_back(count("holder", "n_times", [](auto& c) -> auto& { return c.holder.n_times; }));
    f.push_back(integer("holder", "j_lo", [](auto& c) -> auto& { return c.holder.j_lo; }));
    f.push_back(integer("holder", "j_hi", [](auto& c) -> auto& { return c.holder.j_hi; }));
    f.push_back(number("holder", "h_cap", [](auto& c) -> auto& { return c.holder.h_cap; }));
    f.push_back(number("holder", "delta_max", [](auto& c) -> auto& { return c.holder.delta_max; }));

    f.push_back(text("spectrum", "mode", [](auto& c) -> auto& { return c.spectrum.mode; }));
    f.push_back(text("spectrum", "kind", [](auto& c) -> auto& { return c.spectrum.kind; }));
    f.push_back(number("spectrum", "h_min", [](auto& c) -> auto& { return c.spectrum.h_min; }));
    f.push_back(number("spectrum", "h_max", [](auto& c) -> auto& { return c.spectrum.h_max; }));
    f.push_back(count("spectrum", "n_h", [](auto& c) -> auto& { return c.spectrum.n_h; }));
    f.push_back(number("spectrum", "t", [](auto& c) -> auto& { return c.spectrum.t; }));
    f.push_back(number("spectrum", "region_lo", [](auto& c) -> auto& { return c.spectrum.region_lo; }));
    f.push_back(number("spectrum", "region_hi", [](auto& c) -> auto& { return c.spectrum.region_hi; }));
    f.push_back(number("spectrum", "bin_width", [](auto& c) -> auto& { return c.spectrum.bin_width; }));
    f.push_back(integer("spectrum", "j_max", [](auto& c) -> auto& { return c.spectrum.j_max; }));

    f.push_back(number("tangent", "t0", [](auto& c) -> auto& { return c.tangent.t0; }));
    f.push_back(list("tangent", "alpha", [](auto& c) -> auto& { return c.tangent.alpha; }));
    f.push_back(count("tangent", "n_paths", [](auto& c) -> auto& { return c.tangent.n_paths; }));

    f.push_back(number("band-stats", "delta", [](auto& c) -> auto& { return c.band.delta; }));
    f.push_back(number("band-stats", "eps", [](auto& c) -> auto& { return c.band.eps; }));
    f.push_back(list("band-stats", "m", [](auto& c) -> auto& { return c.band.m; }));
    f.push_back(count("band-stats", "n_paths", [](auto& c) -> auto& { return c.band.n_paths; }));

    f.push_back(number("check-admissible", "x_lo", [](auto& c) -> auto& { return c.admissible.x_lo; }));
    f.push_back(number("check-admissible", "x_hi", [](auto& c) -> auto& { return c.admissible.x_hi; }));
    f.push_back(count("check-admissible", "n_x", [](auto& c) -> auto& { return c.admissible.n_x; }));

    f.push_back({"generator-check", "f",
                 [](RunConfig& c, const std::string& v) { c.generator.f = Expr::parse(v).to_string(); },
                 [](const RunConfig& c) { return c.generator.f; }});
    f.push_back(list("generator-check", "t", [](auto& c) -> auto& { return c.generator.t; }));
    f.push_back(count("generator-check", "n_paths", [](auto& c) -> auto& { return c.generator.n_paths; }));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

bool known_section(const std::string& s) {
  for (const auto& f : fields())
    if (f.section == s) return true;
  return false;
}

void apply(RunConfig& cfg, const Field& f, const std::string& value, int line) {
  const std::string name = f.section + "." + f.key;
  try {
    f.set(cfg, value);
  } catch (const ParseError& e) {
    throw ParseError(name + ": " + e.what(), line);
  } catch (const ValidationError& e) {
    throw ValidationError(name + ": " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void validate_config(const RunConfig& c) {
  c.model.validate();
  c.sim.validate();
  require(c.simulate_paths >= 1, "simulate.n_paths must be >= 1");
  require(c.holder.n_times >= 1, "holder.n_times must be >= 1");
  require(c.holder.j_lo >= 0 && c.holder.j_lo < c.holder.j_hi, "holder.j_lo/j_hi must satisfy 0 <= j_lo < j_hi");
  require(c.holder.h_cap > 0.0, "holder.h_cap must be positive");
  require(c.holder.delta_max > 1.0, "holder.delta_max must exceed 1");
  require(c.spectrum.mode == "theory" || c.spectrum.mode == "empirical", "spectrum.mode must be theory or empirical");
  require(c.spectrum.kind == "pointwise" || c.spectrum.kind == "local", "spectrum.kind must be pointwise or local");
  require(c.spectrum.h_min >= 0.0 && c.spectrum.h_max > c.spectrum.h_min, "spectrum.h_min/h_max must satisfy 0 <= h_min < h_max");
  require(c.spectrum.n_h >= 2, "spectrum.n_h must be >= 2");
  require(c.spectrum.t >= 0.0 && c.spectrum.t <= c.sim.horizon, "spectrum.t must lie in [0, horizon]");
  require(c.spectrum.region_lo >= 0.0 && c.spectrum.region_lo < c.spectrum.region_hi &&
              c.spectrum.region_hi <= c.sim.horizon,
          "spectrum.region_lo/region_hi must be an interval inside [0, horizon]");
  require(c.spectrum.bin_width > 0.0, "spectrum.bin_width must be positive");
  require(c.spectrum.j_max >= 6 && c.spectrum.j_max <= 24, "spectrum.j_max must lie in [6, 24]");
  require(c.tangent.t0 >= 0.0, "tangent.t0 must be >= 0");
  for (double a : c.tangent.alpha) require(a > 0.0, "tangent.alpha entries must be positive");
  require(c.tangent.n_paths >= 1, "tangent.n_paths must be >= 1");
  require(c.band.delta > 1.0, "band-stats.delta must exceed 1");
  require(c.band.eps > 0.0, "band-stats.eps must be positive");
  for (double m : c.band.m) require(m >= 6.0 && m <= 20.0 && m == std::floor(m), "band-stats.m entries must be integers in [6, 20]");
  require(c.band.n_paths >= 1, "band-stats.n_paths must be >= 1");
  require(c.admissible.x_lo < c.admissible.x_hi, "check-admissible.x_lo must be below x_hi");
  require(c.admissible.n_x >= 2, "check-admissible.n_x must be >= 2");
  for (double t : c.generator.t) require(t > 0.0, "generator-check.t entries must be positive");
  require(c.generator.n_paths >= 1, "generator-check.n_paths must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("malformed section header", line);
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!known_section(section)) throw ParseError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    if (section.empty()) throw ParseError("key outside any section", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string name = section + "." + key;
    const Field* f = find_field(section, key);
    if (!f) throw ValidationError("unknown key '" + name + "' (line " + std::to_string(line) + ")");
    if (!seen.insert(name).second) throw ValidationError("duplicate key '" + name + "' (line " + std::to_string(line) + ")");
    apply(cfg, *f, value, line);
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

void set_config_option(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ValidationError("option must be section.key: '" + dotted_key + "'");
  const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!f) throw ValidationError("unknown key '" + dotted_key + "'");
  RunConfig next = cfg;
  apply(next, *f, value, 0);
  validate_config(next);
  cfg = std::move(next);
}

bool operator==(const RunConfig& a, const RunConfig& b) { return serialize_config(a) == serialize_config(b); }

}  // namespace jumpfrac

// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace emloc {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Verify: return "verify";
    case ExperimentKind::Resonances: return "resonances";
    case ExperimentKind::Localize: return "localize";
    case ExperimentKind::Runge: return "runge";
    case ExperimentKind::RungeLocalize: return "runge-localize";
  }
  return "?";
}

MaterialField ExperimentConfig::eps_field() const {
  MaterialField f;
  f.default_tensor = default_eps;
  for (const auto& r : material_regions) f.regions.emplace_back(r.box, r.eps);
  return f;
}

MaterialField ExperimentConfig::mu_field() const {
  MaterialField f;
  f.default_tensor = default_mu;
  for (const auto& r : material_regions) f.regions.emplace_back(r.box, r.mu);
  return f;
}

namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

using SectionData = std::map<std::string, RawValue>;

struct RawConfig {
  std::map<std::string, SectionData> sections;
  std::map<std::string, int> section_lines;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"kind", "output", "seed", "vtk"}},
      {"mesh", {"min", "max", "divisions"}},
      {"materials", {"default_eps", "default_mu"}},
      {"material_region", {"min", "max", "eps", "mu"}},  // numbered sections
      {"solver",
       {"k", "residual_tol", "sv_threshold", "resonance_margin",
        "resonance_kmax"}},
      {"regions",
       {"gamma_min", "gamma_max", "m_min", "m_max", "d_min", "d_max", "o_min",
        "o_max"}},
      {"localize", {"length", "delta"}},
      {"runge",
       {"alpha_first", "alpha_last", "alpha_count", "target", "direction",
        "polarization"}},
      {"verify", {"case", "divisions", "max_ratio"}},
  };
  return s;
}

// material_region_<n> sections share one key schema.
std::string schema_name(const std::string& section) {
  if (section.rfind("material_region_", 0) == 0) return "material_region";
  return section;
}

bool known_section(const std::string& section) {
  const std::string name = schema_name(section);
  if (name == "material_region") {
    const std::string suffix = section.substr(16);
    if (suffix.empty()) return false;
    for (char c : suffix)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  }
  return schema().count(name) > 0;
}

class Extractor {
 public:
  Extractor(RawConfig raw, std::vector<ParseError>& errors)
      : raw_(std::move(raw)), errors_(errors) {}

  bool has(const std::string& section, const std::string& key) const {
    auto s = raw_.sections.find(section);
    return s != raw_.sections.end() && s->second.count(key) > 0;
  }

  const RawValue* get(const std::string& section, const std::string& key) {
    auto s = raw_.sections.find(section);
    if (s == raw_.sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    used_.insert(section + "." + key);
    return &k->second;
  }

  void fail(int line, const std::string& message) {
    errors_.push_back({line, message});
  }

  std::optional<std::vector<double>> numbers(const RawValue& v,
                                             const std::string& what) {
    std::string body = v.text;
    const bool is_array = !body.empty() && body.front() == '[';
    if (is_array) {
      if (body.back() != ']') {
        fail(v.line, what + ": unterminated array");
        return std::nullopt;
      }
      body = body.substr(1, body.size() - 2);
    }
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) {
        fail(v.line, what + ": empty array element");
        return std::nullopt;
      }
      try {
        size_t pos = 0;
        const double d = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument(item);
        if (!std::isfinite(d)) {
          fail(v.line, what + ": non-finite number '" + item + "'");
          return std::nullopt;
        }
        out.push_back(d);
      } catch (const std::exception&) {
        fail(v.line, what + ": not a number '" + item + "'");
        return std::nullopt;
      }
    }
    if (out.empty()) {
      fail(v.line, what + ": no value");
      return std::nullopt;
    }
    return out;
  }

  void read_double(const std::string& sec, const std::string& key, double& dst) {
    const RawValue* v = get(sec, key);
    if (!v) return;
    auto nums = numbers(*v, sec + "." + key);
    if (!nums) return;
    if (nums->size() != 1) {
      fail(v->line, sec + "." + key + ": expected a single number");
      return;
    }
    dst = (*nums)[0];
  }

  void read_int(const std::string& sec, const std::string& key, int& dst) {
    double d = dst;
    const RawValue* v = get(sec, key);
    if (!v) return;
    auto nums = numbers(*v, sec + "." + key);
    if (!nums || nums->size() != 1) {
      if (nums) fail(v->line, sec + "." + key + ": expected a single integer");
      return;
    }
    d = (*nums)[0];
    if (d != std::floor(d)) {
      fail(v->line, sec + "." + key + ": expected an integer");
      return;
    }
    dst = static_cast<int>(d);
  }

  void read_vec3(const std::string& sec, const std::string& key, Vec3& dst) {
    const RawValue* v = get(sec, key);
    if (!v) return;
    auto nums = numbers(*v, sec + "." + key);
    if (!nums) return;
    if (nums->size() != 3) {
      fail(v->line, sec + "." + key + ": expected 3 numbers");
      return;
    }
    dst = Vec3((*nums)[0], (*nums)[1], (*nums)[2]);
  }

  void read_int3(const std::string& sec, const std::string& key,
                 std::array<int, 3>& dst) {
    const RawValue* v = get(sec, key);
    if (!v) return;
    auto nums = numbers(*v, sec + "." + key);
    if (!nums) return;
    if (nums->size() != 3) {
      fail(v->line, sec + "." + key + ": expected 3 integers");
      return;
    }
    for (int i = 0; i < 3; ++i) {
      if ((*nums)[i] != std::floor((*nums)[i])) {
        fail(v->line, sec + "." + key + ": expected integers");
        return;
      }
      dst[i] = static_cast<int>((*nums)[i]);
    }
  }

  // Scalar, diagonal, or full row-major 3x3 tensor.
  void read_tensor(const std::string& sec, const std::string& key, Mat3& dst) {
    const RawValue* v = get(sec, key);
    if (!v) return;
    auto nums = numbers(*v, sec + "." + key);
    if (!nums) return;
    if (nums->size() == 1) {
      dst = (*nums)[0] * Mat3::Identity();
    } else if (nums->size() == 3) {
      dst = Vec3((*nums)[0], (*nums)[1], (*nums)[2]).asDiagonal();
    } else if (nums->size() == 9) {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) dst(r, c) = (*nums)[3 * r + c];
    } else {
      fail(v->line, sec + "." + key + ": expected 1, 3 or 9 numbers");
    }
  }

  void read_word(const std::string& sec, const std::string& key,
                 std::string& dst, const std::set<std::string>& allowed) {
    const RawValue* v = get(sec, key);
    if (!v) return;
    if (allowed.count(v->text) == 0) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
      fail(v->line, sec + "." + key + ": '" + v->text + "' is not one of {" +
                        opts + "}");
      return;
    }
    dst = v->text;
  }

  void read_bool(const std::string& sec, const std::string& key, bool& dst) {
    const RawValue* v = get(sec, key);
    if (!v) return;
    if (v->text == "true") dst = true;
    else if (v->text == "false") dst = false;
    else fail(v->line, sec + "." + key + ": expected true or false");
  }

  int line_of(const std::string& sec, const std::string& key) const {
    auto s = raw_.sections.find(sec);
    if (s == raw_.sections.end()) return 0;
    auto k = s->second.find(key);
    return k == s->second.end() ? 0 : k->second.line;
  }

  const RawConfig& raw() const { return raw_; }

 private:
  RawConfig raw_;
  std::vector<ParseError>& errors_;
  std::set<std::string> used_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec3(const Vec3& v) {
  return "[" + fmt(v.x()) + ", " + fmt(v.y()) + ", " + fmt(v.z()) + "]";
}

std::string fmt_tensor(const Mat3& m) {
  if (m.isDiagonal(0.0)) {
    if (m(0, 0) == m(1, 1) && m(1, 1) == m(2, 2)) return "[" + fmt(m(0, 0)) + "]";
    return "[" + fmt(m(0, 0)) + ", " + fmt(m(1, 1)) + ", " + fmt(m(2, 2)) + "]";
  }
  std::string s = "[";
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      s += fmt(m(r, c)) + ((r == 2 && c == 2) ? "" : ", ");
  return s + "]";
}

}  // namespace

ParseResult parse_config(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  ParseResult result;
  auto& errors = result.errors;

  RawConfig raw;
  std::string section;
  std::istringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({lineno, "unterminated section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) {
        errors.push_back({lineno, "unknown section [" + section + "]"});
        section.clear();
        continue;
      }
      auto [it, inserted] = raw.section_lines.try_emplace(section, lineno);
      if (!inserted) {
        errors.push_back({lineno, "duplicate section [" + section +
                                      "], first defined at line " +
                                      std::to_string(it->second)});
        // keep going; later keys merge into the same section
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({lineno, "expected 'key = value'"});
      continue;
    }
    if (section.empty()) {
      errors.push_back({lineno, "key outside of any section"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (schema().at(schema_name(section)).count(key) == 0) {
      errors.push_back({lineno, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    auto [it, inserted] = raw.sections[section].try_emplace(key, RawValue{value, lineno});
    if (!inserted)
      errors.push_back({lineno, "duplicate key '" + key + "' in [" + section +
                                    "], first set at line " +
                                    std::to_string(it->second.line)});
  }

  for (const auto& [path, value] : overrides) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
      errors.push_back({0, "override '" + path + "': expected section.key"});
      continue;
    }
    const std::string sec = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    if (!known_section(sec)) {
      errors.push_back({0, "override: unknown section '" + sec + "'"});
      continue;
    }
    if (schema().at(schema_name(sec)).count(key) == 0) {
      errors.push_back({0, "override: unknown key '" + key + "' in [" + sec + "]"});
      continue;
    }
    raw.sections[sec][key] = RawValue{value, 0};
  }

  Extractor ex(std::move(raw), errors);
  ExperimentConfig cfg;

  std::string kind_word;
  if (ex.has("experiment", "kind")) {
    ex.read_word("experiment", "kind", kind_word,
                 {"verify", "resonances", "localize", "runge", "runge-localize"});
  } else {
    errors.push_back({0, "missing required key experiment.kind"});
  }
  if (kind_word == "verify") cfg.kind = ExperimentKind::Verify;
  else if (kind_word == "resonances") cfg.kind = ExperimentKind::Resonances;
  else if (kind_word == "localize") cfg.kind = ExperimentKind::Localize;
  else if (kind_word == "runge") cfg.kind = ExperimentKind::Runge;
  else if (kind_word == "runge-localize") cfg.kind = ExperimentKind::RungeLocalize;

  if (const RawValue* v = ex.get("experiment", "output")) cfg.output = v->text;
  int seed = static_cast<int>(cfg.seed);
  ex.read_int("experiment", "seed", seed);
  if (seed < 0) ex.fail(ex.line_of("experiment", "seed"), "experiment.seed must be >= 0");
  else cfg.seed = static_cast<unsigned>(seed);
  ex.read_bool("experiment", "vtk", cfg.vtk);

  ex.read_vec3("mesh", "min", cfg.mesh_bounds.lo);
  ex.read_vec3("mesh", "max", cfg.mesh_bounds.hi);
  ex.read_int3("mesh", "divisions", cfg.divisions);
  if (!((cfg.mesh_bounds.hi.array() > cfg.mesh_bounds.lo.array()).all()))
    ex.fail(ex.line_of("mesh", "max"), "mesh: degenerate bounds");
  for (int d : cfg.divisions)
    if (d < 1) ex.fail(ex.line_of("mesh", "divisions"), "mesh.divisions must be >= 1");

  ex.read_tensor("materials", "default_eps", cfg.default_eps);
  ex.read_tensor("materials", "default_mu", cfg.default_mu);
  for (const auto& [sec, data] : ex.raw().sections) {
    if (schema_name(sec) != "material_region") continue;
    MaterialRegionConfig region;
    ex.read_vec3(sec, "min", region.box.lo);
    ex.read_vec3(sec, "max", region.box.hi);
    ex.read_tensor(sec, "eps", region.eps);
    ex.read_tensor(sec, "mu", region.mu);
    cfg.material_regions.push_back(region);
  }

  ex.read_double("solver", "k", cfg.k);
  if (!(cfg.k > 0.0)) ex.fail(ex.line_of("solver", "k"), "solver.k must be > 0");
  ex.read_double("solver", "residual_tol", cfg.solver.residual_tol);
  ex.read_double("solver", "sv_threshold", cfg.solver.sv_threshold);
  ex.read_double("solver", "resonance_margin", cfg.solver.resonance_margin);
  ex.read_double("solver", "resonance_kmax", cfg.resonance_kmax);
  if (!(cfg.resonance_kmax > 0.0))
    ex.fail(ex.line_of("solver", "resonance_kmax"), "solver.resonance_kmax must be > 0");

  ex.read_vec3("regions", "gamma_min", cfg.gamma.lo);
  ex.read_vec3("regions", "gamma_max", cfg.gamma.hi);
  ex.read_vec3("regions", "m_min", cfg.m_box.lo);
  ex.read_vec3("regions", "m_max", cfg.m_box.hi);
  ex.read_vec3("regions", "d_min", cfg.d_box.lo);
  ex.read_vec3("regions", "d_max", cfg.d_box.hi);
  ex.read_vec3("regions", "o_min", cfg.o_box.lo);
  ex.read_vec3("regions", "o_max", cfg.o_box.hi);

  ex.read_int("localize", "length", cfg.localize_length);
  if (cfg.localize_length < 1)
    ex.fail(ex.line_of("localize", "length"), "localize.length must be >= 1");
  ex.read_double("localize", "delta", cfg.localize_delta);

  ex.read_double("runge", "alpha_first", cfg.alpha_first);
  ex.read_double("runge", "alpha_last", cfg.alpha_last);
  ex.read_int("runge", "alpha_count", cfg.alpha_count);
  if (!(cfg.alpha_first > cfg.alpha_last) || !(cfg.alpha_last > 0.0) ||
      cfg.alpha_count < 2)
    ex.fail(ex.line_of("runge", "alpha_first"),
            "runge: need alpha_first > alpha_last > 0 and alpha_count >= 2");
  ex.read_word("runge", "target", cfg.runge_target, {"plane_wave", "in_range"});
  ex.read_vec3("runge", "direction", cfg.pw_direction);
  ex.read_vec3("runge", "polarization", cfg.pw_polarization);

  ex.read_word("verify", "case", cfg.verify_case, {"plane_wave", "anisotropic"});
  if (const RawValue* v = ex.get("verify", "divisions")) {
    auto nums = ex.numbers(*v, "verify.divisions");
    if (nums) {
      cfg.verify_divisions.clear();
      for (double d : *nums) {
        if (d != std::floor(d) || d < 1) {
          ex.fail(v->line, "verify.divisions must be positive integers");
          break;
        }
        cfg.verify_divisions.push_back(static_cast<int>(d));
      }
    }
  }
  ex.read_double("verify", "max_ratio", cfg.verify_max_ratio);

  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "kind = " << to_string(c.kind) << "\n";
  os << "output = " << c.output << "\n";
  os << "seed = " << c.seed << "\n";
  os << "vtk = " << (c.vtk ? "true" : "false") << "\n\n";

  os << "[mesh]\n";
  os << "min = " << fmt_vec3(c.mesh_bounds.lo) << "\n";
  os << "max = " << fmt_vec3(c.mesh_bounds.hi) << "\n";
  os << "divisions = [" << c.divisions[0] << ", " << c.divisions[1] << ", "
     << c.divisions[2] << "]\n\n";

  os << "[materials]\n";
  os << "default_eps = " << fmt_tensor(c.default_eps) << "\n";
  os << "default_mu = " << fmt_tensor(c.default_mu) << "\n\n";

  for (size_t i = 0; i < c.material_regions.size(); ++i) {
    const auto& r = c.material_regions[i];
    os << "[material_region_" << (i + 1) << "]\n";
    os << "min = " << fmt_vec3(r.box.lo) << "\n";
    os << "max = " << fmt_vec3(r.box.hi) << "\n";
    os << "eps = " << fmt_tensor(r.eps) << "\n";
    os << "mu = " << fmt_tensor(r.mu) << "\n\n";
  }

  os << "[solver]\n";
  os << "k = " << fmt(c.k) << "\n";
  os << "residual_tol = " << fmt(c.solver.residual_tol) << "\n";
  os << "sv_threshold = " << fmt(c.solver.sv_threshold) << "\n";
  os << "resonance_margin = " << fmt(c.solver.resonance_margin) << "\n";
  os << "resonance_kmax = " << fmt(c.resonance_kmax) << "\n\n";

  os << "[regions]\n";
  os << "gamma_min = " << fmt_vec3(c.gamma.lo) << "\n";
  os << "gamma_max = " << fmt_vec3(c.gamma.hi) << "\n";
  os << "m_min = " << fmt_vec3(c.m_box.lo) << "\n";
  os << "m_max = " << fmt_vec3(c.m_box.hi) << "\n";
  os << "d_min = " << fmt_vec3(c.d_box.lo) << "\n";
  os << "d_max = " << fmt_vec3(c.d_box.hi) << "\n";
  os << "o_min = " << fmt_vec3(c.o_box.lo) << "\n";
  os << "o_max = " << fmt_vec3(c.o_box.hi) << "\n\n";

  os << "[localize]\n";
  os << "length = " << c.localize_length << "\n";
  os << "delta = " << fmt(c.localize_delta) << "\n\n";

  os << "[runge]\n";
  os << "alpha_first = " << fmt(c.alpha_first) << "\n";
  os << "alpha_last = " << fmt(c.alpha_last) << "\n";
  os << "alpha_count = " << c.alpha_count << "\n";
  os << "target = " << c.runge_target << "\n";
  os << "direction = " << fmt_vec3(c.pw_direction) << "\n";
  os << "polarization = " << fmt_vec3(c.pw_polarization) << "\n\n";

  os << "[verify]\n";
  os << "case = " << c.verify_case << "\n";
  os << "divisions = [";
  for (size_t i = 0; i < c.verify_divisions.size(); ++i)
    os << (i ? ", " : "") << c.verify_divisions[i];
  os << "]\n";
  os << "max_ratio = " << fmt(c.verify_max_ratio) << "\n";
  return os.str();
}

}  // namespace emloc

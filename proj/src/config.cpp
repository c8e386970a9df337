#include "helios/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "helios/diagnostics.hpp"
#include "helios/errors.hpp"
#include "helios/io.hpp"

namespace helios {

namespace fs = std::filesystem;

bool OutputSpec::wants(std::string_view format) const {
  for (const auto& f : formats) {
    if (f == format) return true;
  }
  return false;
}

namespace {

// A scalar or array value from the TOML subset (single-line values only).
struct Value {
  enum class Kind { number, string, boolean, array } kind = Kind::number;
  double number = 0.0;
  bool integral = false;
  std::string text;
  bool flag = false;
  std::vector<Value> items;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class ValueParser {
 public:
  ValueParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  Value parse_all() {
    Value v = parse();
    skip_ws();
    if (pos_ != s_.size() && s_[pos_] != '#') fail(line_, "trailing characters after value");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  Value parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail(line_, "missing value");
    const char c = s_[pos_];
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    return parse_bare();
  }

  Value parse_string() {
    Value v;
    v.kind = Value::Kind::string;
    ++pos_;
    while (true) {
      if (pos_ >= s_.size()) fail(line_, "unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) fail(line_, "unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': v.text += '\n'; break;
          case 't': v.text += '\t'; break;
          case '"': v.text += '"'; break;
          case '\\': v.text += '\\'; break;
          default: fail(line_, std::string("unsupported escape \\") + e);
        }
      } else {
        v.text += c;
      }
    }
    return v;
  }

  Value parse_array() {
    Value v;
    v.kind = Value::Kind::array;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(parse());
      skip_ws();
      if (pos_ >= s_.size()) fail(line_, "unterminated array (arrays must fit on one line)");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') { ++pos_; break; }
        continue;
      }
      if (s_[pos_] == ']') { ++pos_; break; }
      fail(line_, "expected ',' or ']' in array");
    }
    return v;
  }

  Value parse_bare() {
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
           s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '\r') {
      ++pos_;
    }
    const std::string tok(s_.substr(start, pos_ - start));
    Value v;
    if (tok == "true" || tok == "false") {
      v.kind = Value::Kind::boolean;
      v.flag = tok == "true";
      return v;
    }
    char* end = nullptr;
    v.number = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v.number)) {
      fail(line_, "cannot parse value '" + tok + "'");
    }
    v.integral = tok.find_first_of(".eE") == std::string::npos;
    return v;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct Entry {
  Value value;
  std::size_t line;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Table parse_table(std::string_view text) {
  Table table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      if (table.count(section)) fail(line_no, "duplicate section [" + section + "]");
      table[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty() || key.find_first_not_of(
                           "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
                           std::string::npos) {
      fail(line_no, "invalid key '" + key + "'");
    }
    if (section.empty()) fail(line_no, "key '" + key + "' outside of any section");
    auto& sec = table[section];
    if (sec.count(key)) fail(line_no, "duplicate key '" + key + "'");
    sec[key] = {ValueParser(std::string_view(line).substr(eq + 1), line_no).parse_all(), line_no};
  }
  return table;
}

double as_number(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::number) fail(e.line, "'" + key + "' must be a number");
  return e.value.number;
}

std::size_t as_count(const Entry& e, const std::string& key) {
  const double v = as_number(e, key);
  if (!e.value.integral || v < 1 || v > 1e12) fail(e.line, "'" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::string as_string(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::string) fail(e.line, "'" + key + "' must be a string");
  return e.value.text;
}

// Parses cos_<k> / sin_<k>; returns false if the key is not of that shape.
bool fourier_key(const std::string& key, std::string& family, int& k) {
  for (const char* prefix : {"cos_", "sin_"}) {
    const std::string p = prefix;
    if (key.rfind(p, 0) == 0 && key.size() > p.size() &&
        key.find_first_not_of("0123456789", p.size()) == std::string::npos &&
        key.size() - p.size() <= 6) {
      family = p.substr(0, 3);
      k = std::stoi(key.substr(p.size()));
      return true;
    }
  }
  return false;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const fs::path& base_dir) {
  const Table table = parse_table(text);
  RunConfig cfg;
  cfg.base_dir = base_dir;
  auto& ev = cfg.evolution;

  static const std::set<std::string> known_sections = {"grid", "initial", "evolution", "output"};
  for (const auto& [name, sec] : table) {
    if (!known_sections.count(name)) {
      const std::size_t line = sec.empty() ? 0 : sec.begin()->second.line;
      throw ConfigError("config: unknown section [" + name + "]" +
                        (line ? " (first key on line " + std::to_string(line) + ")" : ""));
    }
  }
  auto section = [&](const std::string& name) -> const std::map<std::string, Entry>& {
    static const std::map<std::string, Entry> empty;
    const auto it = table.find(name);
    return it == table.end() ? empty : it->second;
  };

  for (const auto& [key, e] : section("grid")) {
    if (key == "n_points") ev.n_points = as_count(e, key);
    else fail(e.line, "unknown key '" + key + "' in [grid]");
  }

  for (const auto& [key, e] : section("evolution")) {
    if (key == "epsilon") {
      ev.epsilon = as_number(e, key);
    } else if (key == "dt") {
      if (e.value.kind == Value::Kind::string) {
        if (e.value.text != "auto") fail(e.line, "'dt' must be a number or \"auto\"");
        ev.dt.reset();
      } else {
        ev.dt = as_number(e, key);
      }
    } else if (key == "t_end") {
      ev.t_end = as_number(e, key);
    } else if (key == "save_every") {
      ev.save_every = as_count(e, key);
    } else if (key == "cfl_safety") {
      ev.cfl_safety = as_number(e, key);
    } else {
      fail(e.line, "unknown key '" + key + "' in [evolution]");
    }
  }

  auto& init = cfg.initial;
  const auto& isec = section("initial");
  if (const auto it = isec.find("kind"); it != isec.end()) {
    init.kind = as_string(it->second, "kind");
    if (init.kind != "fourier" && init.kind != "file" && init.kind != "corner") {
      fail(it->second.line, "initial kind must be fourier, file or corner");
    }
  }
  for (const auto& [key, e] : isec) {
    std::string family;
    int k = 0;
    if (key == "kind") continue;
    if (key == "mollify_eps") {
      init.mollify_eps = as_number(e, key);
      if (!(*init.mollify_eps > 0.0)) fail(e.line, "'mollify_eps' must be positive");
    } else if (init.kind == "fourier" && fourier_key(key, family, k)) {
      if (family == "sin" && k == 0) fail(e.line, "sin_0 is identically zero");
      (family == "cos" ? init.cos_coeffs : init.sin_coeffs)[k] = as_number(e, key);
    } else if (init.kind == "file" && key == "path") {
      init.path = as_string(e, key);
    } else if (init.kind == "corner" && key == "opening_angle") {
      init.opening_angle = as_number(e, key);
    } else if (init.kind == "corner" && key == "base_radius") {
      init.base_radius = as_number(e, key);
    } else if (init.kind == "corner" && key == "kink_width") {
      init.kink_width = as_number(e, key);
    } else {
      fail(e.line, "unknown key '" + key + "' in [initial] for kind = \"" + init.kind + "\"");
    }
  }
  if (init.kind == "file" && init.path.empty()) {
    throw ConfigError("config: [initial] kind = \"file\" needs a path");
  }
  if (init.kind == "corner") {
    if (!(init.opening_angle > 0.0 && init.opening_angle < std::numbers::pi)) {
      throw ConfigError("config: corner opening_angle must lie in (0, pi)");
    }
    if (!(init.base_radius > 0.0) || !(init.kink_width > 0.0)) {
      throw ConfigError("config: corner base_radius and kink_width must be positive");
    }
    if (!init.mollify_eps) init.mollify_eps = CornerSetup{}.mollify_eps;
  }
  for (const auto& coeffs : {init.cos_coeffs, init.sin_coeffs}) {
    for (const auto& [k, v] : coeffs) {
      if (2 * static_cast<std::size_t>(k) >= ev.n_points) {
        throw ConfigError("config: Fourier mode " + std::to_string(k) +
                          " is not resolved by n_points = " + std::to_string(ev.n_points));
      }
    }
  }

  for (const auto& [key, e] : section("output")) {
    if (key == "directory") {
      cfg.output.directory = as_string(e, key);
    } else if (key == "formats") {
      if (e.value.kind != Value::Kind::array) fail(e.line, "'formats' must be an array of strings");
      cfg.output.formats.clear();
      for (const auto& item : e.value.items) {
        if (item.kind != Value::Kind::string || (item.text != "csv" && item.text != "gnuplot")) {
          fail(e.line, "formats may contain only \"csv\" and \"gnuplot\"");
        }
        cfg.output.formats.push_back(item.text);
      }
    } else {
      fail(e.line, "unknown key '" + key + "' in [output]");
    }
  }

  try {
    ev.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return parse_run_config(s.str(), path.parent_path());
}

Samples initial_eta(const RunConfig& config) {
  const PeriodicGrid grid(config.evolution.n_points);
  const auto& init = config.initial;
  Samples eta;
  if (init.kind == "fourier") {
    eta = grid.sample([&](double a) {
      double v = 0.0;
      for (const auto& [k, c] : init.cos_coeffs) v += c * std::cos(k * a);
      for (const auto& [k, c] : init.sin_coeffs) v += c * std::sin(k * a);
      return v;
    });
  } else if (init.kind == "file") {
    const fs::path p = init.path.is_absolute() ? init.path : config.base_dir / init.path;
    const Samples raw = read_curve_csv(p);
    eta = raw.size() == grid.size() ? raw : resample(PeriodicGrid(raw.size()), raw, grid);
  } else {
    CornerSetup setup;
    setup.base_radius = init.base_radius;
    setup.kink_width = init.kink_width;
    eta = corner_profile(grid, init.opening_angle, setup);
  }
  if (init.mollify_eps) eta = mollify(grid, eta, *init.mollify_eps);
  return eta;
}

}  // namespace helios

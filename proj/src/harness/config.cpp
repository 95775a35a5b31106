#include "fbu/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fbu/errors.hpp"

namespace fbu {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw DomainError("config: bad number for '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw DomainError("config: integer expected for " + key);
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DomainError("config: bad bool for '" + key + "': " + v);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(to_double(key, tok));
  }
  return out;
}

// geometric sequence keys: <base>.start, <base>.factor, <base>.count
std::vector<double> sequence_from(const std::map<std::string, std::string>& kv,
                                  const std::string& base) {
  std::vector<double> out;
  auto it = kv.find(base);
  if (it != kv.end()) out = to_list(base, it->second);
  const auto s = kv.find(base + ".start");
  if (s != kv.end()) {
    const double start = to_double(base + ".start", s->second);
    double factor = 0.5;
    int count = 4;
    if (auto f = kv.find(base + ".factor"); f != kv.end())
      factor = to_double(base + ".factor", f->second);
    if (auto c = kv.find(base + ".count"); c != kv.end())
      count = to_int(base + ".count", c->second);
    double v = start;
    for (int i = 0; i < count; ++i) {
      out.push_back(v);
      v *= factor;
    }
  }
  return out;
}

void apply_section(RunConfig& rc, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "mode") rc.mode = value;
    else if (key == "shape") rc.shape = value;
    else if (key.rfind("shape.", 0) == 0)
      rc.shape_params[key.substr(6)] = to_double(key, value);
    else if (key == "v0" || key.rfind("v0.", 0) == 0) {}      // handled below
    else if (key == "q0" || key.rfind("q0.", 0) == 0) {}
    else if (key == "alpha") rc.alpha_list = to_list(key, value);
    else if (key == "parity") rc.parity = value;
    else if (key == "grid.n") rc.grid_n = to_int(key, value);
    else if (key == "grid.np") rc.grid_np = to_int(key, value);
    else if (key == "grid.nk") rc.grid_nk = to_int(key, value);
    else if (key == "states") rc.states = to_int(key, value);
    else if (key == "tol") rc.tol = to_double(key, value);
    else if (key == "box") rc.box = to_double(key, value);
    else if (key == "oracle.hx") rc.oracle_hx = to_double(key, value);
    else if (key == "oracle.extent_x") rc.oracle_extent_x = to_double(key, value);
    else if (key == "oracle.extent_y") rc.oracle_extent_y = to_double(key, value);
    else if (key == "oracle.levels") rc.oracle_levels = to_int(key, value);
    else if (key == "out") rc.out_dir = value;
    else if (key == "export.wavefunction") rc.export_wavefunction = value;
    else if (key == "deterministic") rc.deterministic = to_bool(key, value);
    else
      throw DomainError("config: unknown key '" + key + "'");
  }
  rc.v0_list = sequence_from(kv, "v0");
  rc.q0_list = sequence_from(kv, "q0");
}

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> kModes = {
      "two-body",          "two-body-sweep",  "three-body-contact",
      "three-body-finite", "three-body-sweep", "verify-proof",
      "oracle-two-body",   "oracle-three-body"};
  if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end())
    throw DomainError("config [" + name + "]: unknown mode '" + mode + "'");
  if (!deterministic)
    throw DomainError("config [" + name + "]: deterministic must stay true");
  if (!(tol > 0.0)) throw DomainError("config [" + name + "]: tol must be > 0");
  if (parity != "even" && parity != "odd")
    throw DomainError("config [" + name + "]: parity must be even or odd");
  const bool needs_shape = mode != "three-body-contact";
  if (needs_shape) {
    if (shape.empty())
      throw DomainError("config [" + name + "]: shape required");
    const auto names = PotentialShape::catalog_names();
    if (std::find(names.begin(), names.end(), shape) == names.end())
      throw DomainError("config [" + name + "]: shape '" + shape +
                        "' not in catalog");
  }
  const bool needs_v0 = mode == "two-body" || mode == "two-body-sweep" ||
                        mode == "three-body-finite" ||
                        mode == "three-body-sweep" ||
                        mode == "oracle-two-body" ||
                        mode == "oracle-three-body";
  if (needs_v0 && v0_list.empty())
    throw DomainError("config [" + name + "]: v0 sequence required");
  if (mode == "verify-proof" && q0_list.empty())
    throw DomainError("config [" + name + "]: q0 sequence required");
  for (double a : alpha_list)
    if (!(a >= 1.0))
      throw DomainError("config [" + name + "]: alpha >= 1 required");
}

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig pc;
  std::map<std::string, std::string> kv;
  std::string section;
  bool in_section = false;

  auto flush = [&] {
    if (!in_section) return;
    RunConfig rc;
    rc.name = section;
    rc.alpha_list = {1.0};
    apply_section(rc, kv);
    rc.validate();
    pc.runs.push_back(std::move(rc));
    kv.clear();
  };

  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw DomainError("config: malformed section header: " + line);
      flush();
      section = trim(line.substr(1, line.size() - 2));
      if (section.rfind("run ", 0) == 0) section = trim(section.substr(4));
      in_section = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config: expected key = value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!in_section) {
      if (key == "schema") {
        pc.schema = to_int(key, value);
        if (pc.schema != 1)
          throw DomainError("config: unsupported schema version " + value);
      } else {
        throw DomainError("config: key '" + key + "' outside a [run] section");
      }
      continue;
    }
    if (kv.count(key))
      throw DomainError("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  flush();
  if (pc.runs.empty()) throw DomainError("config: no [run] sections found");
  return pc;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace fbu

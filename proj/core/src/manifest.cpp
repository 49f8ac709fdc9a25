#include "gradsol/manifest.hpp"

#include <fstream>
#include <sstream>

namespace gradsol {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("manifest: bad numeric value for '" + key + "': " + v);
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("manifest: bad integer value for '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("manifest: bad boolean value for '" + key + "': " + v);
}

}  // namespace

Manifest parse_manifest_text(const std::string& text) {
  Manifest m;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("manifest line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "geometry" && section != "suite" && section != "quadrature" &&
          section != "output")
        throw ConfigError("manifest: unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("manifest line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("manifest line " + std::to_string(lineno) + ": key outside a section");

    if (section == "geometry") {
      if (key == "names") m.geometries = split_list(val);
      else if (key == "rand_seed") m.rand_seed = static_cast<std::uint64_t>(to_long(key, val));
      else if (key == "rand_eps") m.rand_eps = to_double(key, val);
      else if (key == "rand_degree") m.rand_degree = static_cast<int>(to_long(key, val));
      else if (key == "rand_potential") m.rand_potential = to_bool(key, val);
      else throw ConfigError("manifest: unknown key '" + key + "' in [geometry]");
    } else if (section == "suite") {
      if (key == "ids") m.ids = split_list(val);
      else if (key == "samples") m.samples = static_cast<int>(to_long(key, val));
      else if (key == "seed") m.seed = static_cast<std::uint64_t>(to_long(key, val));
      else if (key == "jet_order") m.jet_order = static_cast<int>(to_long(key, val));
      else if (key == "grid_min") m.grid_min = to_double(key, val);
      else if (key == "grid_max") m.grid_max = to_double(key, val);
      else if (key == "grid_step") m.grid_step = to_double(key, val);
      else if (key == "tol_pointwise") m.tol_pointwise = to_double(key, val);
      else if (key == "tol_integral_rel") m.tol_integral_rel = to_double(key, val);
      else if (key == "tol_integral_abs") m.tol_integral_abs = to_double(key, val);
      else throw ConfigError("manifest: unknown key '" + key + "' in [suite]");
    } else if (section == "quadrature") {
      if (key == "q") m.q = static_cast<int>(to_long(key, val));
      else if (key == "levels") {
        m.levels.clear();
        for (const auto& s : split_list(val)) m.levels.push_back(to_double(key, s));
      } else if (key == "tail_tol") m.tail_tol = to_double(key, val);
      else throw ConfigError("manifest: unknown key '" + key + "' in [quadrature]");
    } else if (section == "output") {
      if (key == "path") m.out_path = val;
      else if (key == "threads") m.threads = static_cast<int>(to_long(key, val));
      else throw ConfigError("manifest: unknown key '" + key + "' in [output]");
    }
  }

  if (m.samples < 1) throw ConfigError("manifest: samples must be >= 1");
  if (m.q < 2) throw ConfigError("manifest: q must be >= 2");
  if (m.jet_order < 2 || m.jet_order > 6)
    throw ConfigError("manifest: jet_order must be in [2, 6]");
  if (m.threads < 1) throw ConfigError("manifest: threads must be >= 1");
  if (m.grid_step <= 0.0) throw ConfigError("manifest: grid_step must be positive");
  if (m.geometries.empty()) throw ConfigError("manifest: no geometries selected");
  if (m.ids.empty()) throw ConfigError("manifest: no identity ids selected");
  return m;
}

Manifest parse_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest_text(buf.str());
}

}  // namespace gradsol

#include "eigenlab/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"

namespace eigenlab {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Both encodings are first reduced to {"policy": {...}, "sweeps": {name: {...}}}
// with raw values; interpretation happens once, below.
json read_ini(std::string_view text) {
  json doc = {{"policy", json::object()}, {"sweeps", json::object()}};
  json* section = nullptr;
  std::string section_name;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::string line = trim(raw);
    for (const char* mark : {" #", " ;"}) {
      if (const auto at = line.find(mark); at != std::string::npos) line = trim(line.substr(0, at));
    }
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw UsageError(where + "unterminated section header");
      section_name = trim(line.substr(1, line.size() - 2));
      if (section_name == "policy") {
        section = &doc["policy"];
      } else if (section_name.rfind("sweep.", 0) == 0 && section_name.size() > 6) {
        const std::string name = section_name.substr(6);
        if (doc["sweeps"].contains(name)) throw UsageError(where + "duplicate section [" + section_name + "]");
        doc["sweeps"][name] = json::object();
        section = &doc["sweeps"][name];
      } else {
        throw UsageError(where + "unknown section [" + section_name + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(where + "expected key = value");
    if (!section) throw UsageError(where + "key outside a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(where + "empty key");
    if (section->contains(key)) throw UsageError(where + "duplicate key '" + key + "' in [" + section_name + "]");
    (*section)[key] = trim(line.substr(eq + 1));
  }
  return doc;
}

json read_json(std::string_view text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw UsageError(std::string("invalid JSON config: ") + ex.what());
  }
  if (!in.is_object()) throw UsageError("JSON config must be an object");
  json doc = {{"policy", json::object()}, {"sweeps", json::object()}};
  for (const auto& [key, value] : in.items()) {
    if (key == "policy") {
      if (!value.is_object()) throw UsageError("\"policy\" must be an object");
      doc["policy"] = value;
    } else if (key == "sweeps") {
      if (value.is_object()) {
        doc["sweeps"] = value;
      } else if (value.is_array()) {
        for (const auto& s : value) {
          if (!s.is_object() || !s.contains("name") || !s["name"].is_string()) {
            throw UsageError("each entry of \"sweeps\" needs a string \"name\"");
          }
          const std::string name = s["name"];
          if (doc["sweeps"].contains(name)) throw UsageError("duplicate sweep name '" + name + "'");
          json body = s;
          body.erase("name");
          doc["sweeps"][name] = body;
        }
      } else {
        throw UsageError("\"sweeps\" must be an object or an array");
      }
    } else {
      throw UsageError("unknown top-level key '" + key + "'");
    }
  }
  for (const auto& [name, body] : doc["sweeps"].items()) {
    if (!body.is_object()) throw UsageError("sweep '" + name + "' must be an object");
  }
  return doc;
}

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return trim(v.get<std::string>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_shortest(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw UsageError("key '" + key + "': expected a scalar value");
}

std::vector<std::string> list_text(const json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(scalar_text(x, key));
    return out;
  }
  std::string s = scalar_text(v, key);
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = trim(std::string_view(s).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class Int>
Int parse_int(const std::string& s, const std::string& key) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("key '" + key + "': not an integer: '" + s + "'");
  }
  return v;
}

// Integer lists accept "a..b" ranges.
template <class Int>
std::vector<Int> int_list(const json& v, const std::string& key) {
  std::vector<Int> out;
  for (const auto& item : list_text(v, key)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int<Int>(item, key));
      continue;
    }
    const Int lo = parse_int<Int>(trim(item.substr(0, dots)), key);
    const Int hi = parse_int<Int>(trim(item.substr(dots + 2)), key);
    if (hi < lo || hi - lo > 100000) throw UsageError("key '" + key + "': bad range '" + item + "'");
    for (Int x = lo; x <= hi; ++x) out.push_back(x);
  }
  return out;
}

double number(const json& v, const std::string& key) {
  try {
    return parse_double(scalar_text(v, key));
  } catch (const UsageError&) {
    throw UsageError("key '" + key + "': not a number: '" + scalar_text(v, key) + "'");
  }
}

bool boolean(const json& v, const std::string& key) {
  const std::string s = scalar_text(v, key);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw UsageError("key '" + key + "': expected true or false, got '" + s + "'");
}

GridPolicy interpret_policy(const json& p) {
  GridPolicy g;
  for (const auto& [key, v] : p.items()) {
    const std::string where = "[policy] " + key;
    if (key == "lp_rtol") {
      g.lp_rtol = number(v, where);
    } else if (key == "lp_max_refinements") {
      g.lp_max_refinements = parse_int<int>(scalar_text(v, where), where);
    } else if (key == "tube_rtol") {
      g.tube_rtol = number(v, where);
    } else if (key == "ball_rtol") {
      g.ball_rtol = number(v, where);
    } else if (key == "restriction_rtol") {
      g.restriction_rtol = number(v, where);
    } else if (key == "max_doublings") {
      g.max_doublings = parse_int<int>(scalar_text(v, where), where);
    } else {
      throw UsageError("unknown key '" + key + "' in [policy]");
    }
  }
  for (double t : {g.lp_rtol, g.tube_rtol, g.ball_rtol, g.restriction_rtol}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("[policy] tolerances must be positive");
  }
  if (g.lp_max_refinements < 0 || g.max_doublings < 0) throw UsageError("[policy] refinement counts must be >= 0");
  return g;
}

SweepSpec interpret_sweep(const std::string& name, const json& body, std::uint64_t default_seed) {
  SweepSpec s;
  s.name = name;
  const std::string sec = "[sweep." + name + "] ";
  bool have_degrees = false;
  bool have_seeds = false;
  for (const auto& [key, v] : body.items()) {
    const std::string where = sec + key;
    if (key == "family") {
      s.family = parse_family(scalar_text(v, where));
    } else if (key == "k" || key == "N" || key == "degrees") {
      if (have_degrees) throw UsageError(sec + "give only one of k, N, degrees");
      have_degrees = true;
      s.degrees = int_list<long long>(v, where);
    } else if (key == "seeds") {
      have_seeds = true;
      s.seeds = int_list<std::uint64_t>(v, where);
    } else if (key == "p") {
      for (const auto& t : list_text(v, where)) s.p.push_back(number(t, where));
    } else if (key == "radii") {
      for (const auto& t : list_text(v, where)) s.radii.push_back(RadiusSpec::parse(t));
    } else if (key == "functionals") {
      for (const auto& f : list_text(v, where)) {
        if (f == "kn") {
          s.kn = true;
        } else if (f == "restriction" || f == "restriction_sup") {
          s.restriction = true;
        } else if (f == "nodal" || f == "nodal_length") {
          s.nodal = true;
        } else {
          throw UsageError(where + ": unknown functional '" + f + "' (lp and ball masses come from p and radii)");
        }
      }
    } else if (key == "checks") {
      s.checks = list_text(v, where);
    } else if (key == "density_factor") {
      s.density_factor = number(v, where);
    } else if (key == "nodal_h") {
      const std::string t = scalar_text(v, where);
      s.nodal_h = t == "auto" ? 0.0 : number(t, where);
      if (t != "auto" && !(s.nodal_h > 0.0)) throw UsageError(where + ": must be positive or auto");
    } else if (key == "closed_only") {
      s.closed_only = boolean(v, where);
    } else {
      throw UsageError("unknown key '" + key + "' in [sweep." + name + "]");
    }
  }
  if (!have_degrees) throw UsageError(sec + "missing k (or N)");
  const bool random = s.family == Family::random_harmonic || s.family == Family::torus;
  if (random && !have_seeds) s.seeds = {default_seed};
  if (!random && have_seeds) throw UsageError(sec + "seeds only apply to random_harmonic and torus");
  std::sort(s.checks.begin(), s.checks.end());
  s.checks.erase(std::unique(s.checks.begin(), s.checks.end()), s.checks.end());
  return s;
}

SweepConfig interpret(const json& doc, std::uint64_t default_seed) {
  SweepConfig c;
  c.policy = interpret_policy(doc["policy"]);
  // Sweeps run in name order, so reordering sections changes nothing.
  for (const auto& [name, body] : doc["sweeps"].items()) c.sweeps.push_back(interpret_sweep(name, body, default_seed));
  validate(c);
  return c;
}

}  // namespace

SweepConfig parse_config(std::string_view text, ConfigFormat format, std::uint64_t default_seed) {
  return interpret(format == ConfigFormat::json ? read_json(text) : read_ini(text), default_seed);
}

SweepConfig load_config(const std::string& path, std::uint64_t default_seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) ||
                       (first != std::string::npos && text[first] == '{');
  return parse_config(text, is_json ? ConfigFormat::json : ConfigFormat::ini, default_seed);
}

std::string canonical_config(const SweepConfig& config) {
  json doc;
  const GridPolicy& g = config.policy;
  doc["policy"] = {{"lp_rtol", format_shortest(g.lp_rtol)},
                   {"lp_max_refinements", g.lp_max_refinements},
                   {"tube_rtol", format_shortest(g.tube_rtol)},
                   {"ball_rtol", format_shortest(g.ball_rtol)},
                   {"restriction_rtol", format_shortest(g.restriction_rtol)},
                   {"max_doublings", g.max_doublings}};
  json sweeps = json::array();
  for (const auto& s : config.sweeps) {
    json p = json::array();
    for (double x : s.p) p.push_back(format_shortest(x));
    json radii = json::array();
    for (const auto& r : s.radii) radii.push_back(r.to_string());
    sweeps.push_back({{"name", s.name},
                      {"family", to_string(s.family)},
                      {"degrees", s.degrees},
                      {"seeds", s.seeds},
                      {"p", p},
                      {"radii", radii},
                      {"kn", s.kn},
                      {"restriction", s.restriction},
                      {"nodal", s.nodal},
                      {"closed_only", s.closed_only},
                      {"density_factor", format_shortest(s.density_factor)},
                      {"nodal_h", s.nodal_h > 0.0 ? format_shortest(s.nodal_h) : "auto"},
                      {"checks", s.checks}});
  }
  doc["sweeps"] = sweeps;
  return doc.dump();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string config_hash(const SweepConfig& config) { return sha256_hex(canonical_config(config)); }

}  // namespace eigenlab

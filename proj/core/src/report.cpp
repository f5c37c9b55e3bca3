#include "eigenlab/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"

namespace eigenlab {

using nlohmann::json;

const char* version() { return EIGENLAB_VERSION; }

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"family", "k",     "lambda",         "functional", "parameter",
                                             "value",  "error_estimate", "grid_meta", "sweep"};
  return cols;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_record = [&] {
    rec.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(rec));
    rec.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty()) throw UsageError("CSV: quote inside an unquoted field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      ++i;
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw UsageError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !rec.empty()) end_record();
  return records;
}

long long parse_ll(const std::string& s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) throw UsageError("CSV: bad integer '" + s + "'");
  return v;
}

json fit_points(const std::vector<FitPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.lambda, p.value});
  return a;
}

}  // namespace

std::string csv_text(const SweepTable& table) {
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\r\n";
  for (const auto& r : table) {
    out += csv_field(r.family) + "," + std::to_string(r.k) + "," + format_shortest(r.lambda) + "," +
           csv_field(r.functional) + "," + csv_field(r.parameter) + "," + format_shortest(r.value) + "," +
           format_shortest(r.error_estimate) + "," + csv_field(r.grid_meta) + "," + csv_field(r.sweep) + "\r\n";
  }
  return out;
}

SweepTable parse_csv(std::string_view text) {
  const auto records = csv_records(text);
  if (records.empty()) throw UsageError("CSV is empty");
  if (records[0] != csv_columns()) throw UsageError("CSV header does not match the sweep table columns");
  SweepTable table;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != csv_columns().size()) {
      throw UsageError("CSV row " + std::to_string(i + 1) + " has " + std::to_string(f.size()) + " fields");
    }
    SweepRow r;
    r.family = f[0];
    r.k = parse_ll(f[1]);
    r.lambda = parse_double(f[2]);
    r.functional = f[3];
    r.parameter = f[4];
    r.value = parse_double(f[5]);
    r.error_estimate = parse_double(f[6]);
    r.grid_meta = f[7];
    r.sweep = f[8];
    table.push_back(std::move(r));
  }
  return table;
}

std::string fits_json(const std::vector<ScalingFit>& fits, const std::vector<InequalityCheck>& checks) {
  json jf = json::array();
  for (const auto& f : fits) {
    jf.push_back({{"family", f.family},
                  {"functional", f.functional},
                  {"parameter", f.parameter},
                  {"claim", f.claim},
                  {"exponent", f.exponent},
                  {"stderr", f.stderr_exponent},
                  {"reference", f.reference},
                  {"verdict", to_string(f.verdict)},
                  {"points", fit_points(f.points)},
                  {"residuals", f.residuals}});
  }
  json jc = json::array();
  for (const auto& c : checks) {
    json stats = json::object();
    for (const auto& [k, v] : c.stats) stats[k] = v;
    jc.push_back({{"name", c.name},
                  {"family", c.family},
                  {"parameter", c.parameter},
                  {"direction", c.direction},
                  {"claim", c.claim},
                  {"lambda", c.lambdas},
                  {"lhs", c.lhs},
                  {"rhs", c.rhs},
                  {"constant", c.constant},
                  {"holds", c.holds},
                  {"stats", stats}});
  }
  return json{{"fits", jf}, {"checks", jc}}.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& m) {
  return json{{"tool_version", m.tool_version},
              {"config_hash", m.config_hash},
              {"timestamp", m.timestamp},
              {"command", m.command},
              {"outputs", m.outputs}}
             .dump(2) +
         "\n";
}

std::string manifest_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    long long v = 0;
    const std::string s = env;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace eigenlab

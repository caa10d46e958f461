#include "roadsel/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "roadsel/error.hpp"

namespace roadsel {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& source, const std::string& msg) {
  throw Error(ErrorKind::invalid_data, source + ": " + msg);
}

double number_field(const json& j, const char* key, const std::string& source) {
  const json& v = j.at(key);
  if (!v.is_number()) bad(source, std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(source, std::string("field '") + key + "' must be finite");
  return d;
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number_field(j, key, source);
}

Label parse_label(std::string_view s, const std::string& source) {
  if (s == "safe") return Label::safe;
  if (s == "unsafe") return Label::unsafe;
  if (s == "unlabeled") return Label::unlabeled;
  bad(source, "unknown label '" + std::string(s) + "'");
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_double(const std::string& cell, const std::string& source) {
  if (cell.empty()) bad(source, "empty numeric cell");
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(v)) bad(source, "bad number '" + cell + "'");
  return v;
}

int parse_count(const std::string& cell, const std::string& source) {
  const double v = parse_double(cell, source);
  if (v < 0 || v != std::floor(v)) bad(source, "bad count '" + cell + "'");
  return static_cast<int>(v);
}

}  // namespace

RoadTest parse_test(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(source, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad(source, "expected a JSON object");
  static const std::set<std::string> known = {"test_id", "control_points", "lane_width", "rf",
                                              "oob",     "label",          "sim_time"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) bad(source, "unknown field '" + item.key() + "'");
  }
  for (const char* required : {"test_id", "control_points", "lane_width"}) {
    if (!j.contains(required)) bad(source, std::string("missing field '") + required + "'");
  }

  RoadTest t;
  if (!j["test_id"].is_string() || j["test_id"].get<std::string>().empty()) {
    bad(source, "test_id must be a non-empty string");
  }
  t.test_id = j["test_id"].get<std::string>();
  const json& pts = j["control_points"];
  if (!pts.is_array()) bad(source, "control_points must be an array");
  for (const json& p : pts) {
    if (!p.is_array() || p.size() != 3) bad(source, "control point must be [x, y, z]");
    Point3 q;
    for (int c = 0; c < 3; ++c) {
      if (!p[static_cast<std::size_t>(c)].is_number()) bad(source, "control point coordinates must be numbers");
      q[c] = p[static_cast<std::size_t>(c)].get<double>();
    }
    t.control_points.push_back(q);
  }
  t.lane_width = number_field(j, "lane_width", source);
  t.rf = optional_number(j, "rf", source);
  t.oob = optional_number(j, "oob", source);
  t.sim_time = optional_number(j, "sim_time", source);
  if (j.contains("label") && !j["label"].is_null()) {
    if (!j["label"].is_string()) bad(source, "label must be a string or null");
    t.label = parse_label(j["label"].get<std::string>(), source);
  }
  if ((t.label == Label::unlabeled) != !t.sim_time.has_value()) {
    bad(source, "label and sim_time must be present together");
  }
  return t;
}

std::string serialize_test(const RoadTest& test) {
  json j = json::object();
  j["test_id"] = test.test_id;
  json pts = json::array();
  for (const Point3& p : test.control_points) pts.push_back({p.x(), p.y(), p.z()});
  j["control_points"] = std::move(pts);
  j["lane_width"] = test.lane_width;
  j["rf"] = test.rf ? json(*test.rf) : json(nullptr);
  j["oob"] = test.oob ? json(*test.oob) : json(nullptr);
  j["label"] = test.label == Label::unlabeled ? json(nullptr) : json(to_string(test.label));
  j["sim_time"] = test.sim_time ? json(*test.sim_time) : json(nullptr);
  return j.dump(2) + "\n";
}

RoadTest read_test_file(const fs::path& path) { return parse_test(read_text(path), path.string()); }

void write_test_file(const fs::path& path, const RoadTest& test) {
  write_text_atomic(path, serialize_test(test));
}

std::vector<fs::path> list_test_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::io, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorKind::io, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot replace " + path.string());
  }
}

const std::string& feature_csv_header() {
  static const std::string header = [] {
    std::string h = "test_id";
    for (const std::string& name : feature_names()) h += "," + name;
    return h + ",sim_time,safety";
  }();
  return header;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_feature_csv(std::span<const FeatureVector> rows) {
  std::string out = feature_csv_header() + "\n";
  for (const FeatureVector& fv : rows) {
    out += fv.test_id;
    for (double v : fv.values()) out += "," + format_number(v);
    out += ",";
    if (fv.sim_time) out += format_number(*fv.sim_time);
    out += ",";
    out += to_string(fv.label);
    out += "\n";
  }
  return out;
}

std::vector<FeatureVector> parse_feature_csv(std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  if (lines.empty() || lines.front() != feature_csv_header()) bad(source, "unexpected CSV header");

  std::vector<FeatureVector> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = source + ":" + std::to_string(i + 1);
    const std::vector<std::string> c = split_csv_line(lines[i]);
    if (c.size() != kFeatureCount + 3) bad(where, "expected " + std::to_string(kFeatureCount + 3) + " cells");
    if (c[0].empty()) bad(where, "empty test_id");
    FeatureVector fv;
    fv.test_id = c[0];
    fv.direct_distance = parse_double(c[1], where);
    fv.road_distance = parse_double(c[2], where);
    fv.num_l_turns = parse_count(c[3], where);
    fv.num_r_turns = parse_count(c[4], where);
    fv.num_straights = parse_count(c[5], where);
    double* stats[] = {&fv.total_angle,      &fv.median_angle,  &fv.std_angle,     &fv.max_angle,
                       &fv.min_angle,        &fv.mean_angle,    &fv.median_pivot_off, &fv.std_pivot_off,
                       &fv.max_pivot_off,    &fv.min_pivot_off, &fv.mean_pivot_off};
    for (std::size_t s = 0; s < std::size(stats); ++s) *stats[s] = parse_double(c[6 + s], where);
    if (!c[17].empty()) fv.sim_time = parse_double(c[17], where);
    fv.label = parse_label(c[18], where);
    rows.push_back(std::move(fv));
  }
  return rows;
}

}  // namespace roadsel

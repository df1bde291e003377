#include "comjac/dataset.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "comjac/errors.hpp"

namespace comjac {

namespace {

std::string real_field(const Real& x) { return x.is_nan() ? "nan" : x.to_string(); }

Real parse_real(std::string_view s) {
  if (s == "nan") return Real::nan();
  return Real::from_string(s);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

const char* const kCsvColumns =
    "theta,p1,p2,p3,q1,q2,q3,w1,w2,w3,det,bracket_width,cos_scatter,angle_ok,seed,iterations";

std::string reproducible_timestamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return "";
  char* end = nullptr;
  long long t = std::strtoll(epoch, &end, 10);
  if (end == epoch) return "";
  std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_csv(const Dataset& ds) {
  std::ostringstream os;
  os << "# tool_version: " << ds.meta.tool_version << "\n";
  os << "# precision_bits: " << ds.meta.precision_bits << "\n";
  os << "# seed: " << ds.meta.seed << "\n";
  os << "# grid: " << ds.meta.grid << "\n";
  if (!ds.meta.generated.empty()) os << "# generated: " << ds.meta.generated << "\n";
  os << kCsvColumns << "\n";
  for (const auto& r : ds.rows) {
    os << real_field(r.theta) << ',' << real_field(r.p.x) << ',' << real_field(r.p.y) << ','
       << real_field(r.p.z) << ',' << real_field(r.q.x) << ',' << real_field(r.q.y) << ','
       << real_field(r.q.z) << ',' << real_field(r.w.x) << ',' << real_field(r.w.y) << ','
       << real_field(r.w.z) << ',' << real_field(r.det_value) << ','
       << real_field(r.bracket_width) << ',' << real_field(r.cos_scatter) << ','
       << (r.angle_ok ? 1 : 0) << ',' << r.seed << ',' << r.iterations_used << "\n";
  }
  return os.str();
}

Dataset from_csv(std::string_view text) {
  Dataset ds;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t colon = line.find(':');
      if (colon != std::string_view::npos) {
        std::string_view key = line.substr(1, colon - 1);
        std::string_view val = line.substr(colon + 1);
        while (!key.empty() && key.front() == ' ') key.remove_prefix(1);
        while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
        while (!val.empty() && val.front() == ' ') val.remove_prefix(1);
        if (key == "tool_version") ds.meta.tool_version = std::string(val);
        else if (key == "precision_bits") ds.meta.precision_bits = std::strtol(val.data(), nullptr, 10);
        else if (key == "seed") ds.meta.seed = std::strtoull(val.data(), nullptr, 10);
        else if (key == "grid") ds.meta.grid = std::string(val);
        else if (key == "generated") ds.meta.generated = std::string(val);
      }
      continue;
    }
    if (!header_seen) {  // column header line
      header_seen = true;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 16) {
      throw IoError("csv row has " + std::to_string(f.size()) + " fields, expected 16");
    }
    PrecisionScope scope(ds.meta.precision_bits);
    RootRecord r;
    r.theta = parse_real(f[0]);
    r.p = Vec3{parse_real(f[1]), parse_real(f[2]), parse_real(f[3])};
    r.q = Vec3{parse_real(f[4]), parse_real(f[5]), parse_real(f[6])};
    r.w = Vec3{parse_real(f[7]), parse_real(f[8]), parse_real(f[9])};
    r.det_value = parse_real(f[10]);
    r.bracket_width = parse_real(f[11]);
    r.cos_scatter = parse_real(f[12]);
    r.angle_ok = f[13] == "1";
    r.seed = std::strtoull(std::string(f[14]).c_str(), nullptr, 10);
    r.iterations_used = std::strtol(std::string(f[15]).c_str(), nullptr, 10);
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

namespace {

nlohmann::json vec_json(const Vec3& v) {
  return nlohmann::json::array({real_field(v.x), real_field(v.y), real_field(v.z)});
}

Vec3 vec_from_json(const nlohmann::json& j) {
  return Vec3{parse_real(j.at(0).get<std::string>()), parse_real(j.at(1).get<std::string>()),
              parse_real(j.at(2).get<std::string>())};
}

}  // namespace

std::string to_json_string(const Dataset& ds) {
  nlohmann::json meta{
      {"tool_version", ds.meta.tool_version},
      {"precision_bits", static_cast<long>(ds.meta.precision_bits)},
      {"seed", ds.meta.seed},
      {"grid", ds.meta.grid},
  };
  if (!ds.meta.generated.empty()) meta["generated"] = ds.meta.generated;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : ds.rows) {
    rows.push_back(nlohmann::json{
        {"theta", real_field(r.theta)},
        {"p", vec_json(r.p)},
        {"q", vec_json(r.q)},
        {"w", vec_json(r.w)},
        {"det", real_field(r.det_value)},
        {"bracket_width", real_field(r.bracket_width)},
        {"cos_scatter", real_field(r.cos_scatter)},
        {"angle_ok", r.angle_ok},
        {"seed", r.seed},
        {"iterations", r.iterations_used},
    });
  }
  nlohmann::json doc{{"metadata", meta}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

Dataset from_json_string(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  Dataset ds;
  const auto& meta = doc.at("metadata");
  ds.meta.tool_version = meta.at("tool_version").get<std::string>();
  ds.meta.precision_bits = meta.at("precision_bits").get<long>();
  ds.meta.seed = meta.at("seed").get<std::uint64_t>();
  ds.meta.grid = meta.value("grid", "");
  ds.meta.generated = meta.value("generated", "");
  PrecisionScope scope(ds.meta.precision_bits);
  for (const auto& j : doc.at("rows")) {
    RootRecord r;
    r.theta = parse_real(j.at("theta").get<std::string>());
    r.p = vec_from_json(j.at("p"));
    r.q = vec_from_json(j.at("q"));
    r.w = vec_from_json(j.at("w"));
    r.det_value = parse_real(j.at("det").get<std::string>());
    r.bracket_width = parse_real(j.at("bracket_width").get<std::string>());
    r.cos_scatter = parse_real(j.at("cos_scatter").get<std::string>());
    r.angle_ok = j.at("angle_ok").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.iterations_used = j.at("iterations").get<long>();
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

void atomic_write(const std::string& path, std::string_view content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) {
      throw IoError("cannot open '" + tmp + "' for writing");
    }
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) {
      throw IoError("short write to '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::string why = std::strerror(errno);
    std::remove(tmp.c_str());
    throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + why);
  }
}

void write_dataset(const Dataset& ds, const std::string& path, FileFormat format) {
  atomic_write(path, format == FileFormat::csv ? to_csv(ds) : to_json_string(ds));
}

Dataset read_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return from_json_string(text);
  }
  return from_csv(text);
}

std::vector<AngularRow> export_plotdata(const Dataset& ds, WhichVector which) {
  if (ds.rows.empty()) {
    throw EmptyDataset("no rows to export");
  }
  PrecisionScope scope(ds.meta.precision_bits);
  std::vector<AngularRow> out;
  out.reserve(ds.rows.size());
  for (const auto& r : ds.rows) {
    const Vec3& v = which == WhichVector::p ? r.p : (which == WhichVector::q ? r.q : r.w);
    AngularRow row;
    row.theta = r.theta;
    Real n = norm(v);
    if (n < degeneracy_threshold()) {
      row.azimuth = Real(0);
      row.polar = Real(0);
    } else {
      row.azimuth = atan2(v.y, v.x);
      row.polar = acos(v.z / n);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string plotdata_csv(const Dataset& ds, WhichVector which) {
  std::vector<AngularRow> rows = export_plotdata(ds, which);
  const char* name = which == WhichVector::p ? "p" : (which == WhichVector::q ? "q" : "w");
  std::ostringstream os;
  os << "# vector: " << name << "\n";
  os << "# convention: azimuth = atan2(y, x) in (-pi, pi], polar measured from the +z axis in "
        "[0, pi], radians\n";
  os << "azimuth,polar,theta\n";
  for (const auto& r : rows) {
    os << real_field(r.azimuth) << ',' << real_field(r.polar) << ',' << real_field(r.theta)
       << "\n";
  }
  return os.str();
}

}  // namespace comjac

#include "sasmig/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace sasmig {

namespace {

using ordered_json = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little,
              "payload I/O assumes a little-endian host");

void write_payload(std::ofstream& out, const Matrix& values) {
  std::vector<float> buf(static_cast<std::size_t>(values.size()));
  const double* src = values.data();
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = static_cast<float>(src[k]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

// Header line plus exactly rows*cols floats. Truncation reports the byte
// offset where data ran out.
Matrix read_payload(std::ifstream& in, std::int64_t payload_start, Index rows, Index cols) {
  std::vector<float> buf(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != buf.size() * sizeof(float))
    throw ParseError("truncated payload", payload_start + in.gcount());
  Matrix values(rows, cols);
  double* dst = values.data();
  for (std::size_t k = 0; k < buf.size(); ++k) dst[k] = buf[k];
  return values;
}

ordered_json read_header(std::ifstream& in, const std::string& path,
                         std::int64_t& payload_start) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ": missing header line", 0);
  payload_start = static_cast<std::int64_t>(line.size()) + 1;
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ParseError(path + ": header is not valid JSON", 0);
  return j;
}

void check_magic(const ordered_json& j, const std::string& expect) {
  if (!j.contains("magic") || j["magic"] != expect)
    throw ParseError("bad magic: expected \"" + expect + "\"", 0);
  if (!j.contains("version") || j["version"] != 1)
    throw ParseError("unsupported version for " + expect, 0);
}

template <typename T>
T header_field(const ordered_json& j, const char* name) {
  if (!j.contains(name))
    throw ParseError(std::string("header missing field \"") + name + "\"", 0);
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("header field \"") + name + "\" has wrong type", 0);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return in;
}

} // namespace

void write_sas(const SasRecord& record, const std::string& path) {
  validate_record(record);
  ordered_json j;
  j["magic"] = "SASR";
  j["version"] = 1;
  j["n_traces"] = record.n_traces;
  j["n_samples"] = record.n_samples;
  j["dt"] = record.dt;
  j["dx_track"] = record.dx_track;
  j["t0"] = record.t0;
  j["c"] = record.c;
  std::ofstream out = open_out(path);
  out << j.dump() << '\n';
  write_payload(out, record.data);
  if (!out) throw ParseError(path + ": write failed");
}

SasRecord read_sas(const std::string& path) {
  std::ifstream in = open_in(path);
  std::int64_t payload_start = 0;
  ordered_json j = read_header(in, path, payload_start);
  check_magic(j, "SASR");
  SasRecord r;
  r.n_traces = header_field<int>(j, "n_traces");
  r.n_samples = header_field<int>(j, "n_samples");
  r.dt = header_field<double>(j, "dt");
  r.dx_track = header_field<double>(j, "dx_track");
  r.t0 = header_field<double>(j, "t0");
  r.c = header_field<double>(j, "c");
  if (r.n_traces < 1 || r.n_samples < 1)
    throw ParseError(path + ": non-positive trace/sample count in header", 0);
  r.data = read_payload(in, payload_start, r.n_samples, r.n_traces);
  validate_record(r);
  return r;
}

void write_field(const Field2D& field, const std::string& path) {
  validate_field(field);
  ordered_json j;
  j["magic"] = "FLD2";
  j["version"] = 1;
  j["nx"] = field.grid.nx;
  j["nz"] = field.grid.nz;
  j["dx"] = field.grid.dx;
  j["dz"] = field.grid.dz;
  j["x0"] = field.grid.x0;
  j["z0"] = field.grid.z0;
  std::ofstream out = open_out(path);
  out << j.dump() << '\n';
  write_payload(out, field.values);
  if (!out) throw ParseError(path + ": write failed");
}

Field2D read_field(const std::string& path) {
  std::ifstream in = open_in(path);
  std::int64_t payload_start = 0;
  ordered_json j = read_header(in, path, payload_start);
  check_magic(j, "FLD2");
  Field2D f;
  f.grid.nx = header_field<int>(j, "nx");
  f.grid.nz = header_field<int>(j, "nz");
  f.grid.dx = header_field<double>(j, "dx");
  f.grid.dz = header_field<double>(j, "dz");
  f.grid.x0 = header_field<double>(j, "x0");
  f.grid.z0 = header_field<double>(j, "z0");
  if (f.grid.nx < 2 || f.grid.nz < 1)
    throw ParseError(path + ": invalid grid dimensions in header", 0);
  f.values = read_payload(in, payload_start, f.grid.nx, f.grid.nz);
  validate_field(f);
  return f;
}

std::string file_info_json(const std::string& path) {
  std::ifstream in = open_in(path);
  std::int64_t payload_start = 0;
  ordered_json j = read_header(in, path, payload_start);
  if (!j.contains("magic") || (j["magic"] != "SASR" && j["magic"] != "FLD2"))
    throw ParseError(path + ": unknown file type", 0);
  return j.dump();
}

void export_pgm(const Field2D& field, const std::string& path,
                const PgmNormalization& norm) {
  validate_field(field);
  double lo, hi;
  if (norm.mode == PgmNormalization::Mode::minmax) {
    lo = field.values.minCoeff();
    hi = field.values.maxCoeff();
  } else {
    lo = norm.lo;
    hi = norm.hi;
    detail::require(hi > lo, "normalization", "fixed range needs hi > lo");
  }
  const double span = hi - lo;

  std::ofstream out = open_out(path);
  out << "P5\n" << field.grid.nx << " " << field.grid.nz << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(field.grid.nx) * 2);
  for (Index j = 0; j < field.grid.nz; ++j) {
    for (Index i = 0; i < field.grid.nx; ++i) {
      double t = span > 0.0 ? (field.values(i, j) - lo) / span : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const auto v = static_cast<std::uint16_t>(std::lround(t * 65535.0));
      row[2 * static_cast<std::size_t>(i)] = static_cast<unsigned char>(v >> 8);
      row[2 * static_cast<std::size_t>(i) + 1] = static_cast<unsigned char>(v & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw ParseError(path + ": write failed");
}

ScattererList read_scatterers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  ScattererList list;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double x, z, a;
    char c1, c2;
    if (!(ss >> std::ws) || ss.eof()) continue; // blank/comment-only line
    if (!(ss >> x >> c1 >> z >> c2 >> a) || c1 != ',' || c2 != ',')
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected \"x,z,amplitude\"");
    list.push_back({x, z, a});
  }
  validate_scatterers(list);
  return list;
}

SpeedProfile read_layers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  SpeedProfile prof;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double z_top, c;
    char comma;
    if (!(ss >> std::ws) || ss.eof()) continue;
    if (!(ss >> z_top >> comma >> c) || comma != ',')
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected \"z_top,c\"");
    prof.layers.push_back({z_top, c});
  }
  validate_speed_profile(prof);
  return prof;
}

} // namespace sasmig

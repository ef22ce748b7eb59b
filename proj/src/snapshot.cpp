#include "kato/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace kato {

namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xff);
    return r;
  }
}

void write_doubles(std::ofstream& out, const double* data, std::size_t count) {
  std::vector<std::uint64_t> buf(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, data + i, 8);
    buf[i] = to_le(bits);
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(count * 8));
}

void read_doubles(std::ifstream& in, double* data, std::size_t count,
                  const std::string& path) {
  std::vector<std::uint64_t> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(count * 8));
  if (in.gcount() != static_cast<std::streamsize>(count * 8)) {
    throw std::runtime_error("snapshot truncated: " + path);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t bits = to_le(buf[i]);
    std::memcpy(data + i, &bits, 8);
  }
}

std::ofstream open_with_header(const std::string& path, const Grid& g,
                               bool complex) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot: " + path);
  nlohmann::json h;
  h["dim"] = g.dim();
  h["L"] = g.half_period();
  h["n"] = g.n();
  h["complex"] = complex;
  h["dtype"] = "f64le";
  out << h.dump() << '\n';
  return out;
}

SnapshotHeader parse_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty snapshot: " + path);
  SnapshotHeader h;
  try {
    const auto j = nlohmann::json::parse(line);
    h.dim = j.at("dim").get<int>();
    h.half_period = j.at("L").get<double>();
    h.n = j.at("n").get<int>();
    h.complex = j.at("complex").get<bool>();
    h.dtype = j.at("dtype").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad snapshot header in " + path + ": " + e.what());
  }
  if (h.dtype != "f64le") {
    throw std::runtime_error("unsupported snapshot dtype: " + h.dtype);
  }
  return h;
}

std::ifstream open_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read snapshot: " + path);
  return in;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& f) {
  auto out = open_with_header(path, f.grid(), true);
  write_doubles(out, reinterpret_cast<const double*>(f.values().data()),
                2 * static_cast<std::size_t>(f.size()));
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

void write_snapshot(const std::string& path, const RealField& f) {
  auto out = open_with_header(path, f.grid(), false);
  write_doubles(out, f.values().data(), static_cast<std::size_t>(f.size()));
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

SnapshotHeader read_snapshot_header(const std::string& path) {
  auto in = open_snapshot(path);
  return parse_header(in, path);
}

Field read_field_snapshot(const std::string& path) {
  auto in = open_snapshot(path);
  const auto h = parse_header(in, path);
  Field f(Grid::make(h.dim, h.half_period, h.n));
  const auto count = static_cast<std::size_t>(f.size());
  if (h.complex) {
    read_doubles(in, reinterpret_cast<double*>(f.values().data()), 2 * count, path);
  } else {
    std::vector<double> re(count);
    read_doubles(in, re.data(), count, path);
    for (std::size_t i = 0; i < count; ++i) f[static_cast<Eigen::Index>(i)] = re[i];
  }
  return f;
}

RealField read_real_snapshot(const std::string& path) {
  auto in = open_snapshot(path);
  const auto h = parse_header(in, path);
  if (h.complex) throw std::runtime_error("snapshot is complex: " + path);
  RealField f(Grid::make(h.dim, h.half_period, h.n));
  read_doubles(in, f.values().data(), static_cast<std::size_t>(f.size()), path);
  return f;
}

}  // namespace kato

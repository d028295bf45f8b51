#include "biharm/io.hpp"

#include <bit>
#include <boost/crc.hpp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace biharm {

namespace {

constexpr char kMagic[4] = {'B', 'H', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

// the format is little-endian; values are copied as-is
static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");

template <class T>
void put(std::ostream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw IoError("truncated dump");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_dump(std::ostream& os, const DumpHeader& header, const std::vector<double>& values) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(header.kind));
  put<std::int32_t>(os, header.level);
  put<std::uint64_t>(os, header.seed);
  put<double>(os, header.parameter);
  put<std::uint64_t>(os, values.size());
  os.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!os) throw IoError("write failed");
}

Dump read_dump(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a dump file (bad magic)");
  if (get<std::uint32_t>(is) != kVersion) throw IoError("unsupported dump version");
  Dump d;
  d.header.kind = static_cast<DumpKind>(get<std::uint32_t>(is));
  d.header.level = get<std::int32_t>(is);
  d.header.seed = get<std::uint64_t>(is);
  d.header.parameter = get<double>(is);
  d.header.count = get<std::uint64_t>(is);
  if (d.header.count > (std::uint64_t{1} << 32)) throw IoError("implausible value count");
  d.values.resize(d.header.count);
  for (auto& v : d.values) v = get<double>(is);
  return d;
}

void write_dump(const std::filesystem::path& path, const DumpHeader& header, const std::vector<double>& values) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_dump(os, header, values);
}

Dump read_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_dump(is);
}

Dump to_dump(const GridField& u, std::uint64_t seed) {
  return {{DumpKind::grid, u.level(), seed, u.grounded() ? 1.0 : 0.0, u.size()}, u.values()};
}

Dump to_dump(const DiscreteField& u, std::uint64_t seed) {
  return {{DumpKind::discrete, u.level(), seed, u.grounded() ? 1.0 : 0.0, u.size()}, u.values()};
}

Dump to_dump(const SpectralField& u, std::uint64_t seed) {
  std::vector<double> v;
  v.reserve(2 * u.size());
  for (const auto& c : u.coefficients()) {
    v.push_back(c.real());
    v.push_back(c.imag());
  }
  return {{DumpKind::spectral, u.cutoff(), seed, u.grounded() ? 1.0 : 0.0, v.size()}, std::move(v)};
}

GridField grid_from_dump(const Dump& d) {
  if (d.header.kind != DumpKind::grid) throw IoError("dump is not a grid field");
  return GridField(d.header.level, d.values, d.header.parameter != 0.0);
}

DiscreteField discrete_from_dump(const Dump& d) {
  if (d.header.kind != DumpKind::discrete) throw IoError("dump is not a discrete field");
  return DiscreteField(d.header.level, d.values, d.header.parameter != 0.0);
}

SpectralField spectral_from_dump(const Dump& d) {
  if (d.header.kind != DumpKind::spectral) throw IoError("dump is not a spectral field");
  SpectralField u(d.header.level, d.header.parameter != 0.0);
  if (d.values.size() != 2 * u.size()) throw IoError("spectral dump size mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) u.coefficients()[i] = {d.values[2 * i], d.values[2 * i + 1]};
  return u;
}

std::string file_crc32(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  boost::crc_32_type crc;
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) crc.process_bytes(buf, static_cast<std::size_t>(is.gcount()));
  char out[9];
  std::snprintf(out, sizeof out, "%08x", crc.checksum());
  return out;
}

}  // namespace biharm

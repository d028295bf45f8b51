#pragma once

// Shared little-endian binary dump format.
//
//   offset  size  field
//   0       4     magic "BHRM"
//   4       4     u32 format version (1)
//   8       4     u32 payload kind (DumpKind)
//   12      4     i32 level (grid kinds) or cutoff N (spectral, kernel table)
//   16      8     u64 seed
//   24      8     f64 parameter (gamma for measures, s for kernel tables, grounded flag 0/1 for fields)
//   32      8     u64 value count (doubles that follow; complex payloads store re, im pairs)
//   40      ...   f64 values, row-major

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/grid.hpp"
#include "biharm/spectral_field.hpp"

namespace biharm {

enum class DumpKind : std::uint32_t { grid = 1, discrete = 2, measure_semi = 3, measure_discrete = 4, spectral = 5, haar = 6, kernel_table = 7 };

struct DumpHeader {
  DumpKind kind = DumpKind::grid;
  std::int32_t level = 0;
  std::uint64_t seed = 0;
  double parameter = 0.0;
  std::uint64_t count = 0;
};

struct Dump {
  DumpHeader header;
  std::vector<double> values;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_dump(std::ostream& os, const DumpHeader& header, const std::vector<double>& values);
Dump read_dump(std::istream& is);

void write_dump(const std::filesystem::path& path, const DumpHeader& header, const std::vector<double>& values);
Dump read_dump(const std::filesystem::path& path);

Dump to_dump(const GridField& u, std::uint64_t seed = 0);
Dump to_dump(const DiscreteField& u, std::uint64_t seed = 0);
Dump to_dump(const SpectralField& u, std::uint64_t seed = 0);

GridField grid_from_dump(const Dump& d);
DiscreteField discrete_from_dump(const Dump& d);
SpectralField spectral_from_dump(const Dump& d);

/// CRC-32 (IEEE) of a file's bytes, as 8 lowercase hex digits.
std::string file_crc32(const std::filesystem::path& path);

}  // namespace biharm

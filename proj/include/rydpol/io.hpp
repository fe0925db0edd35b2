#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rydpol/field.hpp"
#include "rydpol/topology.hpp"
#include "json.hpp"

namespace rydpol {

using json = nlohmann::json;

enum class Precision { C64, C128 };
Precision parse_precision(const std::string& s);
std::string to_string(Precision p);

// Binary field container:
//   8 bytes magic "RYDPOLF\0", u32 version, u64 header length, UTF-8 JSON
//   header, then the amplitudes component-major as little-endian
//   (re, im) float32 or float64 pairs.
// Header keys: n, N, dx, time, precision, components, units, meta.
inline constexpr std::uint32_t kContainerVersion = 1;

void write_field(const std::filesystem::path& path, const PolaritonField& f, Precision prec = Precision::C128,
                 const json& meta = json::object());

struct LoadedField {
  PolaritonField field;
  json header;
};
LoadedField read_field(const std::filesystem::path& path);

// Whitespace-separated columns with a '#'-prefixed header line.
void write_columns(const std::filesystem::path& path, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns, int precision = 17);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

// manifest.json holding the resolved configuration, its hash and the list of
// written artifacts.
void write_manifest(const std::filesystem::path& dir, const json& resolved_config,
                    const std::vector<std::string>& artifacts, const json& status);

// Slices of an n = 2 or 3 photon field component.
struct SliceSpec {
  enum class Kind { Axis, Jacobi } kind = Kind::Axis;
  int component = 0;
  // Axis: fixed grid index per axis, -1 leaves the axis free.
  std::vector<int> fixed{-1, -1, -1};
  // Jacobi (n = 3): the Jacobi coordinate fixed_coord ∈ {0: R, 1: η, 2: ζ} is
  // held at `value` and the remaining two span [lo, hi] with `points` samples
  // each (trilinear interpolation). For n = 2, fixed_coord ∈ {0: R, 1: r} and
  // the remaining coordinate is sampled.
  int fixed_coord = 1;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
};

struct Slice {
  std::vector<std::string> coord_names;
  std::vector<std::vector<double>> coords;  // one vector per coordinate
  std::vector<cplx> values;
};

// Throws DomainError if no sample falls inside the grid.
Slice extract_slice(const PolaritonField& f, const SliceSpec& spec);
void write_slice(const std::filesystem::path& path, const Slice& s);

json vortex_set_json(const VortexSet& set);
// Columns: tube id, closed flag, x1, x2, x3 (one row per polyline vertex).
void write_tube_polylines(const std::filesystem::path& path, const VortexSet& set);
json phase_diagram_json(const PhaseDiagram& pd);

}  // namespace rydpol

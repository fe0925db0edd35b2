#include "rydpol/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rydpol/errors.hpp"
#include "rydpol/jacobi.hpp"

namespace rydpol {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'R', 'Y', 'D', 'P', 'O', 'L', 'F', '\0'};

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw IoError("read_field: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

cplx trilinear(const PolaritonField& f, int a, const std::vector<double>& u) {
  // u holds fractional grid indices, one per axis.
  const int n = f.n;
  std::array<int, 3> i0{0, 0, 0};
  std::array<double, 3> w{0, 0, 0};
  for (int d = 0; d < n; ++d) {
    i0[d] = std::min(static_cast<int>(std::floor(u[d])), f.N - 2);
    w[d] = u[d] - i0[d];
  }
  cplx acc = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double weight = 1.0;
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < n; ++d) {
      int bit = (corner >> d) & 1;
      idx[d] = i0[d] + bit;
      weight *= bit ? w[d] : 1.0 - w[d];
    }
    if (weight == 0.0) continue;
    acc += weight * f.at(a, f.site(idx));
  }
  return acc;
}

}  // namespace

Precision parse_precision(const std::string& s) {
  if (s == "c64") return Precision::C64;
  if (s == "c128") return Precision::C128;
  throw ConfigError("precision", "expected c64 or c128, got '" + s + "'");
}

std::string to_string(Precision p) { return p == Precision::C64 ? "c64" : "c128"; }

void write_field(const fs::path& path, const PolaritonField& f, Precision prec, const json& meta) {
  json h;
  h["n"] = f.n;
  h["N"] = f.N;
  h["dx"] = f.dx;
  h["time"] = f.time;
  h["precision"] = to_string(prec);
  json comps = json::array();
  for (int a = 0; a < f.components(); ++a) comps.push_back(component_name(f.n, a));
  h["components"] = comps;
  h["units"] = {{"length", "um"}, {"time", "us"}, {"frequency", "MHz"}};
  h["meta"] = meta;
  const std::string header = h.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_field: cannot open " + path.string());
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(os, kContainerVersion);
  put_le<std::uint64_t>(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const cplx& v : f.data) {
    if (prec == Precision::C64) {
      put_le<float>(os, static_cast<float>(v.real()));
      put_le<float>(os, static_cast<float>(v.imag()));
    } else {
      put_le<double>(os, v.real());
      put_le<double>(os, v.imag());
    }
  }
  if (!os) throw IoError("write_field: write failed for " + path.string());
}

LoadedField read_field(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_field: cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("read_field: not a field container: " + path.string());
  auto version = get_le<std::uint32_t>(is);
  if (version != kContainerVersion) throw IoError("read_field: unsupported version " + std::to_string(version));
  auto len = get_le<std::uint64_t>(is);
  if (len > (1u << 30)) throw IoError("read_field: header too large");
  std::string header(len, '\0');
  if (!is.read(header.data(), static_cast<std::streamsize>(len))) throw IoError("read_field: truncated header");
  LoadedField out;
  try {
    out.header = json::parse(header);
    out.field = PolaritonField(out.header.at("n").get<int>(), out.header.at("N").get<int>(),
                               out.header.at("dx").get<double>());
    out.field.time = out.header.at("time").get<double>();
  } catch (const json::exception& e) {
    throw IoError(std::string("read_field: bad header: ") + e.what());
  }
  const bool single = out.header.value("precision", "c128") == "c64";
  for (auto& v : out.field.data) {
    if (single) {
      float re = get_le<float>(is), im = get_le<float>(is);
      v = cplx(re, im);
    } else {
      double re = get_le<double>(is), im = get_le<double>(is);
      v = cplx(re, im);
    }
  }
  return out;
}

void write_columns(const fs::path& path, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns, int precision) {
  if (names.size() != columns.size()) throw IoError("write_columns: name/column count mismatch");
  size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& c : columns)
    if (c.size() != rows) throw IoError("write_columns: ragged columns");
  std::ofstream os(path);
  if (!os) throw IoError("write_columns: cannot open " + path.string());
  os << '#';
  for (const auto& n : names) os << ' ' << n;
  os << '\n' << std::setprecision(precision);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < columns.size(); ++c) os << (c ? " " : "") << columns[c][r];
    os << '\n';
  }
  if (!os) throw IoError("write_columns: write failed for " + path.string());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void write_manifest(const fs::path& dir, const json& resolved_config, const std::vector<std::string>& artifacts,
                    const json& status) {
  json m;
  m["config"] = resolved_config;
  m["input_hash"] = "fnv1a64:" + hex64(fnv1a(resolved_config.dump()));
  m["artifacts"] = artifacts;
  m["status"] = status;
  std::ofstream os(dir / "manifest.json");
  if (!os) throw IoError("write_manifest: cannot open " + (dir / "manifest.json").string());
  os << m.dump(2) << '\n';
  if (!os) throw IoError("write_manifest: write failed");
}

Slice extract_slice(const PolaritonField& f, const SliceSpec& spec) {
  if (f.n < 1 || f.n > 3) throw DomainError("extract_slice: need a 1- to 3-photon field");
  if (spec.component < 0 || spec.component >= f.components()) throw DomainError("extract_slice: bad component");
  Slice s;
  static const char* axis_names[3] = {"x1_um", "x2_um", "x3_um"};

  if (spec.kind == SliceSpec::Kind::Axis) {
    std::vector<int> free_axes;
    for (int d = 0; d < f.n; ++d) {
      int fx = d < static_cast<int>(spec.fixed.size()) ? spec.fixed[d] : -1;
      if (fx >= f.N) throw DomainError("extract_slice: fixed index outside the grid");
      if (fx < 0) free_axes.push_back(d);
    }
    for (int d : free_axes) s.coord_names.push_back(axis_names[d]);
    s.coords.assign(free_axes.size(), {});
    size_t count = 1;
    for (size_t i = 0; i < free_axes.size(); ++i) count *= static_cast<size_t>(f.N);
    for (size_t c = 0; c < count; ++c) {
      std::array<int, 3> idx{0, 0, 0};
      size_t rem = c;
      for (int q = static_cast<int>(free_axes.size()) - 1; q >= 0; --q) {
        idx[free_axes[q]] = static_cast<int>(rem % f.N);
        rem /= f.N;
      }
      for (int d = 0; d < f.n; ++d)
        if (d < static_cast<int>(spec.fixed.size()) && spec.fixed[d] >= 0) idx[d] = spec.fixed[d];
      for (size_t q = 0; q < free_axes.size(); ++q) s.coords[q].push_back(idx[free_axes[q]] * f.dx);
      s.values.push_back(f.at(spec.component, f.site(idx)));
    }
    return s;
  }

  if (f.n < 2) throw DomainError("extract_slice: Jacobi slices need two or three photons");
  if (spec.points < 1 || !(spec.hi >= spec.lo)) throw DomainError("extract_slice: bad Jacobi range");
  if (spec.fixed_coord < 0 || spec.fixed_coord >= f.n) throw DomainError("extract_slice: bad fixed Jacobi coordinate");
  static const char* jac2[2] = {"R_um", "r_um"};
  static const char* jac3[3] = {"R_um", "eta_um", "zeta_um"};
  std::vector<int> free_q;
  for (int d = 0; d < f.n; ++d)
    if (d != spec.fixed_coord) free_q.push_back(d);
  for (int d : free_q) s.coord_names.push_back(f.n == 2 ? jac2[d] : jac3[d]);
  s.coords.assign(free_q.size(), {});
  auto sample = [&](int i) {
    return spec.points == 1 ? spec.lo : spec.lo + (spec.hi - spec.lo) * i / (spec.points - 1);
  };
  const double xmax = (f.N - 1) * f.dx;
  size_t count = free_q.size() == 1 ? spec.points : static_cast<size_t>(spec.points) * spec.points;
  for (size_t c = 0; c < count; ++c) {
    std::vector<double> q(f.n, 0.0);
    q[spec.fixed_coord] = spec.value;
    if (free_q.size() == 1) {
      q[free_q[0]] = sample(static_cast<int>(c));
    } else {
      q[free_q[0]] = sample(static_cast<int>(c / spec.points));
      q[free_q[1]] = sample(static_cast<int>(c % spec.points));
    }
    auto x = jacobi_inverse(q);
    bool inside = true;
    std::vector<double> u(f.n);
    for (int d = 0; d < f.n; ++d) {
      if (x[d] < -1e-12 * xmax || x[d] > xmax * (1 + 1e-12)) inside = false;
      u[d] = std::clamp(x[d] / f.dx, 0.0, static_cast<double>(f.N - 1));
    }
    if (!inside) continue;
    for (size_t k = 0; k < free_q.size(); ++k) s.coords[k].push_back(q[free_q[k]]);
    s.values.push_back(trilinear(f, spec.component, u));
  }
  if (s.values.empty()) throw DomainError("extract_slice: slice lies outside the grid");
  return s;
}

void write_slice(const fs::path& path, const Slice& s) {
  std::vector<std::string> names = s.coord_names;
  std::vector<std::vector<double>> cols = s.coords;
  std::vector<double> re, im, ab, ph;
  for (const auto& v : s.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
    ab.push_back(std::abs(v));
    ph.push_back(std::arg(v));
  }
  for (const char* n : {"re", "im", "abs", "arg"}) names.push_back(n);
  cols.push_back(std::move(re));
  cols.push_back(std::move(im));
  cols.push_back(std::move(ab));
  cols.push_back(std::move(ph));
  write_columns(path, names, cols);
}

json vortex_set_json(const VortexSet& set) {
  json j;
  j["rank"] = set.rank;
  j["dx_um"] = set.dx;
  j["total_winding"] = set.total_winding();
  json pts = json::array();
  for (const auto& p : set.points)
    pts.push_back({{"x_um", {p.pos[0], p.pos[1]}}, {"winding", p.winding}, {"cell", {p.cell[0], p.cell[1]}}});
  j["points"] = pts;
  json tubes = json::array();
  for (const auto& t : set.tubes) {
    json pl = json::array();
    for (const auto& x : t.points) pl.push_back({x[0], x[1], x[2]});
    tubes.push_back({{"closed", t.closed},
                     {"class", to_string(t.cls)},
                     {"seed_um", {t.seed[0], t.seed[1], t.seed[2]}},
                     {"seed_zeta_um", t.seed_zeta},
                     {"odd_photon", t.odd_photon},
                     {"min_amplitude", t.min_amplitude},
                     {"points_um", pl}});
  }
  j["tubes"] = tubes;
  json junctions = json::array();
  for (const auto& c : set.junctions) junctions.push_back({c[0], c[1], c[2]});
  j["junction_cells"] = junctions;
  auto census = set.class_census();
  j["class_census"] = {{"single-ahead", census[0]}, {"pair-ahead", census[1]}, {"merged", census[2]}};
  return j;
}

void write_tube_polylines(const fs::path& path, const VortexSet& set) {
  std::vector<std::vector<double>> cols(5);
  for (size_t t = 0; t < set.tubes.size(); ++t) {
    for (const auto& x : set.tubes[t].points) {
      cols[0].push_back(static_cast<double>(t));
      cols[1].push_back(set.tubes[t].closed ? 1.0 : 0.0);
      cols[2].push_back(x[0]);
      cols[3].push_back(x[1]);
      cols[4].push_back(x[2]);
    }
  }
  write_columns(path, {"tube", "closed", "x1_um", "x2_um", "x3_um"}, cols);
}

json phase_diagram_json(const PhaseDiagram& pd) {
  json j;
  j["lambda"] = pd.lambda;
  j["phi_over_pi"] = pd.phi;
  json region = json::array();
  for (size_t il = 0; il < pd.lambda.size(); ++il) {
    json row = json::array();
    for (size_t ip = 0; ip < pd.phi.size(); ++ip) row.push_back(static_cast<int>(pd.at(il, ip)));
    region.push_back(row);
  }
  j["region"] = region;
  j["region_legend"] = {"none", "single-ahead-only", "both", "pair-ahead-only"};
  std::vector<int> excl;
  for (bool b : pd.excluded) excl.push_back(b ? 1 : 0);
  j["excluded"] = excl;
  auto curves = [](const std::vector<Polyline>& ls) {
    json out = json::array();
    for (const auto& l : ls) {
      json line = json::array();
      for (const auto& p : l) line.push_back({p[0], p[1]});
      out.push_back(line);
    }
    return out;
  };
  j["single_ahead_threshold"] = curves(pd.single_curve);
  j["pair_ahead_threshold"] = curves(pd.pair_curve);
  return j;
}

}  // namespace rydpol

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rydpol/correlations.hpp"
#include "rydpol/io.hpp"

namespace rydpol {

struct BandOptions {
  int order = 3;         // 2, 3 or 4
  double k_max = 2.0;    // in units of ω_D/c
  int k_points = 101;    // per axis
  bool si = false;       // natural units unless set
};

// Lengths here are in the natural band unit cΔ/(ρg²) at the peak density.
struct PlaneWaveRunOptions {
  double r_b = 0.0;             // 0: derived from the atom and medium sections
  double cell_over_rb = 20.0;   // D / r_b
  size_t basis_count = 331;
  std::vector<double> R{0.5, 1.0, 2.0, 4.0};
  int quad_per_rb = 8;
  double image_half_width = 3.0;  // in units of r_b
  int image_points = 65;          // per axis
  bool multiband = true;
  bool singleband = true;
};

struct ScanOptions {
  std::vector<double> lambda{0.1, 0.3, 0.5, 0.7};
  std::vector<double> phi{1.5, 2.0, 2.5, 3.0};  // in units of π
  int n_points = 32;
  bool parallel_points = false;
};

struct VortexRunOptions {
  std::string input;  // field container; empty: solve the steady state first
  int component = 0;
  double amplitude_floor = 0.0;
};

struct ExportOptions {
  std::string input;
  SliceSpec slice;
};

struct RunConfig {
  std::string mode = "two";
  AtomicParams atom = default_atomic_params();
  double r_b = 15.3;  // µm; 0 switches the interaction off
  MediumGeometry medium;
  int n_points = 96;
  Advection scheme = Advection::Upwind2;
  SteadyMethod method = SteadyMethod::Sweep;
  SteadyOptions steady;
  CorrelationOptions correlations;
  int tau2_points = 0;    // 0: same as tau_points
  double tau2_max = 0.0;  // 0: same as tau_max
  BandOptions bands;
  PlaneWaveRunOptions planewave;
  ScanOptions scan;
  VortexRunOptions vortices;
  ExportOptions export_opts;
  Precision precision = Precision::C128;
  std::filesystem::path out_dir = "out";
  int threads = 0;  // 0: leave the OpenMP default
};

inline const std::vector<std::string>& run_modes() {
  static const std::vector<std::string> m{"single", "two", "three", "g2", "g3",
                                          "bands", "planewave", "vortices", "scan", "export"};
  return m;
}

// Keys are grouped as {"run": {...}, "atom": {...}, "medium": {...},
// "grid": {...}, "solver": {...}, "correlations": {...}, "bands": {...},
// "planewave": {...}, "scan": {...}, "vortices": {...}, "export": {...}}.
// Dimensional values accept a number in internal units or a string with a
// unit, e.g. "15.3 um". Unknown keys are errors.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::filesystem::path& path);
// Fully resolved configuration with all defaults expanded.
json resolved_config(const RunConfig& c);

}  // namespace rydpol

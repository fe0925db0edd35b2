#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rydpol/field.hpp"

namespace rydpol {

// Rank-2 or rank-3 complex samples on a cubic grid, last index fastest.
// Physical coordinate along axis d is origin[d] + index·dx.
struct ComplexGrid {
  int rank = 2;
  std::array<int, 3> shape{0, 0, 1};
  double dx = 1.0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::vector<cplx> data;

  ComplexGrid() = default;
  ComplexGrid(int rank, std::array<int, 3> shape, double dx);

  size_t size() const { return data.size(); }
  size_t index(int i, int j, int k = 0) const {
    return (static_cast<size_t>(i) * shape[1] + j) * shape[2] + k;
  }
  cplx& operator()(int i, int j, int k = 0) { return data[index(i, j, k)]; }
  cplx operator()(int i, int j, int k = 0) const { return data[index(i, j, k)]; }
  std::array<double, 3> coord(double i, double j, double k = 0.0) const {
    return {origin[0] + i * dx, origin[1] + j * dx, origin[2] + k * dx};
  }
};

// One component of an n = 2 or 3 photon field as a grid in (x1, x2[, x3]).
ComplexGrid component_grid(const PolaritonField& f, int component);

struct RealGrid {
  int rank = 2;
  std::array<int, 3> shape{0, 0, 1};
  double dx = 1.0;
  std::vector<double> data;
};

enum class VortexClass { SingleAhead, PairAhead, Merged };
std::string to_string(VortexClass c);

struct VortexPoint {
  std::array<double, 2> pos{0.0, 0.0};
  int winding = 0;
  std::array<int, 2> cell{0, 0};  // lower-left grid index of the plaquette
};

struct VortexTube {
  std::vector<std::array<double, 3>> points;  // refined face crossings
  std::vector<VortexClass> point_class;
  bool closed = false;
  VortexClass cls = VortexClass::Merged;
  // The seed is the vertex where two photons come closest, i.e. where the
  // tube sits deepest in a pair configuration.
  std::array<double, 3> seed{0.0, 0.0, 0.0};
  double seed_zeta = 0.0;  // pair-relative ζ at the seed
  int odd_photon = -1;     // photon outside the closest pair at the seed
  double min_amplitude = 0.0;
};

struct VortexSet {
  int rank = 2;
  double dx = 1.0;
  std::vector<VortexPoint> points;
  std::vector<VortexTube> tubes;
  std::vector<std::array<int, 3>> junctions;  // cells with more than two threaded faces

  int total_winding() const;
  size_t ring_count() const;
  // Tube count per class {single-ahead, pair-ahead, merged}.
  std::array<int, 3> class_census() const;
};

// (1/2π) Σ wrapped phase differences along the closed loop of (i, j) indices.
// Throws DomainError if the field vanishes on the loop.
int winding_number(const ComplexGrid& field, const std::vector<std::array<int, 2>>& loop);

struct VortexOptions {
  // Plaquettes with a corner amplitude below floor·max|ψ| are skipped.
  double amplitude_floor = 0.0;
};

// Zeros lying exactly on grid nodes or edges make face windings ambiguous and
// can split a tube at that point.
VortexSet find_vortices_2d(const ComplexGrid& field, const VortexOptions& opt = {});
VortexSet trace_vortex_tubes_3d(const ComplexGrid& field, const VortexOptions& opt = {});

// Wrapped central differences (one-sided at the edges) of arg ψ.
RealGrid phase_gradient_magnitude(const ComplexGrid& field);

// Pair-relative Jacobi ζ of three positions: the closest pair is (i, j), the
// remaining photon k, and ζ = (x_i + x_j - 2x_k)/√6. ζ > 0 means the pair
// leads. Returns {ζ, k}.
std::pair<double, int> pair_relative_zeta(const std::array<double, 3>& x);

// Segment lists forming the 0.5 iso-line of a 0/1 mask on a rectilinear
// grid, joined into polylines. mask is row-major [ix * ny + iy].
using Polyline = std::vector<std::array<double, 2>>;
std::vector<Polyline> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                       const std::vector<int>& mask);

enum class Region : int { None = 0, SingleAheadOnly = 1, Both = 2, PairAheadOnly = 3 };

struct PhaseDiagram {
  std::vector<double> lambda;
  std::vector<double> phi;
  std::vector<Region> region;   // [i_lambda * n_phi + i_phi]
  std::vector<bool> excluded;   // non-converged runs
  std::vector<Polyline> single_curve;
  std::vector<Polyline> pair_curve;

  Region at(size_t il, size_t ip) const { return region[il * phi.size() + ip]; }
};

struct ScanSample {
  ComplexGrid field;  // three-photon EEE amplitude
  bool converged = true;
};
using ScanRunner = std::function<ScanSample(double lambda, double phi)>;

// {single-ahead present, pair-ahead present} under the amplitude and
// sector criterion.
std::array<bool, 2> vortex_presence(const ComplexGrid& field, const VortexSet& set,
                                    double amplitude_fraction = 0.1);

PhaseDiagram scan_phase_diagram(const std::vector<double>& lambda_grid,
                                const std::vector<double>& phi_grid, const ScanRunner& runner,
                                bool parallel_points = false);

}  // namespace rydpol

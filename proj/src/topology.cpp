#include "rydpol/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "rydpol/errors.hpp"

namespace rydpol {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

int loop_winding(const cplx* c, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += wrap(std::arg(c[(i + 1) % n]) - std::arg(c[i]));
  return static_cast<int>(std::lround(sum / (2.0 * kPi)));
}

// Zero of the bilinear interpolant over the unit square with corners
// c00, c10, c11, c01. Falls back to the centre.
std::array<double, 2> bilinear_zero(cplx c00, cplx c10, cplx c11, cplx c01) {
  const cplx A = c00, B = c10 - c00, C = c01 - c00, D = c00 - c10 - c01 + c11;
  // Im[(A + Bu) conj(C + Du)] = 0 is a real quadratic in u.
  const double q0 = std::imag(A * std::conj(C));
  const double q1 = std::imag(A * std::conj(D)) + std::imag(B * std::conj(C));
  const double q2 = std::imag(B * std::conj(D));
  std::vector<double> roots;
  const double scale = std::abs(q0) + std::abs(q1) + std::abs(q2);
  if (scale == 0) return {0.5, 0.5};
  if (std::abs(q2) < 1e-12 * scale) {
    if (std::abs(q1) > 1e-14 * scale) roots.push_back(-q0 / q1);
  } else {
    double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc >= 0) {
      double s = std::sqrt(disc);
      roots.push_back((-q1 + s) / (2.0 * q2));
      roots.push_back((-q1 - s) / (2.0 * q2));
    }
  }
  const double eps = 1e-9;
  for (double u : roots) {
    if (u < -eps || u > 1 + eps) continue;
    cplx den = C + D * u;
    if (std::abs(den) == 0) continue;
    double v = std::real(-(A + B * u) / den);
    if (v < -eps || v > 1 + eps) continue;
    return {std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0)};
  }
  return {0.5, 0.5};
}

VortexClass classify(double zeta, double dx) {
  if (std::abs(zeta) < dx) return VortexClass::Merged;
  return zeta > 0 ? VortexClass::PairAhead : VortexClass::SingleAhead;
}

struct Face {
  int axis = 0;
  std::array<int, 3> idx{0, 0, 0};
  int winding = 0;
  std::array<double, 3> point{0, 0, 0};
  double min_amp = 0.0;
  long cell_a = -1;  // on the low side along the normal
  long cell_b = -1;
};

}  // namespace

ComplexGrid::ComplexGrid(int r, std::array<int, 3> s, double spacing) : rank(r), shape(s), dx(spacing) {
  if (r != 2 && r != 3) throw DomainError("ComplexGrid: rank must be 2 or 3");
  if (r == 2) shape[2] = 1;
  data.assign(static_cast<size_t>(shape[0]) * shape[1] * shape[2], cplx(0.0, 0.0));
}

ComplexGrid component_grid(const PolaritonField& f, int component) {
  if (f.n != 2 && f.n != 3) throw DomainError("component_grid: need a two- or three-photon field");
  if (component < 0 || component >= f.components()) throw DomainError("component_grid: bad component");
  ComplexGrid g(f.n, {f.N, f.N, f.n == 3 ? f.N : 1}, f.dx);
  std::copy(f.comp(component), f.comp(component) + f.sites(), g.data.begin());
  return g;
}

std::string to_string(VortexClass c) {
  switch (c) {
    case VortexClass::SingleAhead: return "single-ahead";
    case VortexClass::PairAhead: return "pair-ahead";
    case VortexClass::Merged: return "merged";
  }
  return "merged";
}

int VortexSet::total_winding() const {
  int s = 0;
  for (const auto& p : points) s += p.winding;
  return s;
}

size_t VortexSet::ring_count() const {
  return static_cast<size_t>(std::count_if(tubes.begin(), tubes.end(), [](const VortexTube& t) { return t.closed; }));
}

std::array<int, 3> VortexSet::class_census() const {
  std::array<int, 3> census{0, 0, 0};
  for (const auto& t : tubes) ++census[static_cast<int>(t.cls)];
  return census;
}

int winding_number(const ComplexGrid& field, const std::vector<std::array<int, 2>>& loop) {
  if (loop.size() < 3) throw DomainError("winding_number: loop needs at least three points");
  std::vector<cplx> vals;
  vals.reserve(loop.size());
  for (const auto& ij : loop) {
    if (ij[0] < 0 || ij[1] < 0 || ij[0] >= field.shape[0] || ij[1] >= field.shape[1])
      throw DomainError("winding_number: loop leaves the grid");
    cplx v = field(ij[0], ij[1]);
    if (v == 0.0) throw DomainError("winding_number: zero amplitude on the loop");
    vals.push_back(v);
  }
  return loop_winding(vals.data(), static_cast<int>(vals.size()));
}

VortexSet find_vortices_2d(const ComplexGrid& field, const VortexOptions& opt) {
  if (field.rank != 2) throw DomainError("find_vortices_2d: need a 2-D field");
  VortexSet set;
  set.rank = 2;
  set.dx = field.dx;
  double amax = 0.0;
  for (auto v : field.data) amax = std::max(amax, std::abs(v));
  const double floor = opt.amplitude_floor * amax;
  for (int i = 0; i + 1 < field.shape[0]; ++i) {
    for (int j = 0; j + 1 < field.shape[1]; ++j) {
      cplx c[4] = {field(i, j), field(i + 1, j), field(i + 1, j + 1), field(i, j + 1)};
      bool skip = false;
      for (auto v : c)
        if (v == 0.0 || std::abs(v) < floor) skip = true;
      if (skip) continue;
      int w = loop_winding(c, 4);
      if (w == 0) continue;
      auto uv = bilinear_zero(c[0], c[1], c[2], c[3]);
      auto x = field.coord(i + uv[0], j + uv[1]);
      set.points.push_back({{x[0], x[1]}, w, {i, j}});
    }
  }
  return set;
}

VortexSet trace_vortex_tubes_3d(const ComplexGrid& field, const VortexOptions& opt) {
  if (field.rank != 3) throw DomainError("trace_vortex_tubes_3d: need a 3-D field");
  VortexSet set;
  set.rank = 3;
  set.dx = field.dx;
  const auto& sh = field.shape;
  const std::array<int, 3> cells{sh[0] - 1, sh[1] - 1, sh[2] - 1};
  if (cells[0] < 1 || cells[1] < 1 || cells[2] < 1) return set;
  double amax = 0.0;
  for (auto v : field.data) amax = std::max(amax, std::abs(v));
  const double floor = opt.amplitude_floor * amax;

  auto cell_id = [&](int i, int j, int k) -> long {
    if (i < 0 || j < 0 || k < 0 || i >= cells[0] || j >= cells[1] || k >= cells[2]) return -1;
    return (static_cast<long>(i) * cells[1] + j) * cells[2] + k;
  };
  auto cell_center = [&](long id) {
    int k = static_cast<int>(id % cells[2]);
    int j = static_cast<int>((id / cells[2]) % cells[1]);
    int i = static_cast<int>(id / (static_cast<long>(cells[2]) * cells[1]));
    return field.coord(i + 0.5, j + 0.5, k + 0.5);
  };

  std::vector<Face> faces;
  for (int axis = 0; axis < 3; ++axis) {
    // In-plane axes (a, b) with (axis, a, b) cyclic, so positive winding
    // means circulation about +axis.
    const int a = (axis + 1) % 3, b = (axis + 2) % 3;
    std::array<int, 3> lim = sh;
    lim[a] -= 1;
    lim[b] -= 1;
    std::array<int, 3> idx{};
    for (idx[0] = 0; idx[0] < lim[0]; ++idx[0]) {
      for (idx[1] = 0; idx[1] < lim[1]; ++idx[1]) {
        for (idx[2] = 0; idx[2] < lim[2]; ++idx[2]) {
          auto at = [&](int da, int db) {
            std::array<int, 3> p = idx;
            p[a] += da;
            p[b] += db;
            return field(p[0], p[1], p[2]);
          };
          cplx c[4] = {at(0, 0), at(1, 0), at(1, 1), at(0, 1)};
          bool skip = false;
          double mn = std::abs(c[0]);
          for (auto v : c) {
            if (v == 0.0 || std::abs(v) < floor) skip = true;
            mn = std::min(mn, std::abs(v));
          }
          if (skip) continue;
          int w = loop_winding(c, 4);
          if (w == 0) continue;
          Face f;
          f.axis = axis;
          f.idx = idx;
          f.winding = w;
          f.min_amp = mn;
          auto uv = bilinear_zero(c[0], c[1], c[2], c[3]);
          std::array<double, 3> fi{static_cast<double>(idx[0]), static_cast<double>(idx[1]),
                                   static_cast<double>(idx[2])};
          fi[a] += uv[0];
          fi[b] += uv[1];
          f.point = field.coord(fi[0], fi[1], fi[2]);
          std::array<int, 3> lo = idx;
          lo[axis] -= 1;
          f.cell_a = cell_id(lo[0], lo[1], lo[2]);
          f.cell_b = cell_id(idx[0], idx[1], idx[2]);
          faces.push_back(f);
        }
      }
    }
  }

  std::unordered_map<long, std::vector<int>> incident;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (faces[f].cell_a >= 0) incident[faces[f].cell_a].push_back(f);
    if (faces[f].cell_b >= 0) incident[faces[f].cell_b].push_back(f);
  }
  for (const auto& [cell, list] : incident) {
    if (list.size() > 2) {
      auto c = cell_center(cell);
      set.junctions.push_back({static_cast<int>(std::lround((c[0] - field.origin[0]) / field.dx - 0.5)),
                               static_cast<int>(std::lround((c[1] - field.origin[1]) / field.dx - 0.5)),
                               static_cast<int>(std::lround((c[2] - field.origin[2]) / field.dx - 0.5))});
    }
  }
  std::sort(set.junctions.begin(), set.junctions.end());

  std::vector<bool> used(faces.size(), false);
  auto other = [&](int f, long cell) { return faces[f].cell_a == cell ? faces[f].cell_b : faces[f].cell_a; };

  // Walks from face `start` into `cell`; returns the face sequence and the
  // cell where the walk stopped (-1 = left the grid).
  auto walk = [&](int start, long cell, std::vector<int>& seq) -> long {
    seq.push_back(start);
    used[start] = true;
    int cur = start;
    std::array<double, 3> prev_pt = faces[start].point;
    bool have_prev = false;
    while (cell >= 0) {
      const auto& list = incident[cell];
      int next = -1;
      double best = -2.0;
      std::array<double, 3> tangent{};
      if (have_prev) {
        for (int d = 0; d < 3; ++d) tangent[d] = faces[cur].point[d] - prev_pt[d];
      } else {
        auto cc = cell_center(cell);
        for (int d = 0; d < 3; ++d) tangent[d] = cc[d] - faces[cur].point[d];
      }
      double tn = std::sqrt(tangent[0] * tangent[0] + tangent[1] * tangent[1] + tangent[2] * tangent[2]);
      for (int cand : list) {
        if (used[cand]) continue;
        std::array<double, 3> d{};
        for (int q = 0; q < 3; ++q) d[q] = faces[cand].point[q] - faces[cur].point[q];
        double dn = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        double cosv = (tn > 0 && dn > 0) ? (d[0] * tangent[0] + d[1] * tangent[1] + d[2] * tangent[2]) / (tn * dn) : 0.0;
        if (cosv > best) {
          best = cosv;
          next = cand;
        }
      }
      if (next < 0) return cell;
      used[next] = true;
      seq.push_back(next);
      prev_pt = faces[cur].point;
      have_prev = true;
      cur = next;
      cell = other(next, cell);
    }
    return -1;
  };

  auto finish = [&](const std::vector<int>& seq, bool closed) {
    VortexTube t;
    t.closed = closed;
    t.min_amplitude = std::numeric_limits<double>::infinity();
    double closest = std::numeric_limits<double>::infinity();
    for (int f : seq) {
      const auto& x = faces[f].point;
      t.points.push_back(x);
      t.min_amplitude = std::min(t.min_amplitude, faces[f].min_amp);
      t.point_class.push_back(classify(pair_relative_zeta(x).first, field.dx));
      double sep = std::min({std::abs(x[0] - x[1]), std::abs(x[0] - x[2]), std::abs(x[1] - x[2])});
      if (sep < closest) {
        closest = sep;
        t.seed = x;
      }
    }
    auto [zeta, odd] = pair_relative_zeta(t.seed);
    t.seed_zeta = zeta;
    t.odd_photon = odd;
    t.cls = classify(zeta, field.dx);
    set.tubes.push_back(std::move(t));
  };

  // Open tubes first, starting from faces on the grid boundary.
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (used[f]) continue;
    if (faces[f].cell_a >= 0 && faces[f].cell_b >= 0) continue;
    std::vector<int> seq;
    long inner = faces[f].cell_a >= 0 ? faces[f].cell_a : faces[f].cell_b;
    walk(f, inner, seq);
    finish(seq, false);
  }
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (used[f]) continue;
    std::vector<int> seq;
    long end = walk(f, faces[f].cell_b, seq);
    bool closed = end == faces[f].cell_a;
    if (!closed) {
      // A dangling end inside the grid (amplitude floor or junction): extend
      // backwards so the tube is complete.
      std::vector<int> back;
      used[f] = false;
      walk(f, faces[f].cell_a, back);
      std::reverse(back.begin(), back.end());
      back.pop_back();
      back.insert(back.end(), seq.begin(), seq.end());
      seq = std::move(back);
    }
    finish(seq, closed);
  }
  return set;
}

RealGrid phase_gradient_magnitude(const ComplexGrid& field) {
  RealGrid out;
  out.rank = field.rank;
  out.shape = field.shape;
  out.dx = field.dx;
  out.data.assign(field.size(), 0.0);
  const auto& sh = field.shape;
  for (int i = 0; i < sh[0]; ++i) {
    for (int j = 0; j < sh[1]; ++j) {
      for (int k = 0; k < sh[2]; ++k) {
        double sum = 0.0;
        std::array<int, 3> idx{i, j, k};
        for (int d = 0; d < field.rank; ++d) {
          if (sh[d] < 2) continue;
          std::array<int, 3> lo = idx, hi = idx;
          lo[d] = std::max(idx[d] - 1, 0);
          hi[d] = std::min(idx[d] + 1, sh[d] - 1);
          const double phc = std::arg(field(idx[0], idx[1], idx[2]));
          const double dl = wrap(phc - std::arg(field(lo[0], lo[1], lo[2])));
          const double dh = wrap(std::arg(field(hi[0], hi[1], hi[2])) - phc);
          double g = (dl + dh) / ((hi[d] - lo[d]) * field.dx);
          sum += g * g;
        }
        out.data[field.index(i, j, k)] = std::sqrt(sum);
      }
    }
  }
  return out;
}

std::pair<double, int> pair_relative_zeta(const std::array<double, 3>& x) {
  int bi = 0, bj = 1;
  double best = std::abs(x[0] - x[1]);
  if (std::abs(x[0] - x[2]) < best) {
    best = std::abs(x[0] - x[2]);
    bi = 0;
    bj = 2;
  }
  if (std::abs(x[1] - x[2]) < best) {
    bi = 1;
    bj = 2;
  }
  int k = 3 - bi - bj;
  return {(x[bi] + x[bj] - 2.0 * x[k]) / std::sqrt(6.0), k};
}

std::vector<Polyline> marching_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                       const std::vector<int>& mask) {
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
  if (mask.size() != xs.size() * ys.size()) throw DomainError("marching_squares: mask size mismatch");
  std::vector<Polyline> out;
  if (nx < 2 || ny < 2) return out;
  auto m = [&](int i, int j) { return mask[static_cast<size_t>(i) * ny + j] != 0; };
  // Edge ids: horizontal (along x) edges first, then vertical ones.
  const long n_h = static_cast<long>(nx - 1) * ny;
  auto h_edge = [&](int i, int j) { return static_cast<long>(i) * ny + j; };
  auto v_edge = [&](int i, int j) { return n_h + static_cast<long>(i) * (ny - 1) + j; };
  auto edge_point = [&](long e) -> std::array<double, 2> {
    if (e < n_h) {
      int i = static_cast<int>(e / ny), j = static_cast<int>(e % ny);
      return {0.5 * (xs[i] + xs[i + 1]), ys[j]};
    }
    long r = e - n_h;
    int i = static_cast<int>(r / (ny - 1)), j = static_cast<int>(r % (ny - 1));
    return {xs[i], 0.5 * (ys[j] + ys[j + 1])};
  };

  std::unordered_map<long, std::vector<long>> adj;
  auto seg = [&](long a, long b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      bool b0 = m(i, j), b1 = m(i + 1, j), b2 = m(i + 1, j + 1), b3 = m(i, j + 1);
      long e0 = h_edge(i, j), e1 = v_edge(i + 1, j), e2 = h_edge(i, j + 1), e3 = v_edge(i, j);
      std::vector<long> crossed;
      if (b0 != b1) crossed.push_back(e0);
      if (b1 != b2) crossed.push_back(e1);
      if (b2 != b3) crossed.push_back(e2);
      if (b3 != b0) crossed.push_back(e3);
      if (crossed.size() == 2) {
        seg(crossed[0], crossed[1]);
      } else if (crossed.size() == 4) {
        // Saddle: the set corners are taken as connected through the centre.
        if (b0) {
          seg(e0, e1);
          seg(e2, e3);
        } else {
          seg(e3, e0);
          seg(e1, e2);
        }
      }
    }
  }

  std::unordered_map<long, bool> seen;
  auto trace = [&](long start) {
    Polyline line;
    long prev = -1, cur = start;
    while (true) {
      seen[cur] = true;
      line.push_back(edge_point(cur));
      long next = -1;
      for (long nb : adj[cur])
        if (nb != prev && !seen[nb]) {
          next = nb;
          break;
        }
      if (next < 0) {
        // Close the loop if we are back next to the start.
        for (long nb : adj[cur])
          if (nb == start && prev != start && line.size() > 2) line.push_back(edge_point(start));
        break;
      }
      prev = cur;
      cur = next;
    }
    out.push_back(std::move(line));
  };
  std::vector<long> keys;
  for (const auto& [e, _] : adj) keys.push_back(e);
  std::sort(keys.begin(), keys.end());
  for (long e : keys)
    if (adj[e].size() == 1 && !seen[e]) trace(e);
  for (long e : keys)
    if (!seen[e]) trace(e);
  return out;
}

std::array<bool, 2> vortex_presence(const ComplexGrid& field, const VortexSet& set,
                                    double amplitude_fraction) {
  std::vector<double> amps(field.size());
  for (size_t i = 0; i < field.size(); ++i) amps[i] = std::abs(field.data[i]);
  if (amps.empty()) return {false, false};
  auto mid = amps.begin() + static_cast<long>(amps.size() / 2);
  std::nth_element(amps.begin(), mid, amps.end());
  const double threshold = amplitude_fraction * *mid;

  // sectors[c][k]: class c has a qualifying point whose odd photon is k.
  std::array<std::array<bool, 3>, 2> sectors{};
  for (const auto& t : set.tubes) {
    if (!(t.min_amplitude < threshold)) continue;
    for (size_t i = 0; i < t.points.size(); ++i) {
      VortexClass c = t.point_class[i];
      if (c == VortexClass::Merged) continue;
      int k = pair_relative_zeta(t.points[i]).second;
      sectors[c == VortexClass::SingleAhead ? 0 : 1][k] = true;
    }
  }
  std::array<bool, 2> out{};
  for (int c = 0; c < 2; ++c) out[c] = sectors[c][0] && sectors[c][1] && sectors[c][2];
  return out;
}

PhaseDiagram scan_phase_diagram(const std::vector<double>& lambda_grid,
                                const std::vector<double>& phi_grid, const ScanRunner& runner,
                                bool parallel_points) {
  PhaseDiagram pd;
  pd.lambda = lambda_grid;
  pd.phi = phi_grid;
  const size_t nl = lambda_grid.size(), np = phi_grid.size();
  pd.region.assign(nl * np, Region::None);
  std::vector<char> excluded(nl * np, 0);
  const long total = static_cast<long>(nl * np);
#pragma omp parallel for schedule(dynamic) if (parallel_points)
  for (long idx = 0; idx < total; ++idx) {
    const size_t il = static_cast<size_t>(idx) / np, ip = static_cast<size_t>(idx) % np;
    ScanSample s = runner(lambda_grid[il], phi_grid[ip]);
    if (!s.converged) {
      excluded[static_cast<size_t>(idx)] = 1;
      continue;
    }
    VortexSet set = trace_vortex_tubes_3d(s.field);
    auto present = vortex_presence(s.field, set);
    Region r = Region::None;
    if (present[0] && present[1]) r = Region::Both;
    else if (present[0]) r = Region::SingleAheadOnly;
    else if (present[1]) r = Region::PairAheadOnly;
    pd.region[static_cast<size_t>(idx)] = r;
  }
  pd.excluded.assign(excluded.begin(), excluded.end());
  std::vector<int> single(nl * np), pair(nl * np);
  for (size_t i = 0; i < nl * np; ++i) {
    single[i] = pd.region[i] == Region::SingleAheadOnly || pd.region[i] == Region::Both;
    pair[i] = pd.region[i] == Region::Both || pd.region[i] == Region::PairAheadOnly;
  }
  pd.single_curve = marching_squares(lambda_grid, phi_grid, single);
  pd.pair_curve = marching_squares(lambda_grid, phi_grid, pair);
  return pd;
}

}  // namespace rydpol

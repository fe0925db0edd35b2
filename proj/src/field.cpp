#include "rydpol/field.hpp"

#include <algorithm>
#include <cmath>

#include "rydpol/errors.hpp"

namespace rydpol {

namespace {
constexpr int kPow3[] = {1, 3, 9, 27, 81};
}

int component_count(int n) {
  if (n < 1 || n > 3) throw DomainError("field: n must be 1, 2 or 3");
  return kPow3[n];
}

int slot_label(int n, int a, int k) { return (a / kPow3[n - 1 - k]) % 3; }

int with_slot_label(int n, int a, int k, int label) {
  int w = kPow3[n - 1 - k];
  return a + (label - slot_label(n, a, k)) * w;
}

int drop_slot(int n, int a, int k) {
  int out = 0;
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    out = out * 3 + slot_label(n, a, j);
  }
  return out;
}

std::string component_name(int n, int a) {
  static const char kNames[] = {'E', 'P', 'S'};
  std::string s;
  for (int k = 0; k < n; ++k) s += kNames[slot_label(n, a, k)];
  return s;
}

int component_from_name(std::string_view name) {
  int a = 0;
  for (char ch : name) {
    int l;
    switch (ch) {
      case 'E': case 'e': l = kE; break;
      case 'P': case 'p': l = kP; break;
      case 'S': case 's': l = kS; break;
      default: throw DomainError("unknown component label '" + std::string(name) + "'");
    }
    a = a * 3 + l;
  }
  return a;
}

PolaritonField::PolaritonField(int n_photons, int points, double spacing)
    : n(n_photons), N(points), dx(spacing) {
  if (points < 1) throw DomainError("field: need at least one grid point");
  component_count(n);
  sites_ = 1;
  for (int k = 0; k < n; ++k) sites_ *= static_cast<size_t>(N);
  size_t s = 1;
  for (int k = n - 1; k >= 0; --k) {
    strides_[k] = s;
    s *= static_cast<size_t>(N);
  }
  data.assign(sites_ * static_cast<size_t>(components()), cplx(0.0, 0.0));
}

size_t PolaritonField::site(const std::array<int, 3>& idx) const {
  size_t s = 0;
  for (int k = 0; k < n; ++k) s += static_cast<size_t>(idx[k]) * strides_[k];
  return s;
}

std::array<int, 3> PolaritonField::index(size_t s) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int k = 0; k < n; ++k) {
    idx[k] = static_cast<int>(s / strides_[k]);
    s %= strides_[k];
  }
  return idx;
}

double PolaritonField::max_abs() const {
  double m = 0.0;
  for (const auto& v : data) m = std::max(m, std::abs(v));
  return m;
}

double PolaritonField::norm2(double weight) const {
  double s = 0.0;
  for (const auto& v : data) s += std::norm(v);
  return s * weight;
}

void PolaritonField::fill(cplx v) { std::fill(data.begin(), data.end(), v); }

double max_rel_diff(const PolaritonField& a, const PolaritonField& b) {
  if (a.data.size() != b.data.size()) throw DomainError("max_rel_diff: shape mismatch");
  double scale = a.max_abs();
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return scale > 0 ? m / scale : m;
}

}  // namespace rydpol

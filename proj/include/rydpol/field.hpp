#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace rydpol {

using cplx = std::complex<double>;

enum Label : int { kE = 0, kP = 1, kS = 2 };

// Component a of an n-photon field carries labels l_0..l_{n-1} with
// a = Σ l_k 3^(n-1-k); so for n=3, EEE = 0 and SSS = 26.
int component_count(int n);
int slot_label(int n, int a, int k);
int with_slot_label(int n, int a, int k, int label);
// Removes slot k: the component of the (n-1)-photon field.
int drop_slot(int n, int a, int k);
std::string component_name(int n, int a);
int component_from_name(std::string_view name);

// Complex amplitudes over an n-dimensional cube of N^n points, stored
// component-major with the last spatial index fastest.
struct PolaritonField {
  int n = 0;
  int N = 0;
  double dx = 0.0;
  double time = 0.0;
  std::vector<cplx> data;

  PolaritonField() = default;
  PolaritonField(int n_photons, int points, double spacing);

  int components() const { return component_count(n); }
  size_t sites() const { return sites_; }
  size_t stride(int k) const { return strides_[k]; }

  cplx* comp(int a) { return data.data() + static_cast<size_t>(a) * sites_; }
  const cplx* comp(int a) const { return data.data() + static_cast<size_t>(a) * sites_; }
  cplx& at(int a, size_t site) { return data[static_cast<size_t>(a) * sites_ + site]; }
  cplx at(int a, size_t site) const { return data[static_cast<size_t>(a) * sites_ + site]; }

  size_t site(const std::array<int, 3>& idx) const;
  std::array<int, 3> index(size_t site) const;

  cplx& operator()(int a, int i) { return at(a, static_cast<size_t>(i)); }
  cplx& operator()(int a, int i, int j) { return at(a, static_cast<size_t>(i) * N + j); }
  cplx& operator()(int a, int i, int j, int k) {
    return at(a, (static_cast<size_t>(i) * N + j) * N + k);
  }
  cplx operator()(int a, int i) const { return at(a, static_cast<size_t>(i)); }
  cplx operator()(int a, int i, int j) const { return at(a, static_cast<size_t>(i) * N + j); }
  cplx operator()(int a, int i, int j, int k) const {
    return at(a, (static_cast<size_t>(i) * N + j) * N + k);
  }

  double max_abs() const;
  double norm2(double weight = 1.0) const;
  void fill(cplx v);

 private:
  size_t sites_ = 0;
  std::array<size_t, 3> strides_{0, 0, 0};
};

// Largest |a-b| over all entries, relative to max|a| (absolute if a is zero).
double max_rel_diff(const PolaritonField& a, const PolaritonField& b);

}  // namespace rydpol

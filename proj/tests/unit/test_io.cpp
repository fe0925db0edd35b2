#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "rydpol/errors.hpp"
#include "rydpol/io.hpp"

using namespace rydpol;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "rydpol_io_tests";
  fs::create_directories(d);
  return d / name;
}

PolaritonField random_field(int n, int N, unsigned seed) {
  PolaritonField f(n, N, 0.37);
  f.time = 1.25;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (auto& v : f.data) v = cplx(g(rng), g(rng));
  return f;
}
}  // namespace

TEST_CASE("c128 container round trip is bitwise") {
  auto f = random_field(2, 7, 1);
  auto path = scratch("c128.rpf");
  write_field(path, f, Precision::C128, {{"tag", "x"}});
  auto in = read_field(path);
  CHECK(in.field.n == 2);
  CHECK(in.field.N == 7);
  CHECK(in.field.dx == f.dx);
  CHECK(in.field.time == f.time);
  REQUIRE(in.field.data.size() == f.data.size());
  CHECK(std::memcmp(in.field.data.data(), f.data.data(), f.data.size() * sizeof(cplx)) == 0);
  CHECK(in.header["meta"]["tag"] == "x");
  CHECK(in.header["precision"] == "c128");
}

TEST_CASE("c64 container keeps single precision") {
  auto f = random_field(3, 5, 2);
  auto path = scratch("c64.rpf");
  write_field(path, f, Precision::C64);
  auto in = read_field(path);
  for (size_t i = 0; i < f.data.size(); ++i) {
    CHECK(std::abs(in.field.data[i].real() - f.data[i].real()) <= 1e-7 * std::abs(f.data[i].real()) + 1e-38);
    CHECK(std::abs(in.field.data[i].imag() - f.data[i].imag()) <= 1e-7 * std::abs(f.data[i].imag()) + 1e-38);
  }
}

TEST_CASE("corrupt containers are rejected") {
  auto path = scratch("bad.rpf");
  {
    std::ofstream os(path, std::ios::binary);
    os << "NOTAFILE and some bytes";
  }
  CHECK_THROWS_AS(read_field(path), IoError);
  CHECK_THROWS_AS(read_field(scratch("missing.rpf")), IoError);

  auto f = random_field(1, 4, 3);
  auto trunc = scratch("trunc.rpf");
  write_field(trunc, f);
  fs::resize_file(trunc, fs::file_size(trunc) - 8);
  CHECK_THROWS_AS(read_field(trunc), IoError);
}

TEST_CASE("full axis slice is the identity") {
  auto f = random_field(2, 6, 4);
  SliceSpec spec;
  spec.component = 4;
  auto s = extract_slice(f, spec);
  REQUIRE(s.values.size() == 36);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      CHECK(s.values[i * 6 + j] == f(4, i, j));
      CHECK(s.coords[0][i * 6 + j] == i * f.dx);
      CHECK(s.coords[1][i * 6 + j] == j * f.dx);
    }
  spec.fixed = {2, -1, -1};
  auto row = extract_slice(f, spec);
  REQUIRE(row.values.size() == 6);
  for (int j = 0; j < 6; ++j) CHECK(row.values[j] == f(4, 2, j));
  spec.fixed = {6, -1, -1};
  CHECK_THROWS_AS(extract_slice(f, spec), DomainError);
}

TEST_CASE("Jacobi slice of an exchange-symmetric field is even in eta") {
  const int N = 21;
  PolaritonField f(3, N, 0.5);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double a = i * f.dx, b = j * f.dx, c = k * f.dx;
        f(0, i, j, k) = std::polar(1.0 + 0.1 * (a + b), 0.2 * a * b - 0.3 * c);
      }
  SliceSpec spec;
  spec.kind = SliceSpec::Kind::Jacobi;
  spec.fixed_coord = 0;
  spec.value = std::sqrt(3.0) * 5.0;  // centre of mass at x = 5
  spec.lo = -2;
  spec.hi = 2;
  spec.points = 9;
  auto s = extract_slice(f, spec);
  REQUIRE(s.values.size() == 81);
  CHECK(s.coord_names[0] == "eta_um");
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) CHECK(std::abs(s.values[i * 9 + j] - s.values[(8 - i) * 9 + j]) < 1e-12);

  spec.value = -100;
  CHECK_THROWS_AS(extract_slice(f, spec), DomainError);
}

TEST_CASE("a real positive field has zero phase in the slice file") {
  PolaritonField f(2, 4, 1.0);
  for (auto& v : f.data) v = cplx(2.5, 0.0);
  auto path = scratch("slice.txt");
  write_slice(path, extract_slice(f, SliceSpec{}));
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header.front() == '#');
  CHECK(header.find("arg") != std::string::npos);
  double x1, x2, re, im, ab, ph;
  int rows = 0;
  while (is >> x1 >> x2 >> re >> im >> ab >> ph) {
    CHECK(ph == 0.0);
    CHECK(ab == 2.5);
    ++rows;
  }
  CHECK(rows == 16);
}

TEST_CASE("hashing") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(parse_precision("c64") == Precision::C64);
  CHECK(to_string(Precision::C128) == "c128");
}

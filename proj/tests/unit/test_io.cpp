// SPDX-License-Identifier: Apache-2.0

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "freqcover/functional.hpp"
#include "freqcover/grid.hpp"
#include "freqcover/io.hpp"
#include "freqcover/solver.hpp"

namespace fs = std::filesystem;
using freqcover::Complex;
using freqcover::ComplexField;
using freqcover::ConstraintField;
using freqcover::Grid;
using freqcover::InnerMask;
using freqcover::IoError;

namespace {

Grid grid_1d(int n) { return Grid::create(1, {{0.0, 1.0}}, {n}); }

Grid grid_2d(int n) { return Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {n, n}); }

// 3x3 inner mask on a 4x4-cell unit square (first = 1, last = 3 per axis).
ConstraintField square_constraint(const std::vector<Complex>& values, double scale) {
  ConstraintField f;
  f.mask = InnerMask::create(grid_2d(4), 0.25);
  REQUIRE(f.mask.count() == 9);
  f.values = values;
  f.scale = scale;
  f.omega = 5.0;
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("format_double round-trips doubles through text exactly") {
  const double cases[] = {3.1415926535897931, 0.1,  1e-300, 1.0 / 3.0, -2.5e-8,
                          6.02214076e23,      -0.0, 0.0,    1.0,       -17.25};
  for (double v : cases) {
    const std::string s = freqcover::format_double(v);
    char* end = nullptr;
    const double back = std::strtod(s.c_str(), &end);
    CHECK(*end == '\0');
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
  CHECK(freqcover::format_double(0.25) == "0.25");
  CHECK(freqcover::format_double(-2.0) == "-2");
}

TEST_CASE("field_csv: 1D golden output in node order") {
  const Grid g = grid_1d(4);
  ComplexField f;
  f.values = {Complex(1, 0), Complex(0.5, -1), Complex(0, 0), Complex(-0.25, 2),
              Complex(1, 1)};
  const std::string expect =
      "x,re,im\n"
      "0,1,0\n"
      "0.25,0.5,-1\n"
      "0.5,0,0\n"
      "0.75,-0.25,2\n"
      "1,1,1\n";
  CHECK(freqcover::field_csv(g, f) == expect);
}

TEST_CASE("field_csv: 2D header and row-major x-fastest order") {
  const Grid g = grid_2d(4);
  ComplexField f;
  f.values.assign(static_cast<std::size_t>(g.node_count()), Complex(0, 0));
  f.values[static_cast<std::size_t>(g.node_index(2, 1))] = Complex(7, 0);
  const std::string csv = freqcover::field_csv(g, f);
  CHECK(csv.substr(0, 10) == "x,y,re,im\n");
  // Row for node (2, 1): line index 1 (header) + 1*5 + 2.
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t nl = csv.find('\n', pos);
    lines.push_back(csv.substr(pos, nl - pos));
    pos = nl + 1;
  }
  CHECK(lines.size() == 26);  // header + 25 nodes
  CHECK(lines[1 + 5 + 2] == "0.5,0.25,7,0");
  ComplexField wrong;
  wrong.values.assign(7, Complex(0, 0));
  CHECK_THROWS_AS((void)freqcover::field_csv(g, wrong), IoError);
}

TEST_CASE("constraint_csv: masked nodes only, with abs column") {
  const Grid g = grid_1d(8);
  ConstraintField f;
  f.mask = InnerMask::create(g, 0.125);
  REQUIRE(f.mask.count() == 7);
  f.values = {Complex(1, 0), Complex(-2, 0), Complex(3, 0), Complex(-4, 0),
              Complex(5, 0), Complex(-6, 0), Complex(7, 0)};
  f.scale = 7.0;
  const std::string expect =
      "x,re,im,abs\n"
      "0.125,1,0,1\n"
      "0.25,-2,0,2\n"
      "0.375,3,0,3\n"
      "0.5,-4,0,4\n"
      "0.625,5,0,5\n"
      "0.75,-6,0,6\n"
      "0.875,7,0,7\n";
  CHECK(freqcover::constraint_csv(g, f) == expect);
}

TEST_CASE("heatmap_pgm: golden image, top row at maximum y") {
  // Mask-linear order m = (j-1)*3 + (i-1); image prints j = 3, 2, 1.
  const ConstraintField f = square_constraint(
      {Complex(0, 0), Complex(1, 0), Complex(2, 0),    // j = 1
       Complex(4, 0), Complex(0.5, 0), Complex(1.5, 0),  // j = 2 (4 clamps)
       Complex(2, 0), Complex(-1, 0), Complex(0, 0)},  // j = 3
      2.0);
  const std::string expect =
      "P2\n"
      "3 3\n"
      "255\n"
      "255 128 0\n"
      "255 64 191\n"
      "0 128 255\n";
  CHECK(freqcover::heatmap_pgm(f) == expect);
}

TEST_CASE("heatmap_pgm: zero scale renders black") {
  const ConstraintField f =
      square_constraint(std::vector<Complex>(9, Complex(0, 0)), 0.0);
  const std::string expect =
      "P2\n"
      "3 3\n"
      "255\n"
      "0 0 0\n"
      "0 0 0\n"
      "0 0 0\n";
  CHECK(freqcover::heatmap_pgm(f) == expect);
}

TEST_CASE("mask_pgm: members white, bottom image row is the lowest y") {
  const InnerMask mask = InnerMask::create(grid_2d(4), 0.25);
  const std::string expect =
      "P2\n"
      "3 3\n"
      "255\n"
      "0 0 0\n"
      "0 0 0\n"
      "255 0 0\n";
  CHECK(freqcover::mask_pgm(mask, {0u}) == expect);

  const InnerMask line = InnerMask::create(grid_1d(8), 0.125);
  CHECK(freqcover::mask_pgm(line, {1u, 5u}) ==
        "P2\n7 1\n255\n0 255 0 0 0 255 0\n");
  CHECK_THROWS_AS((void)freqcover::mask_pgm(line, {7u}), IoError);
}

TEST_CASE("atomic_write: creates directories, overwrites, leaves no temp files") {
  const fs::path root =
      fs::temp_directory_path() / ("freqcover_io_test_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path target = root / "nested" / "a" / "out.txt";

  freqcover::atomic_write(target.string(), "first\n");
  CHECK(slurp(target) == "first\n");

  freqcover::atomic_write(target.string(), "second run\n");
  CHECK(slurp(target) == "second run\n");

  int residue = 0;
  for (const auto& entry : fs::directory_iterator(target.parent_path()))
    if (entry.path().filename().string().find(".tmp.") != std::string::npos) ++residue;
  CHECK(residue == 0);
  fs::remove_all(root);
}

TEST_SUITE_END();

// SPDX-License-Identifier: Apache-2.0

#include "freqcover/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace freqcover {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string field_csv(const Grid& grid, const ComplexField& field) {
  if (field.values.size() != static_cast<std::size_t>(grid.node_count()))
    throw IoError("field size does not match grid");
  std::ostringstream os;
  os << (grid.dim() == 2 ? "x,y,re,im\n" : "x,re,im\n");
  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < grid.nodes(0); ++i) {
      const Complex v = field.values[static_cast<std::size_t>(grid.node_index(i, j))];
      os << format_double(grid.coord(0, i));
      if (grid.dim() == 2) os << ',' << format_double(grid.coord(1, j));
      os << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
  return os.str();
}

std::string constraint_csv(const Grid& grid, const ConstraintField& field) {
  std::ostringstream os;
  os << (grid.dim() == 2 ? "x,y,re,im,abs\n" : "x,re,im,abs\n");
  const InnerMask& mask = field.mask;
  for (std::int64_t m = 0; m < mask.count(); ++m) {
    const auto [i, j] = mask.mask_ij(m);
    const Complex v = field.values[static_cast<std::size_t>(m)];
    os << format_double(grid.coord(0, i));
    if (grid.dim() == 2) os << ',' << format_double(grid.coord(1, j));
    os << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
       << format_double(std::abs(v)) << '\n';
  }
  return os.str();
}

namespace {

std::string pgm_image(const InnerMask& mask, const std::function<int(std::int64_t)>& pixel) {
  const int width = mask.nodes(0);
  const int height = mask.dim() == 2 ? mask.nodes(1) : 1;
  std::ostringstream os;
  os << "P2\n" << width << ' ' << height << "\n255\n";
  // Top image row = maximum y.
  for (int row = height - 1; row >= 0; --row) {
    for (int col = 0; col < width; ++col) {
      const std::int64_t m = static_cast<std::int64_t>(row) * width + col;
      if (col > 0) os << ' ';
      os << pixel(m);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string heatmap_pgm(const ConstraintField& field) {
  const double scale = field.scale;
  return pgm_image(field.mask, [&](std::int64_t m) {
    if (scale <= 0.0) return 0;
    const double t = std::abs(field.values[static_cast<std::size_t>(m)]) / scale;
    const double clamped = std::min(std::max(t, 0.0), 1.0);
    return static_cast<int>(std::floor(255.0 * clamped + 0.5));
  });
}

std::string mask_pgm(const InnerMask& mask, const std::vector<std::uint32_t>& nodes) {
  std::vector<std::uint8_t> member(static_cast<std::size_t>(mask.count()), 0);
  for (std::uint32_t n : nodes) {
    if (n >= member.size()) throw IoError("mask node index out of range");
    member[n] = 1;
  }
  return pgm_image(mask, [&](std::int64_t m) {
    return member[static_cast<std::size_t>(m)] ? 255 : 0;
  });
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "'");
  }
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open temporary file '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path + "'");
  }
}

}  // namespace freqcover

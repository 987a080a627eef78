// Copyright 2026 The freebound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "fb/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fb/errors.hpp"

namespace fb {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_vfg(std::ostream& out, const VectorField& field) {
  const Grid& g = field.grid();
  const int n = g.dim();
  out << "VFG1\n" << n << ' ' << field.components() << '\n';
  for (int d = 0; d < n; ++d) out << (d ? " " : "") << g.shape()[static_cast<std::size_t>(d)];
  out << '\n';
  for (int d = 0; d < n; ++d) out << (d ? " " : "") << fmt17(g.origin()[static_cast<std::size_t>(d)]);
  out << '\n' << fmt17(g.h()) << '\n';
  std::string line;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    line = std::to_string(i);
    const Point x = g.coords(i);
    for (int d = 0; d < n; ++d) {
      line += ' ';
      line += fmt17(x[static_cast<std::size_t>(d)]);
    }
    for (double v : field.at(i)) {
      line += ' ';
      line += fmt17(v);
    }
    line += '\n';
    out << line;
  }
}

void write_vfg(const std::string& path, const VectorField& field) {
  auto out = open_out(path);
  write_vfg(out, field);
  if (!out) throw FormatError("write failed for " + path);
}

VectorField read_vfg(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != "VFG1") throw FormatError("missing VFG1 header");
  int n = 0;
  int m = 0;
  if (!(in >> n >> m) || (n != 2 && n != 3) || m < 1) throw FormatError("bad VFG1 dimensions");
  Index3 shape{1, 1, 1};
  Point origin{};
  for (int d = 0; d < n; ++d) {
    if (!(in >> shape[static_cast<std::size_t>(d)])) throw FormatError("bad VFG1 shape");
  }
  for (int d = 0; d < n; ++d) {
    if (!(in >> origin[static_cast<std::size_t>(d)])) throw FormatError("bad VFG1 origin");
  }
  double h = 0.0;
  if (!(in >> h) || !(h > 0.0)) throw FormatError("bad VFG1 spacing");
  Point extent{};
  for (int d = 0; d < n; ++d) {
    const auto a = static_cast<std::size_t>(d);
    if (shape[a] < 2) throw FormatError("VFG1 shape needs at least 2 nodes per axis");
    extent[a] = static_cast<double>(shape[a] - 1) * h;
  }
  Grid grid(n, origin, extent, h);
  if (grid.shape() != shape) throw FormatError("VFG1 shape inconsistent with spacing");
  VectorField field(grid, m);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    std::size_t idx = 0;
    if (!(in >> idx) || idx != i) throw FormatError("VFG1 node " + std::to_string(i) + " missing");
    double coord = 0.0;
    for (int d = 0; d < n; ++d) {
      if (!(in >> coord)) throw FormatError("VFG1 coordinates truncated");
    }
    for (double& v : field.at(i)) {
      if (!(in >> v)) throw FormatError("VFG1 values truncated");
      if (!std::isfinite(v)) throw FormatError("VFG1 value not finite at node " + std::to_string(i));
    }
  }
  return field;
}

VectorField read_vfg(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_vfg(in);
}

void write_csv_slice(const std::string& path, const VectorField& field, int axis,
                     std::size_t index) {
  const Grid& g = field.grid();
  const int n = g.dim();
  if (axis < 0 || axis >= n || index >= g.shape()[static_cast<std::size_t>(axis)]) {
    throw DomainError("slice outside the grid");
  }
  auto out = open_out(path);
  static const char* names[] = {"x", "y", "z"};
  for (int d = 0; d < n; ++d) out << (d ? "," : "") << names[d];
  for (int c = 0; c < field.components(); ++c) out << ",u" << c + 1;
  out << '\n';
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.multi_index(i)[static_cast<std::size_t>(axis)] != index) continue;
    const Point x = g.coords(i);
    for (int d = 0; d < n; ++d) out << (d ? "," : "") << fmt17(x[static_cast<std::size_t>(d)]);
    for (double v : field.at(i)) out << ',' << fmt17(v);
    out << '\n';
  }
}

void write_pgm(const std::string& path, const VectorField& field) {
  const Grid& g = field.grid();
  // Image rows run along axis 0 (top row = last index), columns along axis 1.
  const std::size_t rows = g.shape()[0];
  const std::size_t cols = g.shape()[1];
  const std::size_t k = g.dim() == 3 ? g.shape()[2] / 2 : 0;
  double vmax = 0.0;
  std::vector<double> mag(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = field.norm(g.index({i, j, k}));
      mag[i * cols + j] = v;
      vmax = std::max(vmax, v);
    }
  }
  const double scale = vmax > 0.0 ? 65535.0 / vmax : 0.0;
  auto out = open_out(path, true);
  out << "P5\n" << cols << ' ' << rows << "\n65535\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = rows - 1 - r;
    for (std::size_t j = 0; j < cols; ++j) {
      const auto q = static_cast<unsigned>(std::lround(mag[i * cols + j] * scale));
      const char bytes[2] = {static_cast<char>((q >> 8) & 0xff), static_cast<char>(q & 0xff)};
      out.write(bytes, 2);
    }
  }
  auto side = open_out(path + ".txt");
  side << "quantity |u|\nmin 0\nmax " << fmt17(vmax) << "\nscale " << fmt17(scale)
       << "\nmaxval 65535\nslice_axis " << (g.dim() == 3 ? 2 : -1) << "\nslice_index " << k
       << '\n';
}

}  // namespace fb

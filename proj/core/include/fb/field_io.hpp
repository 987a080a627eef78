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
#pragma once

#include <iosfwd>
#include <string>

#include "fb/grid.hpp"

namespace fb {

/// VFG1 text format. Values carry 17 significant digits, so a write/read
/// round trip is exact.
void write_vfg(std::ostream& out, const VectorField& field);
void write_vfg(const std::string& path, const VectorField& field);
VectorField read_vfg(std::istream& in);
VectorField read_vfg(const std::string& path);

/// Nodes with multi-index[axis] == index, one CSV row each: coordinates
/// then components.
void write_csv_slice(const std::string& path, const VectorField& field, int axis,
                     std::size_t index);

/// |u| as a 16-bit binary PGM. 3-D fields use the middle slice of the last
/// axis. The linear scaling lands in path + ".txt".
void write_pgm(const std::string& path, const VectorField& field);

}  // namespace fb

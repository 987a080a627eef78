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
// Generated by fb_gen_barrier_table. Do not edit.

#include "fb/barriers.hpp"

namespace fb {
namespace {

constexpr BarrierTableEntry kTable[] = {
    {BarrierCase::A, 0.3, 0.005, true, 0.25, 1.9820118583378679, 0.02, 0.125, 1552, {414, 1107, 30, 0, 0, 0}},
    {BarrierCase::A, 0.3, 0.01, true, 0.25, 1.9820118583378679, 0.014999999999999999, 0.125, 3631, {720, 2847, 63, 0, 0, 0}},
    {BarrierCase::A, 0.3, 0.02, false, 0, 0, 0, 0, 6510, {1026, 5454, 30, 0, 0, 0}},
    {BarrierCase::A, 0.5, 0.005, true, 0.25, 1.1892071150027212, 0.040000000000000001, 0.125, 166, {138, 1, 26, 0, 0, 0}},
    {BarrierCase::A, 0.5, 0.01, true, 0.25, 1.1892071150027212, 0.040000000000000001, 0.125, 1552, {362, 1152, 37, 0, 0, 0}},
    {BarrierCase::A, 0.5, 0.02, true, 0.25, 1.1892071150027212, 0.029999999999999999, 0.125, 3411, {620, 2741, 49, 0, 0, 0}},
    {BarrierCase::A, 0.8, 0.005, true, 0.25, 0.7432544468767005, 0.040000000000000001, 0.125, 166, {135, 0, 30, 0, 0, 0}},
    {BarrierCase::A, 0.8, 0.01, true, 0.25, 0.7432544468767005, 0.080000000000000002, 0.125, 166, {121, 11, 33, 0, 0, 0}},
    {BarrierCase::A, 0.8, 0.02, true, 0.25, 0.7432544468767005, 0.080000000000000002, 0.125, 1458, {312, 1113, 32, 0, 0, 0}},
    {BarrierCase::B, 0.3, 0.005, true, 0.8408964152537145, 2.3570226039551581, 0.040000000000000001, 0.125, 206, {198, 0, 0, 7, 0, 0}},
    {BarrierCase::B, 0.3, 0.01, true, 1.189207115002721, 2.3570226039551581, 0.080000000000000002, 0.125, 208, {198, 0, 0, 9, 0, 0}},
    {BarrierCase::B, 0.3, 0.02, true, 1.681792830507429, 2.3570226039551581, 0.080000000000000002, 0.125, 1500, {590, 0, 898, 11, 0, 0}},
    {BarrierCase::B, 0.5, 0.005, true, 0.70710678118654757, 1.6817928305074294, 0.040000000000000001, 0.125, 238, {231, 0, 0, 6, 0, 0}},
    {BarrierCase::B, 0.5, 0.01, true, 1, 1.6817928305074294, 0.040000000000000001, 0.125, 1626, {713, 0, 904, 8, 0, 0}},
    {BarrierCase::B, 0.5, 0.02, true, 1.4142135623730951, 1.6817928305074294, 0.059999999999999998, 0.125, 2181, {910, 0, 1260, 10, 0, 0}},
    {BarrierCase::B, 0.8, 0.005, true, 0.5, 1.0511205190671429, 0.0074999999999999997, 0.125, 3701, {1416, 0, 2226, 4, 54, 0}},
    {BarrierCase::B, 0.8, 0.01, true, 0.70710678118654757, 1.0511205190671429, 0.012500000000000001, 0.125, 4396, {1713, 0, 2579, 6, 97, 0}},
    {BarrierCase::B, 0.8, 0.02, true, 1.681792830507429, 1.0511205190671429, 0.025000000000000001, 0.125, 4135, {1630, 0, 2464, 0, 40, 0}},
};

}  // namespace

std::span<const BarrierTableEntry> barrier_table() { return kTable; }

}  // namespace fb

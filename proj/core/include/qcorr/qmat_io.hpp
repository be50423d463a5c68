// Copyright 2026 The qcorr Authors
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

// QMAT v1 text format:
//
//   QMAT 1
//   DIMS d1 d2        (optional, bipartite tag)
//   rows cols
//   re im             (rows*cols lines, row-major, 17 significant digits)

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qcorr/numerics.hpp"

namespace qcorr {

struct QmatRecord {
  ComplexMatrix matrix;
  std::optional<std::array<Index, 2>> dims;
};

void write_qmat(std::ostream& out, const QmatRecord& record);
QmatRecord read_qmat(std::istream& in);

/// Writes to `path` via a temporary sibling file and rename, so a failed
/// write leaves no partial file behind.
void write_qmat_file(const std::filesystem::path& path, const QmatRecord& record);
QmatRecord read_qmat_file(const std::filesystem::path& path);

/// Formats a double with 17 significant digits (round-trips exactly).
std::string format_double(double value);

}  // namespace qcorr

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

#include "qcorr/qmat_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace qcorr {

std::string format_double(double value) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::Format, "bad number '" + tok + "'");
  }
  return v;
}

Index parse_count(const std::string& tok) {
  long long v = 0;
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), last, v);
  if (ec != std::errc() || ptr != last || v < 1) {
    throw Error(ErrorCode::Format, "bad dimension '" + tok + "'");
  }
  return static_cast<Index>(v);
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

void write_qmat(std::ostream& out, const QmatRecord& record) {
  const ComplexMatrix& m = record.matrix;
  out << "QMAT 1\n";
  if (record.dims) out << "DIMS " << (*record.dims)[0] << ' ' << (*record.dims)[1] << '\n';
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag()) << '\n';
    }
  }
}

QmatRecord read_qmat(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || split_ws(line) != std::vector<std::string>{"QMAT", "1"}) {
    throw Error(ErrorCode::Format, "missing 'QMAT 1' header");
  }
  QmatRecord record;
  if (!next_line(in, line)) throw Error(ErrorCode::Format, "truncated header");
  auto toks = split_ws(line);
  if (!toks.empty() && toks[0] == "DIMS") {
    if (toks.size() != 3) throw Error(ErrorCode::Format, "DIMS needs two values");
    record.dims = std::array<Index, 2>{parse_count(toks[1]), parse_count(toks[2])};
    if (!next_line(in, line)) throw Error(ErrorCode::Format, "truncated header");
    toks = split_ws(line);
  }
  if (toks.size() != 2) throw Error(ErrorCode::Format, "expected 'rows cols'");
  const Index rows = parse_count(toks[0]);
  const Index cols = parse_count(toks[1]);
  if (record.dims && (*record.dims)[0] * (*record.dims)[1] != rows) {
    throw Error(ErrorCode::DimensionMismatch, "DIMS product does not match rows");
  }
  record.matrix.resize(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!next_line(in, line)) throw Error(ErrorCode::Format, "truncated entry list");
      toks = split_ws(line);
      if (toks.size() != 2) throw Error(ErrorCode::Format, "entry must be 're im'");
      record.matrix(i, j) = Complex(parse_double(toks[0]), parse_double(toks[1]));
    }
  }
  if (next_line(in, line)) throw Error(ErrorCode::Format, "trailing data after entries");
  return record;
}

void write_qmat_file(const std::filesystem::path& path, const QmatRecord& record) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string());
    write_qmat(out, record);
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename to " + path.string());
  }
}

QmatRecord read_qmat_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_qmat(in);
}

}  // namespace qcorr

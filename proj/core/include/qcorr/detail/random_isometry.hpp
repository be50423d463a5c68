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

#include <random>

namespace qcorr {

template <class Rng>
ComplexMatrix random_isometry(Index m, Index r, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, r);
  return q;
}

}  // namespace qcorr

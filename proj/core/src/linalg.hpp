// Copyright 2026 The unmixkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "unmixkit/types.hpp"

namespace unmixkit::detail {

struct SymmetricEigen {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, column i pairs with eigenvalue i
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations,
/// iterated until every off-diagonal entry is below 1e-12 times the matrix
/// scale. Eigenvalues come back sorted descending; each eigenvector's
/// largest-magnitude entry is made positive so the decomposition is
/// deterministic.
SymmetricEigen symmetric_eigen(const Matrix& matrix);

}  // namespace unmixkit::detail

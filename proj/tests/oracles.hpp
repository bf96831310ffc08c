// Copyright 2026 The Sensel Authors
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

// Reference implementations the library is tested against. Everything here
// is hand-rolled (no Eigen decompositions), so an agreement failure points at
// the library, not at a shared code path.

#ifndef SENSEL_TESTS_ORACLES_HPP
#define SENSEL_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "sensel/types.hpp"

namespace sensel::oracle {

// Gaussian elimination with partial pivoting.
Vector solve_gauss(Matrix M, Vector b);
Matrix invert_gauss(const Matrix& M);

// Determinant by cofactor expansion; exponential, keep n small.
double det_cofactor(const Matrix& M);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vector symmetric_eigenvalues(Matrix M);

// Central finite differences of a scalar function.
Vector fd_gradient(const std::function<double(const Vector&)>& f,
                   const Vector& z, double step);

// Calls fn for every k-subset of {0..m-1}, ascending lexicographic order.
void for_each_subset(Index m, Index k,
                     const std::function<void(const std::vector<Index>&)>& fn);

// --- seeded instance generators ---

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed,
                     double scale = 1.0);
Vector random_vector(Index n, std::uint64_t seed, double scale = 1.0);

// G^T G + ridge I: symmetric positive definite.
Matrix random_spd(Index n, std::uint64_t seed, double ridge = 0.5);

// Random symmetric matrix with diagonal set to the off-diagonal row sum plus
// a margin: strictly diagonally dominant, positive diagonal.
Matrix random_diag_dominant(Index n, std::uint64_t seed, double margin = 0.3);

// Random tree-structured symmetric positive definite matrix (each node j>0
// links to one earlier node).
Matrix random_tree_spd(Index n, std::uint64_t seed);

// Random symmetric matrix with a weak diagonal; usually indefinite and far
// from dominant.
Matrix random_symmetric_weak_diag(Index n, std::uint64_t seed);

}  // namespace sensel::oracle

#endif  // SENSEL_TESTS_ORACLES_HPP

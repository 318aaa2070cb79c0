// Copyright 2026 The mixlab authors
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

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mixlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct HermitianEigResult {
    RealVector eigenvalues;    // ascending
    ComplexMatrix eigenvectors;  // unitary, columns match eigenvalues
};

/// max |A(i,j) - conj(A(j,i))| <= tol_scale * max|A| ?
bool is_hermitian(const ComplexMatrix& a, double tol_scale = 1e-12);

/// Full Hermitian eigendecomposition. Rejects non-Hermitian input and
/// propagates solver non-convergence as std::runtime_error.
HermitianEigResult hermitian_eig(const ComplexMatrix& a);

/// Eigenvalues (ascending) of a Hermitian matrix, skipping the eigenvectors.
RealVector hermitian_eigenvalues(const ComplexMatrix& a);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& a);

/// exp(t*A) by scaling and squaring of a truncated Taylor series whose order
/// is picked from the scaled norm; relative tolerance 1e-10.
ComplexMatrix matrix_exp(const ComplexMatrix& a, double t = 1.0);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace out every tensor factor except `keep`. `dims` lists the factor
/// dimensions in tensor order and must multiply to the matrix size.
ComplexMatrix partial_trace(const ComplexMatrix& a,
                            const std::vector<Eigen::Index>& dims,
                            std::size_t keep);

}  // namespace mixlab

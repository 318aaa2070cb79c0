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

#include "mixlab/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mixlab {

bool is_hermitian(const ComplexMatrix& a, double tol_scale) {
    if (a.rows() != a.cols()) return false;
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    return dev <= tol_scale * scale;
}

HermitianEigResult hermitian_eig(const ComplexMatrix& a) {
    if (!is_hermitian(a)) {
        std::ostringstream msg;
        msg << "hermitian_eig: input is not Hermitian within tolerance "
            << "(max deviation " << (a - a.adjoint()).cwiseAbs().maxCoeff()
            << ", max entry " << a.cwiseAbs().maxCoeff() << ")";
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
    }
    return solver.eigenvalues();
}

double trace_norm(const ComplexMatrix& a) {
    if (!is_hermitian(a)) {
        throw std::invalid_argument("trace_norm: input is not Hermitian within tolerance");
    }
    return hermitian_eigenvalues(a).cwiseAbs().sum();
}

ComplexMatrix matrix_exp(const ComplexMatrix& a, double t) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("matrix_exp: matrix must be square");
    }
    if (t < 0.0) {
        throw std::invalid_argument("matrix_exp: t must be nonnegative");
    }
    const Eigen::Index n = a.rows();
    ComplexMatrix m = t * a;
    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm1) || norm1 > 1e6) {
        std::ostringstream msg;
        msg << "matrix_exp: ||tA||_1 = " << norm1 << " is out of range";
        throw std::overflow_error(msg.str());
    }

    // Scale so the series converges fast, then square back.
    int squarings = 0;
    if (norm1 > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
        m /= std::pow(2.0, squarings);
    }

    ComplexMatrix result = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    constexpr double kTol = 1e-10;
    constexpr int kMaxOrder = 40;
    for (int k = 1; k <= kMaxOrder; ++k) {
        term = (term * m) / static_cast<double>(k);
        result += term;
        const double tn = term.cwiseAbs().colwise().sum().maxCoeff();
        const double rn = result.cwiseAbs().colwise().sum().maxCoeff();
        if (tn <= 0.01 * kTol * rn) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& a,
                            const std::vector<Eigen::Index>& dims,
                            std::size_t keep) {
    Eigen::Index total = 1;
    for (Eigen::Index d : dims) total *= d;
    if (a.rows() != a.cols() || a.rows() != total || keep >= dims.size()) {
        throw std::invalid_argument("partial_trace: dimension mismatch");
    }
    const Eigen::Index dk = dims[keep];
    Eigen::Index left = 1, right = 1;
    for (std::size_t i = 0; i < keep; ++i) left *= dims[i];
    for (std::size_t i = keep + 1; i < dims.size(); ++i) right *= dims[i];

    // Index layout: row = (l*dk + k)*right + r, tensor order left|keep|right.
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index k1 = 0; k1 < dk; ++k1) {
        for (Eigen::Index k2 = 0; k2 < dk; ++k2) {
            Complex acc = 0.0;
            for (Eigen::Index l = 0; l < left; ++l) {
                for (Eigen::Index r = 0; r < right; ++r) {
                    const Eigen::Index row = (l * dk + k1) * right + r;
                    const Eigen::Index col = (l * dk + k2) * right + r;
                    acc += a(row, col);
                }
            }
            out(k1, k2) = acc;
        }
    }
    return out;
}

}  // namespace mixlab

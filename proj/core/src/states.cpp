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

#include "mixlab/states.hpp"

#include <stdexcept>

namespace mixlab {

ComplexVector sample_haar_pure(Eigen::Index d, SplitRng& rng) {
    if (d < 2) throw std::invalid_argument("sample_haar_pure: d must be >= 2");
    ComplexVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.complex_normal();
    v /= v.norm();
    return v;
}

ComplexMatrix sample_induced(Eigen::Index d, Eigen::Index d_b, SplitRng& rng) {
    if (d < 2 || d_b < 1) throw std::invalid_argument("sample_induced: need d >= 2, d_b >= 1");
    if (d * d_b > 4096) throw std::invalid_argument("sample_induced: d*d_b exceeds 4096");
    const ComplexVector psi = sample_haar_pure(d * d_b, rng);
    // rho_A(i,j) = sum_b psi[(i,b)] conj(psi[(j,b)]), ancilla index fastest
    Eigen::Map<const ComplexMatrix> m(psi.data(), d_b, d);
    ComplexMatrix rho = m.transpose() * m.conjugate();
    rho = (rho + rho.adjoint()) / 2.0;
    return rho;
}

ComplexMatrix sample_state(const EnsembleSpec& spec, std::uint64_t index) {
    SplitRng rng(spec.seed, index);
    switch (spec.kind) {
        case EnsembleSpec::Kind::haar_pure: {
            const ComplexVector psi = sample_haar_pure(spec.d, rng);
            return psi * psi.adjoint();
        }
        case EnsembleSpec::Kind::induced:
            return sample_induced(spec.d, spec.d_b, rng);
        case EnsembleSpec::Kind::basis: {
            ComplexMatrix rho = ComplexMatrix::Zero(spec.d, spec.d);
            rho(index % spec.d, index % spec.d) = 1.0;
            return rho;
        }
    }
    throw std::logic_error("sample_state: unknown ensemble kind");
}

double haar_moment_mean(const ComplexMatrix& o) {
    if (!is_hermitian(o)) throw std::invalid_argument("haar_moment_mean: O must be Hermitian");
    return o.trace().real() / static_cast<double>(o.rows());
}

double haar_moment_var(const ComplexMatrix& o) {
    if (!is_hermitian(o)) throw std::invalid_argument("haar_moment_var: O must be Hermitian");
    const double d = static_cast<double>(o.rows());
    const double tr = o.trace().real();
    const double tr2 = (o * o).trace().real();
    return (tr2 - tr * tr / d) / (d * (d + 1.0));
}

ComplexMatrix logical_marginal(const ComplexVector& psi, Eigen::Index d_log, Eigen::Index n_syn) {
    if (psi.size() != d_log * n_syn) {
        throw std::invalid_argument("logical_marginal: amplitude length must be D*N");
    }
    // Syndrome index fastest: psi[(a, s)] = psi[a*n_syn + s].
    Eigen::Map<const ComplexMatrix> m(psi.data(), n_syn, d_log);
    ComplexMatrix rho = m.transpose() * m.conjugate();
    return (rho + rho.adjoint()) / 2.0;
}

double logical_overlap(const ComplexVector& psi, Eigen::Index d_log, Eigen::Index n_syn) {
    const ComplexMatrix rho = logical_marginal(psi, d_log, n_syn);
    const ComplexMatrix ref = ComplexMatrix::Identity(d_log, d_log) / static_cast<double>(d_log);
    return trace_norm(rho - ref);
}

void check_density_matrix(const ComplexMatrix& rho) {
    if (!is_hermitian(rho)) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    // Partial traces of rounded pure states can dip slightly below zero.
    if (hermitian_eigenvalues(rho).minCoeff() < -1e-10) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

}  // namespace mixlab

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

#include <cstdint>

#include "mixlab/linalg.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

/// Which random initial-state family a sweep draws from.
struct EnsembleSpec {
    enum class Kind { haar_pure, induced, basis };
    Kind kind = Kind::haar_pure;
    Eigen::Index d = 2;
    Eigen::Index d_b = 1;  // ancilla dimension, induced only
    std::uint64_t seed = 0;
};

/// Haar-random unit vector: normalized iid standard complex Gaussians.
ComplexVector sample_haar_pure(Eigen::Index d, SplitRng& rng);

/// Partial trace over a d_b-dimensional ancilla of a Haar-random pure state
/// on dimension d*d_b.
ComplexMatrix sample_induced(Eigen::Index d, Eigen::Index d_b, SplitRng& rng);

/// Density matrix for ensemble member `index` (deterministic in (spec, index)).
ComplexMatrix sample_state(const EnsembleSpec& spec, std::uint64_t index);

/// E_Haar[<psi|O|psi>] = Tr(O)/d for Hermitian O.
double haar_moment_mean(const ComplexMatrix& o);

/// Var_Haar(<psi|O|psi>) = (Tr(O^2) - Tr(O)^2/d) / (d(d+1)).
double haar_moment_var(const ComplexMatrix& o);

/// Trace distance of the logical marginal of psi (on C^D (x) C^N) from I/D.
double logical_overlap(const ComplexVector& psi, Eigen::Index d_log, Eigen::Index n_syn);

/// Logical marginal Tr_syn |psi><psi| of a state on C^D (x) C^N.
ComplexMatrix logical_marginal(const ComplexVector& psi, Eigen::Index d_log, Eigen::Index n_syn);

/// Throws unless rho is Hermitian, unit trace and PSD within tolerance.
void check_density_matrix(const ComplexMatrix& rho);

}  // namespace mixlab

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

#include <string>
#include <variant>
#include <vector>

#include "mixlab/linalg.hpp"

namespace mixlab {

/// Dominant nonstationary eigenoperator pair, normalized so ||R2||_1 = 1 and
/// Tr(L2^dag R2) = 1.
struct SlowMode {
    ComplexMatrix l2;
    ComplexMatrix r2;
    double gamma2 = 0.0;
};

/// Local thermalizing chain with product Gibbs fixed point; the jump rates
/// obey gamma_up/gamma_down = exp(-beta*omega) and gamma_up + gamma_down = 1.
struct DaviesParams {
    int n_sites = 1;
    double beta = 1.0;
    double omega = 1.0;

    double p_excited() const;    // Gibbs weight of |1> per site
    double gamma_up() const;
    double gamma_down() const;
};

/// Unital Pauli-Lindblad chain with a weakly damped boundary Z mode.
/// Site-1 decay rates are (X,Y,Z) -> (gamma, gamma+delta, delta); bulk sites
/// decay at (gamma, 2*gamma, gamma). Requires 0 < delta < gamma.
struct PauliBoundaryParams {
    int n_sites = 1;
    double delta = 0.25;
    double gamma = 4.0;
};

/// Biased single-particle hopping chain, population sector only.
struct SkinParams {
    int n_sites = 2;
    double gamma_r = 1.6;
    double gamma_l = 0.4;
    double lambda = 1.0;
};

/// One protected basis state coupled to a fast bulk through leakage eta.
struct ProtectedParams {
    Eigen::Index d = 3;
    double eta = 0.1;

    double gamma_slow() const;   // eta * (1 + 1/(d-1))
    double gamma_bulk() const;   // 1 + 1/(d-2) + eta/(d-1)
};

/// Logical depolarization at rate eta tensored with a unit-rate syndrome
/// reset toward pi.
struct LogicalProductParams {
    Eigen::Index d_log = 2;
    Eigen::Index n_syn = 2;
    double eta = 0.1;
    ComplexMatrix pi;  // stationary syndrome state on C^{n_syn}
};

/// Local-qubit refinement: one logical qubit depolarized at rate e^{-c*L},
/// L syndrome qubits reset to the one-qubit Gibbs state at rate gamma.
struct LogicalMicroParams {
    int n_syn = 1;
    double beta = 1.8;
    double gamma = 2.0;
    double c = 0.75;

    double eta() const;          // exp(-c * n_syn)
    double p_excited() const;    // exp(-beta)/(1+exp(-beta))
};

struct JumpOperator {
    ComplexMatrix op;
    double rate = 1.0;
};

/// Explicit jump-operator list for the dense superoperator oracle (H = 0).
struct DenseGenericParams {
    std::vector<JumpOperator> jumps;
};

// ---------------------------------------------------------------------------
// Exact finite-time channels. Each acts linearly on an arbitrary matrix of
// the right dimension, so traceless operators can be pushed through as well.
// ---------------------------------------------------------------------------

ComplexMatrix davies_evolve(const ComplexMatrix& x, double t, const DaviesParams& p);
ComplexMatrix pauli_boundary_evolve(const ComplexMatrix& x, double t, const PauliBoundaryParams& p);
ComplexMatrix protected_evolve(const ComplexMatrix& x, double t, const ProtectedParams& p);
ComplexMatrix logical_product_evolve(const ComplexMatrix& x, double t, const LogicalProductParams& p);
ComplexMatrix logical_micro_evolve(const ComplexMatrix& x, double t, const LogicalMicroParams& p);

/// Classical generator of the biased hopping chain; columns sum to zero.
RealMatrix skin_generator(const SkinParams& p);

/// exp(t*Q) p by uniformization (nonnegative series; no cancellation).
RealVector skin_evolve(const RealVector& p, double t, const RealMatrix& q);

/// Dense superoperator exponential for a pure-dissipator Lindbladian;
/// verification oracle, capped at d <= 32.
ComplexMatrix dense_lindblad_evolve(const ComplexMatrix& x, double t,
                                    const std::vector<JumpOperator>& jumps);

/// vec-convention superoperator matrix of sum_k rate_k D_{L_k}.
ComplexMatrix lindblad_superoperator(const std::vector<JumpOperator>& jumps, Eigen::Index d);

// ---------------------------------------------------------------------------
// ChannelSpec: one model family plus parameters behind a uniform surface.
// ---------------------------------------------------------------------------

class ChannelSpec {
public:
    using Family = std::variant<DaviesParams, PauliBoundaryParams, SkinParams,
                                ProtectedParams, LogicalProductParams,
                                LogicalMicroParams, DenseGenericParams>;

    explicit ChannelSpec(Family family);  // validates parameter domains

    Eigen::Index dim() const;
    bool population_sector() const;  // true for the skin family
    std::string family_name() const;
    const Family& family() const { return family_; }

    /// Apply the exact channel for time t (quantum families).
    ComplexMatrix evolve(const ComplexMatrix& x, double t) const;

    /// Population-sector propagation (skin family).
    RealVector evolve_population(const RealVector& p, double t) const;

    ComplexMatrix stationary() const;
    RealVector stationary_population() const;

    /// Dominant nonstationary mode; throws for families without a simple
    /// real dominant mode in the configured regime.
    SlowMode slow_mode() const;

    /// Jump-operator realization of the generator, for the dense oracle.
    std::vector<JumpOperator> oracle_jump_operators() const;

    /// Cached classical generator (skin family only).
    const RealMatrix& population_generator() const;

private:
    Family family_;
    RealMatrix skin_q_;  // cached for the skin family
};

}  // namespace mixlab

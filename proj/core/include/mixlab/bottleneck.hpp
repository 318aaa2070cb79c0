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

#include <optional>

#include "mixlab/mixing.hpp"
#include "mixlab/models.hpp"

namespace mixlab {

/// Moments and norms of the slow left eigenoperator under Haar sampling.
struct OverlapStats {
    double m2 = 0.0;          // Tr(L2)/d
    double v2 = 0.0;          // Haar variance of a2
    double op_norm_l2 = 0.0;  // ||L2||_inf
    double hs_norm_l2 = 0.0;  // ||L2||_2
    std::optional<double> empirical_quantile;  // measured q_{1-delta}(|a2|)
};

/// One-mode bottleneck bounds at threshold epsilon.
struct GapPrediction {
    double gamma2 = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;
    double t_worst_lb = 0.0;
    double t_typ_ub = 0.0;
    double gap_lb = 0.0;
    bool informative = false;  // false when alpha >= ||L2||_inf scale
};

/// Heuristic crossing-window estimate, flagged as such.
struct WindowEstimate {
    double value = 0.0;
    bool heuristic = true;
};

struct ProtectedTypBound {
    double value = 0.0;     // log(8/epsilon)
    bool applicable = false;  // epsilon >= 4(1+log(1/delta))/(d-1)
};

/// a2 = Tr(L2^dag rho); real for Hermitian L2.
double slow_overlap(const ComplexMatrix& rho, const SlowMode& mode);
double slow_overlap(const ComplexVector& psi, const SlowMode& mode);

OverlapStats overlap_stats(const SlowMode& mode);

// --- alpha_typ realizations (high-probability upper scales for |a2|) -------

double alpha_levy(double op_norm, double m2, Eigen::Index d, double delta, double c2);
double alpha_moment(double m2, double v2, double delta);
double alpha_skin(double xi, Eigen::Index n_sites, double delta, double op_norm);
double alpha_boundary(double op_norm_block, Eigen::Index q, Eigen::Index n_sites,
                      double delta, double c2);
double alpha_induced(double tr_l2, double tr_l2_sq, Eigen::Index d, Eigen::Index d_b,
                     double delta);
double alpha_design_defect(double m0, double v0, double op_norm, double eps2, double delta);
double alpha_logical(Eigen::Index d_log, Eigen::Index n_syn, double delta);

/// Three bounds of the one-mode law; gap_lb is epsilon-free by construction.
GapPrediction one_mode_bounds(double gamma2, double kappa, double op_norm,
                              double alpha, double epsilon);

/// Quantile of |a2| for the boundary chain, where a2 = 2 B - 1 with
/// B ~ Beta(2^{L-1}, 2^{L-1}).
double beta_a2_quantile(int n_sites, double level);

/// Regularized incomplete beta function I_x(a,b) (series / continued
/// fraction, tolerance 1e-10) and its inverse by bisection.
double reg_inc_beta(double a, double b, double x);
double beta_quantile(double a, double b, double p);

/// Xi_t^2 = sum_a ||Lambda_t(F_a)||_2^2 over a traceless Hermitian
/// orthonormal basis (generalized Gell-Mann matrices); basis independent.
double xi_sq(const ChannelSpec& spec, double t);

/// Psi_t^2 = sum_a ||Lambda_t^dag(F_a)||_inf^2 over the same basis.
double psi_sq(const ChannelSpec& spec, double t);

/// Heisenberg-picture action of the channel on an observable.
ComplexMatrix evolve_dual(const ChannelSpec& spec, const ComplexMatrix& x, double t);

/// Chebyshev tail bound d * c_P * Xi_t^2 / eta^2 on |g_t - mu_t| >= eta.
double ensemble_tail_bound(double c_p, double xi_sq_value, Eigen::Index d, double eta);

/// Isotropy constants: 1/(d(d+1)) for exact designs, 1/(d(d d_B + 1)) induced.
double exact_design_cp(Eigen::Index d);
double induced_cp(Eigen::Index d, Eigen::Index d_b);

/// Bound 3 eps2 ||L2||_inf^2 on |Var_nu(a2) - v0| for eps2-approximate designs.
double design_variance_defect(double op_norm, double eps2);

/// H(eps) ~ V / (eps * gamma2): vertical width divided by the crossing slope.
WindowEstimate window_estimate(double v_cross, double epsilon, double gamma2);

enum class WindowScalingMode { poly, exp };

/// L-dependence of the window under a closing rate: L^{alpha-1/2} (poly) or
/// e^{kappa L}/sqrt(L) (exp). The 1/epsilon prefactor is left out.
WindowEstimate window_scaling(double alpha_or_kappa, Eigen::Index n_sites,
                              WindowScalingMode mode);

/// t_typ upper bound log(8/eps) for the protected family, with its
/// applicability condition evaluated.
ProtectedTypBound protected_typ_bound(Eigen::Index d, double delta, double epsilon);

/// Empirical one-mode envelope defect: max over grid times >= t_min of
/// |g_t / (|a2| e^{-gamma2 t}) - 1|.
double estimate_kappa(const RelaxationCurve& curve, double a2_abs, double gamma2,
                      double t_min);

}  // namespace mixlab

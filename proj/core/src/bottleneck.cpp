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

#include "mixlab/bottleneck.hpp"

#include <cmath>
#include <stdexcept>

namespace mixlab {

double slow_overlap(const ComplexMatrix& rho, const SlowMode& mode) {
    if (rho.rows() != mode.l2.rows() || rho.cols() != mode.l2.cols()) {
        throw std::invalid_argument("slow_overlap: dimension mismatch");
    }
    return (mode.l2.adjoint() * rho).trace().real();
}

double slow_overlap(const ComplexVector& psi, const SlowMode& mode) {
    if (psi.size() != mode.l2.rows()) {
        throw std::invalid_argument("slow_overlap: dimension mismatch");
    }
    return (psi.adjoint() * mode.l2 * psi)(0, 0).real();
}

OverlapStats overlap_stats(const SlowMode& mode) {
    OverlapStats s;
    const double d = static_cast<double>(mode.l2.rows());
    const double tr = mode.l2.trace().real();
    const double tr2 = (mode.l2 * mode.l2).trace().real();
    s.m2 = tr / d;
    s.v2 = (tr2 - tr * tr / d) / (d * (d + 1.0));
    s.hs_norm_l2 = std::sqrt(tr2);
    s.op_norm_l2 = hermitian_eigenvalues(mode.l2).cwiseAbs().maxCoeff();
    return s;
}

namespace {

void require_delta(double delta) {
    if (!(delta > 0) || !(delta < 1)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
}

}  // namespace

double alpha_levy(double op_norm, double m2, Eigen::Index d, double delta, double c2) {
    require_delta(delta);
    if (!(c2 > 0)) throw std::invalid_argument("alpha_levy: c2 must be positive");
    return std::abs(m2) + op_norm * std::sqrt(std::log(2.0 / delta) / (c2 * static_cast<double>(d)));
}

double alpha_moment(double m2, double v2, double delta) {
    require_delta(delta);
    if (v2 < 0) throw std::invalid_argument("alpha_moment: negative variance");
    return std::abs(m2) + std::sqrt(v2 / delta);
}

double alpha_skin(double xi, Eigen::Index n_sites, double delta, double op_norm) {
    require_delta(delta);
    if (!(xi > 0)) throw std::invalid_argument("alpha_skin: xi must be positive");
    const double c_xi = 1.0 / (1.0 - std::exp(-1.0 / (2.0 * xi)));
    return c_xi * c_xi / (delta * static_cast<double>(n_sites)) * op_norm;
}

double alpha_boundary(double op_norm_block, Eigen::Index q, Eigen::Index n_sites,
                      double delta, double c2) {
    require_delta(delta);
    if (!(c2 > 0)) throw std::invalid_argument("alpha_boundary: c2 must be positive");
    const double d = std::pow(static_cast<double>(q), static_cast<double>(n_sites));
    return op_norm_block * std::sqrt(std::log(2.0 / delta) / (c2 * d));
}

double alpha_induced(double tr_l2, double tr_l2_sq, Eigen::Index d, Eigen::Index d_b,
                     double delta) {
    require_delta(delta);
    const double dd = static_cast<double>(d);
    const double var = (tr_l2_sq - tr_l2 * tr_l2 / dd) /
                       (dd * (dd * static_cast<double>(d_b) + 1.0));
    return std::abs(tr_l2 / dd) + std::sqrt(var / delta);
}

double alpha_design_defect(double m0, double v0, double op_norm, double eps2, double delta) {
    require_delta(delta);
    if (eps2 < 0) throw std::invalid_argument("alpha_design_defect: eps2 must be >= 0");
    return std::abs(m0) + eps2 * op_norm +
           std::sqrt((v0 + 3.0 * eps2 * op_norm * op_norm) / delta);
}

double alpha_logical(Eigen::Index d_log, Eigen::Index n_syn, double delta) {
    require_delta(delta);
    const double dl = static_cast<double>(d_log);
    return std::sqrt((dl * dl - 1.0) / (delta * (dl * static_cast<double>(n_syn) + 1.0)));
}

GapPrediction one_mode_bounds(double gamma2, double kappa, double op_norm,
                              double alpha, double epsilon) {
    if (!(gamma2 > 0)) throw std::invalid_argument("one_mode_bounds: gamma2 must be positive");
    if (!(kappa >= 0) || !(kappa < 1)) {
        throw std::invalid_argument("one_mode_bounds: kappa must lie in [0,1)");
    }
    if (!(alpha > 0) || !(epsilon > 0)) {
        throw std::invalid_argument("one_mode_bounds: alpha and epsilon must be positive");
    }
    GapPrediction g;
    g.gamma2 = gamma2;
    g.kappa = kappa;
    g.alpha = alpha;
    g.t_worst_lb = std::log((1.0 - kappa) * op_norm / epsilon) / gamma2;
    g.t_typ_ub = std::log((1.0 + kappa) * alpha / epsilon) / gamma2;
    g.gap_lb = std::log((1.0 - kappa) * op_norm / ((1.0 + kappa) * alpha)) / gamma2;
    g.informative = g.gap_lb > 0.0;
    return g;
}

// ---------------------------------------------------------------------------
// Regularized incomplete beta function (continued fraction, Lentz)
// ---------------------------------------------------------------------------

namespace {

double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-14;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("reg_inc_beta: need a,b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fast for x < (a+1)/(a+b+2).
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          b * std::log(1.0 - x) + a * std::log(x)) *
                     beta_cont_frac(b, a, 1.0 - x) / b;
}

double beta_quantile(double a, double b, double p) {
    if (!(p >= 0) || !(p <= 1)) throw std::invalid_argument("beta_quantile: p outside [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(a, b, mid) < p) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

double beta_a2_quantile(int n_sites, double level) {
    if (n_sites < 1) throw std::invalid_argument("beta_a2_quantile: need n_sites >= 1");
    if (!(level > 0) || !(level < 1)) {
        throw std::invalid_argument("beta_a2_quantile: level must lie in (0,1)");
    }
    const double shape = std::pow(2.0, n_sites - 1);
    // |a2| = |2B - 1| is symmetric about B = 1/2.
    const double qb = beta_quantile(shape, shape, (1.0 + level) / 2.0);
    return 2.0 * (qb - 0.5);
}

// ---------------------------------------------------------------------------
// Xi / Psi transfer functionals over a generalized Gell-Mann basis
// ---------------------------------------------------------------------------

namespace {

// Enumerate the d^2-1 traceless Hermitian HS-orthonormal basis matrices:
// symmetric and antisymmetric off-diagonal pairs, then diagonal ladders.
void for_each_gell_mann(Eigen::Index d, const std::function<void(const ComplexMatrix&)>& fn) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix f = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            f.setZero();
            f(i, j) = inv_sqrt2;
            f(j, i) = inv_sqrt2;
            fn(f);
            f(i, j) = Complex(0, -inv_sqrt2);
            f(j, i) = Complex(0, inv_sqrt2);
            fn(f);
        }
    }
    for (Eigen::Index l = 1; l < d; ++l) {
        f.setZero();
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1.0));
        for (Eigen::Index j = 0; j < l; ++j) f(j, j) = norm;
        f(l, l) = -static_cast<double>(l) * norm;
        fn(f);
    }
}

void check_xi_domain(const ChannelSpec& spec) {
    if (spec.population_sector()) {
        throw std::invalid_argument("xi/psi: undefined for the population-sector family");
    }
    if (spec.dim() > 64) throw std::invalid_argument("xi/psi: d > 64 exceeds the size guard");
}

}  // namespace

double xi_sq(const ChannelSpec& spec, double t) {
    check_xi_domain(spec);
    double acc = 0.0;
    for_each_gell_mann(spec.dim(), [&](const ComplexMatrix& f) {
        acc += spec.evolve(f, t).squaredNorm();
    });
    return acc;
}

double psi_sq(const ChannelSpec& spec, double t) {
    check_xi_domain(spec);
    double acc = 0.0;
    for_each_gell_mann(spec.dim(), [&](const ComplexMatrix& f) {
        const double opn = hermitian_eigenvalues(evolve_dual(spec, f, t)).cwiseAbs().maxCoeff();
        acc += opn * opn;
    });
    return acc;
}

ComplexMatrix evolve_dual(const ChannelSpec& spec, const ComplexMatrix& x, double t) {
    return std::visit(
        [&](const auto& p) -> ComplexMatrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) {
                // Schrodinger and Heisenberg pictures agree on coherences;
                // the population sector transposes. Conjugating by the
                // swap of the population mixing is what the adjoint does:
                // Lambda^dag = Lambda with p0 <-> p1 column weights swapped.
                // Implemented through the dual of each one-qubit factor.
                const double p1 = p.p_excited();
                const double e = std::exp(-t), eh = std::exp(-t / 2.0);
                ComplexMatrix out = x;
                for (int site = 0; site < p.n_sites; ++site) {
                    ComplexMatrix next = out;
                    const Eigen::Index d = out.rows();
                    const Eigen::Index mask = Eigen::Index(1) << (p.n_sites - 1 - site);
                    for (Eigen::Index r = 0; r < d; ++r) {
                        if (r & mask) continue;
                        const Eigen::Index r1 = r | mask;
                        for (Eigen::Index c = 0; c < d; ++c) {
                            if (c & mask) continue;
                            const Eigen::Index c1 = c | mask;
                            const Complex a00 = out(r, c), a11 = out(r1, c1);
                            const Complex a01 = out(r, c1), a10 = out(r1, c);
                            // Transpose of the population 2x2 block.
                            next(r, c) = (e + (1 - e) * (1 - p1)) * a00 + (1 - e) * p1 * a11;
                            next(r1, c1) = (1 - e) * (1 - p1) * a00 + (e + (1 - e) * p1) * a11;
                            next(r, c1) = eh * a01;
                            next(r1, c) = eh * a10;
                        }
                    }
                    out = next;
                }
                return out;
            } else if constexpr (std::is_same_v<T, PauliBoundaryParams>) {
                return pauli_boundary_evolve(x, t, p);  // unital Pauli: self-dual
            } else if constexpr (std::is_same_v<T, ProtectedParams>) {
                return protected_evolve(x, t, p);  // symmetric rates: self-dual
            } else if constexpr (std::is_same_v<T, LogicalProductParams>) {
                const double el = std::exp(-p.eta * t), es = std::exp(-t);
                const std::vector<Eigen::Index> dims = {p.d_log, p.n_syn};
                const ComplexMatrix id_syn = ComplexMatrix::Identity(p.n_syn, p.n_syn);
                const ComplexMatrix id_log = ComplexMatrix::Identity(p.d_log, p.d_log);
                const ComplexMatrix weighted =
                    partial_trace(ComplexMatrix(kron(id_log, p.pi) * x), dims, 0);
                const Complex tr_pix = (kron(id_log, p.pi) * x).trace();
                return el * es * x + el * (1 - es) * kron(weighted, id_syn) +
                       (1 - el) * es *
                           kron(id_log, partial_trace(x, dims, 1)) / static_cast<double>(p.d_log) +
                       (1 - el) * (1 - es) * (tr_pix / static_cast<double>(p.d_log)) *
                           kron(id_log, id_syn);
            } else if constexpr (std::is_same_v<T, LogicalMicroParams>) {
                // Dual of the qubit reset: transpose the population block.
                const int n = p.n_syn + 1;
                auto dual_site = [&](const ComplexMatrix& in, int site, double rate,
                                     double p1) {
                    const double e = std::exp(-rate * t);
                    const Eigen::Index d = in.rows();
                    const Eigen::Index mask = Eigen::Index(1) << (n - 1 - site);
                    ComplexMatrix next = in;
                    for (Eigen::Index r = 0; r < d; ++r) {
                        if (r & mask) continue;
                        const Eigen::Index r1 = r | mask;
                        for (Eigen::Index c = 0; c < d; ++c) {
                            if (c & mask) continue;
                            const Eigen::Index c1 = c | mask;
                            const Complex a00 = in(r, c), a11 = in(r1, c1);
                            next(r, c) = (e + (1 - e) * (1 - p1)) * a00 + (1 - e) * p1 * a11;
                            next(r1, c1) = (1 - e) * (1 - p1) * a00 + (e + (1 - e) * p1) * a11;
                            next(r, c1) = e * in(r, c1);
                            next(r1, c) = e * in(r1, c);
                        }
                    }
                    return next;
                };
                ComplexMatrix out = dual_site(x, 0, p.eta(), 0.5);
                for (int site = 1; site < n; ++site) {
                    out = dual_site(out, site, p.gamma, p.p_excited());
                }
                return out;
            } else if constexpr (std::is_same_v<T, DenseGenericParams>) {
                // D_L^dag(X) = L^dag X L - (1/2){L^dag L, X}; build the dual
                // superoperator directly.
                const Eigen::Index d = x.rows();
                ComplexMatrix sup = ComplexMatrix::Zero(d * d, d * d);
                const ComplexMatrix id = ComplexMatrix::Identity(d, d);
                for (const auto& j : p.jumps) {
                    const ComplexMatrix ldl = j.op.adjoint() * j.op;
                    sup += j.rate * (kron(j.op.transpose(), j.op.adjoint()) -
                                     0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
                }
                const ComplexMatrix prop = matrix_exp(sup, t);
                const Eigen::Map<const ComplexVector> vec_in(x.data(), d * d);
                ComplexVector vec_out = prop * vec_in;
                return Eigen::Map<const ComplexMatrix>(vec_out.data(), d, d);
            } else {
                throw std::invalid_argument("evolve_dual: population-sector family");
            }
        },
        spec.family());
}

double ensemble_tail_bound(double c_p, double xi_sq_value, Eigen::Index d, double eta) {
    if (!(c_p > 0) || !(eta > 0)) {
        throw std::invalid_argument("ensemble_tail_bound: c_p and eta must be positive");
    }
    return static_cast<double>(d) * c_p * xi_sq_value / (eta * eta);
}

double exact_design_cp(Eigen::Index d) {
    return 1.0 / (static_cast<double>(d) * (static_cast<double>(d) + 1.0));
}

double induced_cp(Eigen::Index d, Eigen::Index d_b) {
    return 1.0 / (static_cast<double>(d) * (static_cast<double>(d) * d_b + 1.0));
}

double design_variance_defect(double op_norm, double eps2) {
    if (eps2 < 0) throw std::invalid_argument("design_variance_defect: eps2 must be >= 0");
    return 3.0 * eps2 * op_norm * op_norm;
}

WindowEstimate window_estimate(double v_cross, double epsilon, double gamma2) {
    if (!(v_cross >= 0) || !(epsilon > 0) || !(gamma2 > 0)) {
        throw std::invalid_argument("window_estimate: positive inputs required");
    }
    return {v_cross / (epsilon * gamma2), true};
}

WindowEstimate window_scaling(double alpha_or_kappa, Eigen::Index n_sites,
                              WindowScalingMode mode) {
    if (n_sites < 1) throw std::invalid_argument("window_scaling: n_sites must be >= 1");
    const double ll = static_cast<double>(n_sites);
    if (mode == WindowScalingMode::poly) {
        return {std::pow(ll, alpha_or_kappa - 0.5), true};
    }
    return {std::exp(alpha_or_kappa * ll) / std::sqrt(ll), true};
}

ProtectedTypBound protected_typ_bound(Eigen::Index d, double delta, double epsilon) {
    require_delta(delta);
    if (!(epsilon > 0)) throw std::invalid_argument("protected_typ_bound: epsilon must be > 0");
    ProtectedTypBound out;
    out.value = std::log(8.0 / epsilon);
    out.applicable =
        epsilon >= 4.0 * (1.0 + std::log(1.0 / delta)) / static_cast<double>(d - 1);
    return out;
}

double estimate_kappa(const RelaxationCurve& curve, double a2_abs, double gamma2,
                      double t_min) {
    if (!(a2_abs > 0)) throw std::invalid_argument("estimate_kappa: need |a2| > 0");
    double worst = 0.0;
    bool seen = false;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        if (curve.times[i] < t_min) continue;
        const double envelope = a2_abs * std::exp(-gamma2 * curve.times[i]);
        if (envelope < 1e-300) break;
        worst = std::max(worst, std::abs(curve.distances[i] / envelope - 1.0));
        seen = true;
    }
    if (!seen) throw std::invalid_argument("estimate_kappa: no grid points past t_min");
    return worst;
}

}  // namespace mixlab

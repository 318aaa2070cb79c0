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

#include "mixlab/models.hpp"

#include <cmath>
#include <stdexcept>

#include "mixlab/states.hpp"

namespace mixlab {
namespace {

// One-qubit channel that keeps populations and coherences in separate 2x2
// sectors: [B00;B11] = pop * [A00;A11], [B01;B10] = coh * [A01;A10]. All the
// factorized models in this file are of that form.
struct QubitMap {
    Eigen::Matrix2d pop;
    Eigen::Matrix2d coh;
};

// Apply `map` on tensor factor `site` (0 = leftmost / most significant bit)
// of an n-qubit operator.
ComplexMatrix apply_qubit_map(const ComplexMatrix& x, int n_qubits, int site,
                              const QubitMap& map) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    if (x.rows() != d || x.cols() != d) {
        throw std::invalid_argument("apply_qubit_map: dimension mismatch");
    }
    const Eigen::Index mask = Eigen::Index(1) << (n_qubits - 1 - site);
    ComplexMatrix out(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        if (r & mask) continue;
        const Eigen::Index r1 = r | mask;
        for (Eigen::Index c = 0; c < d; ++c) {
            if (c & mask) continue;
            const Eigen::Index c1 = c | mask;
            const Complex a00 = x(r, c), a11 = x(r1, c1);
            const Complex a01 = x(r, c1), a10 = x(r1, c);
            out(r, c) = map.pop(0, 0) * a00 + map.pop(0, 1) * a11;
            out(r1, c1) = map.pop(1, 0) * a00 + map.pop(1, 1) * a11;
            out(r, c1) = map.coh(0, 0) * a01 + map.coh(0, 1) * a10;
            out(r1, c) = map.coh(1, 0) * a01 + map.coh(1, 1) * a10;
        }
    }
    return out;
}

QubitMap thermal_reset_map(double t, double rate, double p1) {
    // Populations relax toward (1-p1, p1) at `rate`; coherences halve as fast
    // when the reset is built from raising/lowering jumps (Davies), or decay
    // at the full rate for a plain reset channel. The caller picks via
    // coh_rate below.
    QubitMap m;
    const double e = std::exp(-rate * t);
    m.pop << e + (1 - e) * (1 - p1), (1 - e) * (1 - p1),
             (1 - e) * p1,           e + (1 - e) * p1;
    m.coh.setZero();
    return m;
}

QubitMap davies_site_map(double t, double p1) {
    QubitMap m = thermal_reset_map(t, 1.0, p1);
    const double eh = std::exp(-t / 2.0);
    m.coh << eh, 0, 0, eh;
    return m;
}

QubitMap reset_site_map(double t, double rate, double p1) {
    QubitMap m = thermal_reset_map(t, rate, p1);
    const double e = std::exp(-rate * t);
    m.coh << e, 0, 0, e;
    return m;
}

QubitMap depolarize_map(double t, double rate) {
    return reset_site_map(t, rate, 0.5);
}

QubitMap pauli_site_map(double t, double rx, double ry, double rz) {
    // Diagonal in the one-qubit Pauli basis: I fixed, P decays at r(P).
    QubitMap m;
    const double ex = std::exp(-rx * t);
    const double ey = std::exp(-ry * t);
    const double ez = std::exp(-rz * t);
    m.pop << (1 + ez) / 2, (1 - ez) / 2,
             (1 - ez) / 2, (1 + ez) / 2;
    m.coh << (ex + ey) / 2, (ex - ey) / 2,
             (ex - ey) / 2, (ex + ey) / 2;
    return m;
}

int qubit_count(Eigen::Index d) {
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    return n;
}

ComplexMatrix one_qubit_gibbs(double p1) {
    ComplexMatrix tau = ComplexMatrix::Zero(2, 2);
    tau(0, 0) = 1 - p1;
    tau(1, 1) = p1;
    return tau;
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double DaviesParams::p_excited() const {
    const double w = std::exp(-beta * omega);
    return w / (1.0 + w);
}
double DaviesParams::gamma_up() const { return p_excited(); }
double DaviesParams::gamma_down() const { return 1.0 - p_excited(); }

double ProtectedParams::gamma_slow() const {
    return eta * (1.0 + 1.0 / static_cast<double>(d - 1));
}
double ProtectedParams::gamma_bulk() const {
    return 1.0 + 1.0 / static_cast<double>(d - 2) + eta / static_cast<double>(d - 1);
}

double LogicalMicroParams::eta() const { return std::exp(-c * n_syn); }
double LogicalMicroParams::p_excited() const {
    const double w = std::exp(-beta);
    return w / (1.0 + w);
}

ComplexMatrix davies_evolve(const ComplexMatrix& x, double t, const DaviesParams& p) {
    require(t >= 0, "davies_evolve: t must be nonnegative");
    const QubitMap m = davies_site_map(t, p.p_excited());
    ComplexMatrix out = x;
    for (int j = 0; j < p.n_sites; ++j) out = apply_qubit_map(out, p.n_sites, j, m);
    return out;
}

ComplexMatrix pauli_boundary_evolve(const ComplexMatrix& x, double t,
                                    const PauliBoundaryParams& p) {
    require(t >= 0, "pauli_boundary_evolve: t must be nonnegative");
    const QubitMap boundary = pauli_site_map(t, p.gamma, p.gamma + p.delta, p.delta);
    const QubitMap bulk = pauli_site_map(t, p.gamma, 2 * p.gamma, p.gamma);
    ComplexMatrix out = apply_qubit_map(x, p.n_sites, 0, boundary);
    for (int j = 1; j < p.n_sites; ++j) out = apply_qubit_map(out, p.n_sites, j, bulk);
    return out;
}

ComplexMatrix protected_evolve(const ComplexMatrix& x, double t, const ProtectedParams& p) {
    require(t >= 0, "protected_evolve: t must be nonnegative");
    const Eigen::Index d = p.d;
    if (x.rows() != d || x.cols() != d) {
        throw std::invalid_argument("protected_evolve: dimension mismatch");
    }
    const double gs = p.gamma_slow();
    const double gb = p.gamma_bulk();
    const double es = std::exp(-gs * t);
    const double eb = std::exp(-gb * t);

    // Diagonal sector: protected direction b = e0 - (1/(d-1)) sum_i e_i decays
    // at gamma_slow, the remaining zero-sum bulk directions at gamma_bulk.
    ComplexVector diag = x.diagonal();
    const Complex tr = diag.sum();
    const Complex c0 = diag[0] - tr / static_cast<double>(d);
    ComplexVector b = ComplexVector::Constant(d, Complex(-1.0 / static_cast<double>(d - 1), 0));
    b[0] = 1.0;
    ComplexVector u = ComplexVector::Constant(d, tr / static_cast<double>(d));
    ComplexVector w = diag - u - c0 * b;
    ComplexVector diag_t = u + es * c0 * b + eb * w;

    // Off-diagonal entry (k,l): unit-rate dephasing plus half the total
    // classical escape rates from k and l; the factorized form e^{-R_k t/2}
    // e^{-R_l t/2} needs only d exponentials.
    RealVector escape = RealVector::Constant(d, 1.0 + p.eta / static_cast<double>(d - 1));
    escape[0] = p.eta;
    const double edeph = std::exp(-t);
    RealVector decay(d);
    for (Eigen::Index k = 0; k < d; ++k) decay[k] = std::exp(-escape[k] * t / 2.0);
    ComplexMatrix out = edeph * (decay.asDiagonal() * x * decay.asDiagonal());
    out.diagonal() = diag_t;
    return out;
}

ComplexMatrix logical_product_evolve(const ComplexMatrix& x, double t,
                                     const LogicalProductParams& p) {
    require(t >= 0, "logical_product_evolve: t must be nonnegative");
    const Eigen::Index d = p.d_log * p.n_syn;
    if (x.rows() != d || x.cols() != d) {
        throw std::invalid_argument("logical_product_evolve: dimension mismatch");
    }
    const double el = std::exp(-p.eta * t);
    const double es = std::exp(-t);
    const std::vector<Eigen::Index> dims = {p.d_log, p.n_syn};
    const ComplexMatrix x_log = partial_trace(x, dims, 0);
    const ComplexMatrix x_syn = partial_trace(x, dims, 1);
    const ComplexMatrix unit_log =
        ComplexMatrix::Identity(p.d_log, p.d_log) / static_cast<double>(p.d_log);
    const Complex tr = x.trace();
    return el * es * x + el * (1 - es) * kron(x_log, p.pi) +
           (1 - el) * es * kron(unit_log, x_syn) +
           (1 - el) * (1 - es) * tr * kron(unit_log, p.pi);
}

ComplexMatrix logical_micro_evolve(const ComplexMatrix& x, double t,
                                   const LogicalMicroParams& p) {
    require(t >= 0, "logical_micro_evolve: t must be nonnegative");
    const int n = p.n_syn + 1;
    const QubitMap logical = depolarize_map(t, p.eta());
    const QubitMap reset = reset_site_map(t, p.gamma, p.p_excited());
    ComplexMatrix out = apply_qubit_map(x, n, 0, logical);
    for (int j = 1; j < n; ++j) out = apply_qubit_map(out, n, j, reset);
    return out;
}

RealMatrix skin_generator(const SkinParams& p) {
    const int n = p.n_sites;
    RealMatrix q = RealMatrix::Zero(n, n);
    const double right = p.lambda * p.gamma_r;
    const double left = p.lambda * p.gamma_l;
    for (int x = 0; x < n; ++x) {
        if (x + 1 < n) q(x + 1, x) += right;
        if (x - 1 >= 0) q(x - 1, x) += left;
    }
    for (int x = 0; x < n; ++x) q(x, x) = -(q.col(x).sum() - q(x, x));
    return q;
}

RealVector skin_evolve(const RealVector& p, double t, const RealMatrix& q) {
    require(t >= 0, "skin_evolve: t must be nonnegative");
    if (q.rows() != q.cols() || p.size() != q.rows()) {
        throw std::invalid_argument("skin_evolve: dimension mismatch");
    }
    // Uniformization: e^{tQ} = e^{-lam t} sum_m (lam t)^m/m! P^m with
    // P = I + Q/lam column-stochastic; every term is nonnegative.
    const double lam = q.diagonal().cwiseAbs().maxCoeff();
    if (lam == 0.0 || t == 0.0) return p;
    const double a = lam * t;
    RealVector term = p;
    RealVector acc = RealVector::Zero(p.size());
    // Accumulate Poisson weights in log space to survive large lam*t.
    double log_w = -a;  // log of e^{-a} a^m / m! at m = 0
    int m = 0;
    const int m_max = static_cast<int>(a + 12.0 * std::sqrt(a + 1.0) + 30.0);
    while (true) {
        acc += std::exp(log_w) * term;
        if (m >= m_max) break;
        ++m;
        log_w += std::log(a) - std::log(static_cast<double>(m));
        RealVector next = term + (q * term) / lam;  // P * term
        term = next;
        if (log_w < -745.0 && m > a) break;  // weights below double range
    }
    return acc;
}

ComplexMatrix lindblad_superoperator(const std::vector<JumpOperator>& jumps, Eigen::Index d) {
    const Eigen::Index d2 = d * d;
    ComplexMatrix sup = ComplexMatrix::Zero(d2, d2);
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    for (const auto& j : jumps) {
        if (j.op.rows() != d || j.op.cols() != d) {
            throw std::invalid_argument("lindblad_superoperator: jump dimension mismatch");
        }
        const ComplexMatrix ldl = j.op.adjoint() * j.op;
        // vec(A X B) = (B^T kron A) vec(X), column-major vec.
        sup += j.rate * (kron(j.op.conjugate(), j.op) -
                         0.5 * kron(id, ldl) -
                         0.5 * kron(ldl.transpose(), id));
    }
    return sup;
}

ComplexMatrix dense_lindblad_evolve(const ComplexMatrix& x, double t,
                                    const std::vector<JumpOperator>& jumps) {
    require(t >= 0, "dense_lindblad_evolve: t must be nonnegative");
    const Eigen::Index d = x.rows();
    if (x.cols() != d) throw std::invalid_argument("dense_lindblad_evolve: square input required");
    if (d > 32) throw std::invalid_argument("dense_lindblad_evolve: d > 32 exceeds oracle cap");
    const ComplexMatrix sup = lindblad_superoperator(jumps, d);
    const ComplexMatrix prop = matrix_exp(sup, t);
    const Eigen::Map<const ComplexVector> vec_in(x.data(), d * d);
    ComplexVector vec_out = prop * vec_in;
    return Eigen::Map<const ComplexMatrix>(vec_out.data(), d, d);
}

// ---------------------------------------------------------------------------
// ChannelSpec
// ---------------------------------------------------------------------------

ChannelSpec::ChannelSpec(Family family) : family_(std::move(family)) {
    std::visit(
        [this](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) {
                require(p.n_sites >= 1 && p.n_sites <= 12, "davies: need 1 <= n_sites <= 12");
                require(p.omega > 0 && std::isfinite(p.beta), "davies: need omega > 0, finite beta");
            } else if constexpr (std::is_same_v<T, PauliBoundaryParams>) {
                require(p.n_sites >= 1 && p.n_sites <= 12, "pauli_boundary: need 1 <= n_sites <= 12");
                require(p.delta > 0 && p.delta < p.gamma,
                        "pauli_boundary: need 0 < delta < gamma");
            } else if constexpr (std::is_same_v<T, SkinParams>) {
                require(p.n_sites >= 2, "skin: need n_sites >= 2");
                require(p.gamma_r > 0 && p.gamma_l > 0 && p.lambda > 0,
                        "skin: rates must be positive");
                skin_q_ = skin_generator(p);
            } else if constexpr (std::is_same_v<T, ProtectedParams>) {
                require(p.d >= 3, "protected: need d >= 3");
                require(p.eta > 0 && p.eta <= 1, "protected: need 0 < eta <= 1");
            } else if constexpr (std::is_same_v<T, LogicalProductParams>) {
                require(p.d_log >= 2 && p.n_syn >= 1, "logical_product: need D >= 2, N >= 1");
                require(p.eta > 0 && p.eta <= 1, "logical_product: need 0 < eta <= 1");
                require(p.pi.rows() == p.n_syn && p.pi.cols() == p.n_syn,
                        "logical_product: pi must be N x N");
                check_density_matrix(p.pi);
            } else if constexpr (std::is_same_v<T, LogicalMicroParams>) {
                require(p.n_syn >= 1 && p.n_syn <= 11, "logical_micro: need 1 <= n_syn <= 11");
                require(p.gamma > 0 && p.beta >= 0 && p.c >= 0,
                        "logical_micro: need gamma > 0, beta >= 0, c >= 0");
            } else if constexpr (std::is_same_v<T, DenseGenericParams>) {
                require(!p.jumps.empty() || true, "");
                Eigen::Index d = 0;
                for (const auto& j : p.jumps) {
                    if (d == 0) d = j.op.rows();
                    require(j.op.rows() == d && j.op.cols() == d,
                            "dense_generic: jump dimensions disagree");
                    require(j.rate >= 0, "dense_generic: rates must be nonnegative");
                }
                require(d <= 32, "dense_generic: d > 32 exceeds oracle cap");
            }
        },
        family_);
}

Eigen::Index ChannelSpec::dim() const {
    return std::visit(
        [](const auto& p) -> Eigen::Index {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) return Eigen::Index(1) << p.n_sites;
            else if constexpr (std::is_same_v<T, PauliBoundaryParams>) return Eigen::Index(1) << p.n_sites;
            else if constexpr (std::is_same_v<T, SkinParams>) return p.n_sites;
            else if constexpr (std::is_same_v<T, ProtectedParams>) return p.d;
            else if constexpr (std::is_same_v<T, LogicalProductParams>) return p.d_log * p.n_syn;
            else if constexpr (std::is_same_v<T, LogicalMicroParams>) return Eigen::Index(1) << (p.n_syn + 1);
            else return p.jumps.empty() ? 0 : p.jumps.front().op.rows();
        },
        family_);
}

bool ChannelSpec::population_sector() const {
    return std::holds_alternative<SkinParams>(family_);
}

std::string ChannelSpec::family_name() const {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) return "davies_chain";
            else if constexpr (std::is_same_v<T, PauliBoundaryParams>) return "pauli_boundary";
            else if constexpr (std::is_same_v<T, SkinParams>) return "skin_population";
            else if constexpr (std::is_same_v<T, ProtectedParams>) return "protected_sector";
            else if constexpr (std::is_same_v<T, LogicalProductParams>) return "logical_product";
            else if constexpr (std::is_same_v<T, LogicalMicroParams>) return "logical_micro";
            else return "dense_generic";
        },
        family_);
}

ComplexMatrix ChannelSpec::evolve(const ComplexMatrix& x, double t) const {
    return std::visit(
        [&](const auto& p) -> ComplexMatrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) return davies_evolve(x, t, p);
            else if constexpr (std::is_same_v<T, PauliBoundaryParams>) return pauli_boundary_evolve(x, t, p);
            else if constexpr (std::is_same_v<T, ProtectedParams>) return protected_evolve(x, t, p);
            else if constexpr (std::is_same_v<T, LogicalProductParams>) return logical_product_evolve(x, t, p);
            else if constexpr (std::is_same_v<T, LogicalMicroParams>) return logical_micro_evolve(x, t, p);
            else if constexpr (std::is_same_v<T, DenseGenericParams>) return dense_lindblad_evolve(x, t, p.jumps);
            else throw std::invalid_argument("evolve: skin family lives in the population sector");
        },
        family_);
}

RealVector ChannelSpec::evolve_population(const RealVector& p, double t) const {
    if (!population_sector()) {
        throw std::invalid_argument("evolve_population: only the skin family is classical");
    }
    return skin_evolve(p, t, skin_q_);
}

const RealMatrix& ChannelSpec::population_generator() const {
    if (!population_sector()) {
        throw std::invalid_argument("population_generator: only the skin family is classical");
    }
    return skin_q_;
}

ComplexMatrix ChannelSpec::stationary() const {
    return std::visit(
        [&](const auto& p) -> ComplexMatrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) {
                ComplexMatrix s = one_qubit_gibbs(p.p_excited());
                ComplexMatrix out = s;
                for (int j = 1; j < p.n_sites; ++j) out = kron(out, s);
                return out;
            } else if constexpr (std::is_same_v<T, PauliBoundaryParams>) {
                const Eigen::Index d = Eigen::Index(1) << p.n_sites;
                return ComplexMatrix::Identity(d, d) / static_cast<double>(d);
            } else if constexpr (std::is_same_v<T, ProtectedParams>) {
                return ComplexMatrix::Identity(p.d, p.d) / static_cast<double>(p.d);
            } else if constexpr (std::is_same_v<T, LogicalProductParams>) {
                const ComplexMatrix unit_log =
                    ComplexMatrix::Identity(p.d_log, p.d_log) / static_cast<double>(p.d_log);
                return kron(unit_log, p.pi);
            } else if constexpr (std::is_same_v<T, LogicalMicroParams>) {
                ComplexMatrix out = ComplexMatrix::Identity(2, 2) / 2.0;
                const ComplexMatrix tau = one_qubit_gibbs(p.p_excited());
                for (int j = 0; j < p.n_syn; ++j) out = kron(out, tau);
                return out;
            } else {
                throw std::invalid_argument(
                    "stationary: not defined for this family (population or generic)");
            }
        },
        family_);
}

RealVector ChannelSpec::stationary_population() const {
    const auto* p = std::get_if<SkinParams>(&family_);
    if (p == nullptr) {
        throw std::invalid_argument("stationary_population: only the skin family is classical");
    }
    // Detailed balance: pi_{x+1}/pi_x = gamma_r/gamma_l, right-localized.
    const int n = p->n_sites;
    const double log_r = std::log(p->gamma_r / p->gamma_l);
    RealVector pi(n);
    for (int x = 0; x < n; ++x) pi[x] = std::exp((x - (n - 1)) * log_r);
    pi /= pi.sum();
    return pi;
}

std::vector<JumpOperator> ChannelSpec::oracle_jump_operators() const {
    return std::visit(
        [&](const auto& p) -> std::vector<JumpOperator> {
            using T = std::decay_t<decltype(p)>;
            std::vector<JumpOperator> jumps;
            if constexpr (std::is_same_v<T, DaviesParams>) {
                const Eigen::Index d = dim();
                for (int site = 0; site < p.n_sites; ++site) {
                    ComplexMatrix minus = ComplexMatrix::Zero(2, 2);
                    minus(0, 1) = 1.0;  // |0><1|
                    ComplexMatrix plus = minus.adjoint();
                    ComplexMatrix left = ComplexMatrix::Identity(
                        Eigen::Index(1) << site, Eigen::Index(1) << site);
                    ComplexMatrix right = ComplexMatrix::Identity(
                        d >> (site + 1), d >> (site + 1));
                    jumps.push_back({kron(kron(left, minus), right), p.gamma_down()});
                    jumps.push_back({kron(kron(left, plus), right), p.gamma_up()});
                }
            } else if constexpr (std::is_same_v<T, PauliBoundaryParams>) {
                ComplexMatrix x2 = ComplexMatrix::Zero(2, 2), z2 = ComplexMatrix::Zero(2, 2);
                x2(0, 1) = x2(1, 0) = 1.0;
                z2(0, 0) = 1.0; z2(1, 1) = -1.0;
                const Eigen::Index d = dim();
                for (int site = 0; site < p.n_sites; ++site) {
                    ComplexMatrix left = ComplexMatrix::Identity(
                        Eigen::Index(1) << site, Eigen::Index(1) << site);
                    ComplexMatrix right = ComplexMatrix::Identity(
                        d >> (site + 1), d >> (site + 1));
                    const double rx = site == 0 ? p.delta : p.gamma;
                    jumps.push_back({kron(kron(left, x2), right), rx / 2.0});
                    jumps.push_back({kron(kron(left, z2), right), p.gamma / 2.0});
                }
            } else if constexpr (std::is_same_v<T, ProtectedParams>) {
                const Eigen::Index d = p.d;
                auto ket_bra = [&](Eigen::Index a, Eigen::Index b) {
                    ComplexMatrix m = ComplexMatrix::Zero(d, d);
                    m(a, b) = 1.0;
                    return m;
                };
                const double r_edge = p.eta / static_cast<double>(d - 1);
                const double r_bulk = 1.0 / static_cast<double>(d - 2);
                for (Eigen::Index i = 1; i < d; ++i) {
                    jumps.push_back({ket_bra(i, 0), r_edge});
                    jumps.push_back({ket_bra(0, i), r_edge});
                    for (Eigen::Index j2 = 1; j2 < d; ++j2) {
                        if (i != j2) jumps.push_back({ket_bra(j2, i), r_bulk});
                    }
                }
                for (Eigen::Index i = 0; i < d; ++i) jumps.push_back({ket_bra(i, i), 1.0});
            } else if constexpr (std::is_same_v<T, LogicalProductParams>) {
                const ComplexMatrix id_syn = ComplexMatrix::Identity(p.n_syn, p.n_syn);
                const ComplexMatrix id_log = ComplexMatrix::Identity(p.d_log, p.d_log);
                for (Eigen::Index i = 0; i < p.d_log; ++i) {
                    for (Eigen::Index j2 = 0; j2 < p.d_log; ++j2) {
                        ComplexMatrix e = ComplexMatrix::Zero(p.d_log, p.d_log);
                        e(i, j2) = 1.0;
                        jumps.push_back({kron(e, id_syn), p.eta / static_cast<double>(p.d_log)});
                    }
                }
                const HermitianEigResult pe = hermitian_eig(p.pi);
                for (Eigen::Index k = 0; k < p.n_syn; ++k) {
                    const double weight = pe.eigenvalues[k];
                    if (weight <= 1e-15) continue;
                    for (Eigen::Index j2 = 0; j2 < p.n_syn; ++j2) {
                        ComplexMatrix e = pe.eigenvectors.col(k) *
                                          ComplexVector::Unit(p.n_syn, j2).adjoint();
                        jumps.push_back({kron(id_log, e), weight});
                    }
                }
            } else if constexpr (std::is_same_v<T, LogicalMicroParams>) {
                const Eigen::Index d = dim();
                const Eigen::Index d_syn = d / 2;
                const ComplexMatrix id_syn = ComplexMatrix::Identity(d_syn, d_syn);
                for (Eigen::Index i = 0; i < 2; ++i) {
                    for (Eigen::Index j2 = 0; j2 < 2; ++j2) {
                        ComplexMatrix e = ComplexMatrix::Zero(2, 2);
                        e(i, j2) = 1.0;
                        jumps.push_back({kron(e, id_syn), p.eta() / 2.0});
                    }
                }
                const double p1 = p.p_excited();
                for (int site = 1; site <= p.n_syn; ++site) {
                    ComplexMatrix left = ComplexMatrix::Identity(
                        Eigen::Index(1) << site, Eigen::Index(1) << site);
                    ComplexMatrix right = ComplexMatrix::Identity(
                        d >> (site + 1), d >> (site + 1));
                    for (Eigen::Index i = 0; i < 2; ++i) {
                        for (Eigen::Index j2 = 0; j2 < 2; ++j2) {
                            ComplexMatrix e = ComplexMatrix::Zero(2, 2);
                            e(i, j2) = 1.0;
                            const double w = (i == 0 ? 1.0 - p1 : p1) * p.gamma;
                            jumps.push_back({kron(kron(left, e), right), w});
                        }
                    }
                }
            } else if constexpr (std::is_same_v<T, SkinParams>) {
                const Eigen::Index d = p.n_sites;
                auto ket_bra = [&](Eigen::Index a, Eigen::Index b) {
                    ComplexMatrix m = ComplexMatrix::Zero(d, d);
                    m(a, b) = 1.0;
                    return m;
                };
                for (Eigen::Index x = 0; x + 1 < d; ++x) {
                    jumps.push_back({ket_bra(x + 1, x), p.lambda * p.gamma_r});
                    jumps.push_back({ket_bra(x, x + 1), p.lambda * p.gamma_l});
                }
            } else {
                jumps = p.jumps;
            }
            return jumps;
        },
        family_);
}

SlowMode ChannelSpec::slow_mode() const {
    return std::visit(
        [&](const auto& p) -> SlowMode {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DaviesParams>) {
                // Slowest one-qubit mode is the coherence at rate 1/2; the
                // site-1 X mode is the canonical Hermitian representative
                // (the eigenvalue is 2n-fold degenerate across sites).
                const Eigen::Index d = dim();
                ComplexMatrix x2 = ComplexMatrix::Zero(2, 2);
                x2(0, 1) = x2(1, 0) = 1.0;
                ComplexMatrix rest_id = ComplexMatrix::Identity(d / 2, d / 2);
                ComplexMatrix tau_rest = ComplexMatrix::Identity(1, 1);
                const ComplexMatrix tau = one_qubit_gibbs(p.p_excited());
                for (int j = 1; j < p.n_sites; ++j) tau_rest = kron(tau_rest, tau);
                return {kron(x2, rest_id), kron(x2, tau_rest) / 2.0, 0.5};
            } else if constexpr (std::is_same_v<T, PauliBoundaryParams>) {
                const Eigen::Index d = dim();
                ComplexMatrix z2 = ComplexMatrix::Zero(2, 2);
                z2(0, 0) = 1.0; z2(1, 1) = -1.0;
                const ComplexMatrix l2 = kron(z2, ComplexMatrix::Identity(d / 2, d / 2));
                return {l2, l2 / static_cast<double>(d), p.delta};
            } else if constexpr (std::is_same_v<T, SkinParams>) {
                // Dense nonsymmetric solve, matching how the slow gap of this
                // strongly non-normal generator is quoted in practice.
                Eigen::EigenSolver<RealMatrix> right(skin_q_);
                Eigen::EigenSolver<RealMatrix> left(RealMatrix(skin_q_.transpose()));
                if (right.info() != Eigen::Success || left.info() != Eigen::Success) {
                    throw std::runtime_error("slow_mode: skin eigensolver failed");
                }
                const Eigen::Index n = skin_q_.rows();
                auto second_largest = [n](const Eigen::VectorXcd& ev) {
                    Eigen::Index best = -1, second = -1;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        if (best < 0 || ev[i].real() > ev[best].real()) {
                            second = best;
                            best = i;
                        } else if (second < 0 || ev[i].real() > ev[second].real()) {
                            second = i;
                        }
                    }
                    return second;
                };
                const Eigen::Index ir = second_largest(right.eigenvalues());
                const double lam2 = right.eigenvalues()[ir].real();
                Eigen::Index il = 0;
                double best_dist = 1e300;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double dist = std::abs(left.eigenvalues()[i].real() - lam2) +
                                        std::abs(left.eigenvalues()[i].imag());
                    if (dist < best_dist) { best_dist = dist; il = i; }
                }
                RealVector r = right.eigenvectors().col(ir).real();
                RealVector l = left.eigenvectors().col(il).real();
                r /= r.cwiseAbs().sum();
                if (r[0] < 0) r = -r;
                const double overlap = l.dot(r);
                if (std::abs(overlap) < 1e-300) {
                    throw std::runtime_error("slow_mode: skin left/right overlap vanishes");
                }
                l /= overlap;
                SlowMode mode;
                mode.l2 = l.cast<Complex>().asDiagonal();
                mode.r2 = r.cast<Complex>().asDiagonal();
                mode.gamma2 = -lam2;
                return mode;
            } else if constexpr (std::is_same_v<T, ProtectedParams>) {
                const Eigen::Index d = p.d;
                RealVector b = RealVector::Constant(d, -1.0 / static_cast<double>(d - 1));
                b[0] = 1.0;
                // Symmetric rates make the classical generator self-adjoint,
                // so the left vector is b as well, up to normalization.
                const double scale = 2.0 * static_cast<double>(d - 1) / static_cast<double>(d);
                SlowMode mode;
                mode.l2 = (scale * b).cast<Complex>().asDiagonal();
                mode.r2 = (b / 2.0).cast<Complex>().asDiagonal();
                mode.gamma2 = p.gamma_slow();
                return mode;
            } else if constexpr (std::is_same_v<T, LogicalProductParams> ||
                                 std::is_same_v<T, LogicalMicroParams>) {
                Eigen::Index d_log, n_syn;
                double eta;
                ComplexMatrix pi;
                if constexpr (std::is_same_v<T, LogicalProductParams>) {
                    d_log = p.d_log; n_syn = p.n_syn; eta = p.eta; pi = p.pi;
                } else {
                    d_log = 2;
                    n_syn = dim() / 2;
                    eta = p.eta();
                    const ComplexMatrix tau = one_qubit_gibbs(p.p_excited());
                    pi = ComplexMatrix::Identity(1, 1);
                    for (int j = 0; j < p.n_syn; ++j) pi = kron(pi, tau);
                }
                ComplexMatrix t_log = ComplexMatrix::Zero(d_log, d_log);
                t_log(0, 0) = 1.0; t_log(1, 1) = -1.0;
                return {kron(t_log, ComplexMatrix::Identity(n_syn, n_syn)),
                        kron(t_log, pi) / 2.0, eta};
            } else {
                throw std::invalid_argument("slow_mode: no closed-form mode for dense_generic");
            }
        },
        family_);
}

}  // namespace mixlab

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

#include "mixlab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mixlab {

std::vector<double> log_grid(double t_min, double t_max, int n) {
    if (!(t_min > 0) || !(t_max > t_min) || n < 2) {
        throw std::invalid_argument("log_grid: need 0 < t_min < t_max and n >= 2");
    }
    std::vector<double> out(n);
    const double step = (std::log(t_max) - std::log(t_min)) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = std::exp(std::log(t_min) + step * i);
    out.back() = t_max;
    return out;
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("grid needs at least 2 points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("grid must be strictly increasing");
        }
    }
}

}  // namespace

RelaxationCurve relaxation_curve(const ChannelSpec& spec, const ComplexMatrix& rho0,
                                 const std::vector<double>& grid) {
    check_grid(grid);
    if (spec.population_sector()) {
        throw std::invalid_argument("relaxation_curve: population model needs a population state");
    }
    if (rho0.rows() != spec.dim() || rho0.cols() != spec.dim()) {
        throw std::invalid_argument("relaxation_curve: state dimension mismatch");
    }
    const ComplexMatrix sigma = spec.stationary();
    RelaxationCurve curve;
    curve.times = grid;
    curve.distances.reserve(grid.size());
    for (double t : grid) {
        curve.distances.push_back(trace_norm(spec.evolve(rho0, t) - sigma));
    }
    return curve;
}

RelaxationCurve relaxation_curve(const ChannelSpec& spec, const RealVector& p0,
                                 const std::vector<double>& grid) {
    check_grid(grid);
    if (!spec.population_sector()) {
        throw std::invalid_argument("relaxation_curve: quantum model needs a density matrix");
    }
    if (p0.size() != spec.dim()) {
        throw std::invalid_argument("relaxation_curve: population dimension mismatch");
    }
    const RealVector pi = spec.stationary_population();
    RelaxationCurve curve;
    curve.times = grid;
    curve.distances.reserve(grid.size());
    for (double t : grid) {
        curve.distances.push_back(l1_distance(spec.evolve_population(p0, t), pi));
    }
    return curve;
}

HitResult hitting_time(const RelaxationCurve& curve, double epsilon) {
    if (!(epsilon > 0) || !(epsilon < 2)) {
        throw std::invalid_argument("hitting_time: epsilon must lie in (0, 2)");
    }
    const auto& t = curve.times;
    const auto& g = curve.distances;
    if (g.empty()) return {true, 0.0};
    if (g.front() <= epsilon) return {false, t.front()};
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (g[i] <= epsilon) {
            const double g0 = g[i - 1], g1 = g[i];
            double frac;
            if (g0 > 1e-14 && g1 > 1e-14) {
                frac = (std::log(g0) - std::log(epsilon)) / (std::log(g0) - std::log(g1));
            } else {
                frac = (g0 - epsilon) / (g0 - g1);
            }
            return {false, t[i - 1] + frac * (t[i] - t[i - 1])};
        }
    }
    return {true, 0.0};
}

double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile_type7: empty data");
    if (q < 0 || q > 1) throw std::invalid_argument("quantile_type7: q outside [0,1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

SummaryStats summarize_hits(const std::vector<HitResult>& hits) {
    SummaryStats s;
    std::vector<double> times;
    times.reserve(hits.size());
    for (const auto& h : hits) {
        if (h.censored) ++s.censored;
        else times.push_back(h.time);
    }
    s.n = static_cast<int>(times.size());
    if (times.empty()) return s;
    s.mean = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    double ss = 0.0;
    for (double v : times) ss += (v - s.mean) * (v - s.mean);
    s.stddev = times.size() > 1 ? std::sqrt(ss / (times.size() - 1.0)) : 0.0;
    s.q10 = quantile_type7(times, 0.1);
    s.q50 = quantile_type7(times, 0.5);
    s.q90 = quantile_type7(times, 0.9);
    return s;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double l1_distance(const RealVector& p, const RealVector& q) {
    return (p - q).cwiseAbs().sum();
}

SkinGridPropagator::SkinGridPropagator(const RealMatrix& q, const std::vector<double>& grid)
    : grid_(grid) {
    check_grid(grid);
    const Eigen::Index n = q.rows();
    steps_.reserve(grid.size());
    double prev = 0.0;
    for (double t : grid) {
        RealMatrix step(n, n);
        for (Eigen::Index x = 0; x < n; ++x) {
            step.col(x) = skin_evolve(RealVector::Unit(n, x), t - prev, q);
        }
        steps_.push_back(std::move(step));
        prev = t;
    }
}

std::vector<double> SkinGridPropagator::curve(const RealVector& p0, const RealVector& pi) const {
    std::vector<double> out;
    out.reserve(steps_.size());
    RealVector p = p0;
    for (const auto& step : steps_) {
        p = step * p;
        out.push_back(l1_distance(p, pi));
    }
    return out;
}

SweepResult ensemble_sweep(const ChannelSpec& spec, const EnsembleSpec& ensemble,
                           int n_samples, const std::vector<double>& grid,
                           double epsilon, int workers) {
    check_grid(grid);
    if (n_samples < 2) throw std::invalid_argument("ensemble_sweep: need n_samples >= 2");
    if (ensemble.d != spec.dim()) {
        throw std::invalid_argument("ensemble_sweep: ensemble dimension differs from channel");
    }

    const int n_t = static_cast<int>(grid.size());
    std::vector<std::vector<double>> curves(n_samples);
    std::vector<HitResult> hits(n_samples);

    if (spec.population_sector()) {
        const SkinGridPropagator prop(spec.population_generator(), grid);
        const RealVector pi = spec.stationary_population();
        parallel_for(n_samples, workers, [&](int i) {
            SplitRng rng(ensemble.seed, static_cast<std::uint64_t>(i));
            const ComplexVector psi = sample_haar_pure(spec.dim(), rng);
            const RealVector p0 = psi.cwiseAbs2();
            curves[i] = prop.curve(p0, pi);
            RelaxationCurve c{grid, curves[i]};
            hits[i] = hitting_time(c, epsilon);
        });
    } else {
        const ComplexMatrix sigma = spec.stationary();
        parallel_for(n_samples, workers, [&](int i) {
            const ComplexMatrix rho0 = sample_state(ensemble, static_cast<std::uint64_t>(i));
            std::vector<double> g(n_t);
            for (int k = 0; k < n_t; ++k) {
                g[k] = trace_norm(spec.evolve(rho0, grid[k]) - sigma);
            }
            curves[i] = std::move(g);
            RelaxationCurve c{grid, curves[i]};
            hits[i] = hitting_time(c, epsilon);
        });
    }

    SweepResult result;
    result.mixing.epsilon = epsilon;
    result.mixing.hits = std::move(hits);
    result.mixing.summary = summarize_hits(result.mixing.hits);
    result.mean_curve.times = grid;
    result.mean_curve.distances.assign(n_t, 0.0);
    result.pointwise_std.assign(n_t, 0.0);
    for (int k = 0; k < n_t; ++k) {
        double mean = 0.0;
        for (int i = 0; i < n_samples; ++i) mean += curves[i][k];
        mean /= n_samples;
        double ss = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            ss += (curves[i][k] - mean) * (curves[i][k] - mean);
        }
        result.mean_curve.distances[k] = mean;
        result.pointwise_std[k] = n_samples > 1 ? std::sqrt(ss / (n_samples - 1.0)) : 0.0;
    }
    result.sample_curves = std::move(curves);
    return result;
}

RelaxationCurve barycenter_curve(const ChannelSpec& spec, const std::vector<double>& grid) {
    if (spec.population_sector()) {
        const Eigen::Index n = spec.dim();
        return relaxation_curve(spec, RealVector(RealVector::Constant(n, 1.0 / n)), grid);
    }
    const Eigen::Index d = spec.dim();
    const ComplexMatrix ref = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    return relaxation_curve(spec, ref, grid);
}

CrossingReport crossing_report(const RelaxationCurve& mean_curve, double epsilon) {
    const HitResult hit = hitting_time(mean_curve, epsilon);
    if (hit.censored) {
        throw std::invalid_argument("crossing_report: mean curve never crosses epsilon");
    }
    CrossingReport report;
    report.t_star = hit.time;

    // Nearest grid index to the crossing, then a symmetric difference over
    // +-2 grid points (clamped at the ends).
    const auto& t = mean_curve.times;
    const auto& g = mean_curve.distances;
    std::size_t k = 0;
    double best = std::abs(t[0] - hit.time);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double dist = std::abs(t[i] - hit.time);
        if (dist < best) { best = dist; k = i; }
    }
    const std::size_t lo = k >= 2 ? k - 2 : 0;
    const std::size_t hi = std::min(k + 2, t.size() - 1);
    report.window = t[hi] - t[lo];
    report.slope = -(g[hi] - g[lo]) / (t[hi] - t[lo]);
    report.transverse = report.slope > 1e-6;
    return report;
}

namespace {

WorstCaseResult scan_states(const ChannelSpec& spec, double epsilon,
                            const std::vector<double>& grid,
                            const std::vector<std::pair<std::string, ComplexMatrix>>& states) {
    if (states.empty()) throw std::invalid_argument("worst_case_scan: no candidates");
    WorstCaseResult worst;
    worst.hit = {false, -1.0};
    for (const auto& [label, rho] : states) {
        const HitResult h = hitting_time(relaxation_curve(spec, rho, grid), epsilon);
        if (h.censored) return {h, label};
        if (h.time > worst.hit.time) worst = {h, label};
    }
    return worst;
}

}  // namespace

WorstCaseResult worst_case_scan(const ChannelSpec& spec, double epsilon,
                                const std::vector<double>& grid,
                                WorstCaseCandidates candidates) {
    const Eigen::Index d = spec.dim();
    if (spec.population_sector()) {
        // Exact over the simplex: the extreme points are the basis states.
        const RealVector pi = spec.stationary_population();
        const SkinGridPropagator prop(spec.population_generator(), grid);
        WorstCaseResult worst;
        worst.hit = {false, -1.0};
        for (Eigen::Index x = 0; x < d; ++x) {
            RelaxationCurve c{grid, prop.curve(RealVector::Unit(d, x), pi)};
            const HitResult h = hitting_time(c, epsilon);
            const std::string label = "basis_" + std::to_string(x);
            if (h.censored) return {h, label};
            if (h.time > worst.hit.time) worst = {h, label};
        }
        return worst;
    }

    std::vector<std::pair<std::string, ComplexMatrix>> states;
    if (candidates == WorstCaseCandidates::basis ||
        candidates == WorstCaseCandidates::basis_and_slow) {
        for (Eigen::Index x = 0; x < d; ++x) {
            ComplexMatrix rho = ComplexMatrix::Zero(d, d);
            rho(x, x) = 1.0;
            states.emplace_back("basis_" + std::to_string(x), std::move(rho));
        }
    }
    if (candidates == WorstCaseCandidates::slow_eigvec ||
        candidates == WorstCaseCandidates::basis_and_slow) {
        const SlowMode mode = spec.slow_mode();
        const HermitianEigResult eig = hermitian_eig(mode.l2);
        const Eigen::Index top =
            std::abs(eig.eigenvalues[0]) > std::abs(eig.eigenvalues[d - 1]) ? 0 : d - 1;
        const ComplexVector v = eig.eigenvectors.col(top);
        states.emplace_back("slow_eigvec", v * v.adjoint());
    }
    return scan_states(spec, epsilon, grid, states);
}

WorstCaseResult worst_case_scan(const ChannelSpec& spec, double epsilon,
                                const std::vector<double>& grid,
                                const std::vector<ComplexMatrix>& explicit_states) {
    std::vector<std::pair<std::string, ComplexMatrix>> states;
    for (std::size_t i = 0; i < explicit_states.size(); ++i) {
        states.emplace_back("explicit_" + std::to_string(i), explicit_states[i]);
    }
    return scan_states(spec, epsilon, grid, states);
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_linear: need matching x/y with >= 2 points");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_linear: x values are degenerate");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace mixlab

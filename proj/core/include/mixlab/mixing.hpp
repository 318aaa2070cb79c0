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
#include <string>
#include <vector>

#include "mixlab/models.hpp"
#include "mixlab/states.hpp"

namespace mixlab {

struct RelaxationCurve {
    std::vector<double> times;      // strictly increasing
    std::vector<double> distances;  // in [0, 2], nonincreasing for semigroups
};

/// Threshold hitting time; censored when the curve never crosses on the grid.
struct HitResult {
    bool censored = true;
    double time = 0.0;
};

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;   // sample standard deviation
    double q10 = 0.0, q50 = 0.0, q90 = 0.0;
    int n = 0;
    int censored = 0;
};

struct MixingSampleSet {
    double epsilon = 0.0;
    std::vector<HitResult> hits;  // one per ensemble member, index order
    SummaryStats summary;         // over the uncensored hits
};

struct SweepResult {
    MixingSampleSet mixing;
    RelaxationCurve mean_curve;
    std::vector<double> pointwise_std;  // std of g_t across samples, per grid time
    std::vector<std::vector<double>> sample_curves;  // g_t per sample, index order
};

struct CrossingReport {
    double t_star = 0.0;
    double slope = 0.0;         // local m > 0 estimated around the crossing
    double window = 0.0;        // time width used for the slope estimate
    bool transverse = false;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct WorstCaseResult {
    HitResult hit;
    std::string candidate;  // label of the maximizing candidate
};

enum class WorstCaseCandidates { basis, slow_eigvec, basis_and_slow };

/// n log-spaced points in [t_min, t_max].
std::vector<double> log_grid(double t_min, double t_max, int n);

/// Trace-distance relaxation curve of a quantum-family channel.
RelaxationCurve relaxation_curve(const ChannelSpec& spec, const ComplexMatrix& rho0,
                                 const std::vector<double>& grid);

/// l1 relaxation curve of the population-sector (skin) channel.
RelaxationCurve relaxation_curve(const ChannelSpec& spec, const RealVector& p0,
                                 const std::vector<double>& grid);

/// First crossing of epsilon, refined by log-linear interpolation between the
/// bracketing grid points (linear fallback near zero).
HitResult hitting_time(const RelaxationCurve& curve, double epsilon);

/// Type-7 quantile (linear interpolation of order statistics) of unsorted data.
double quantile_type7(std::vector<double> values, double q);

SummaryStats summarize_hits(const std::vector<HitResult>& hits);

/// Haar (or induced/basis) sweep: per-sample curves and hitting times plus
/// the pointwise mean curve. Deterministic in (spec, ensemble, n_samples);
/// workers only split the sample loop.
SweepResult ensemble_sweep(const ChannelSpec& spec, const EnsembleSpec& ensemble,
                           int n_samples, const std::vector<double>& grid,
                           double epsilon, int workers = 1);

/// Curve started from the ensemble barycenter I/d (uniform populations for
/// the skin family).
RelaxationCurve barycenter_curve(const ChannelSpec& spec, const std::vector<double>& grid);

/// Crossing time of a mean curve plus a local slope estimate over +-2 grid
/// points; slope <= 1e-6 is flagged non-transverse.
CrossingReport crossing_report(const RelaxationCurve& mean_curve, double epsilon);

/// Maximal hitting time over a candidate family. Any censored candidate
/// censors the result.
WorstCaseResult worst_case_scan(const ChannelSpec& spec, double epsilon,
                                const std::vector<double>& grid,
                                WorstCaseCandidates candidates);
WorstCaseResult worst_case_scan(const ChannelSpec& spec, double epsilon,
                                const std::vector<double>& grid,
                                const std::vector<ComplexMatrix>& explicit_states);

/// Ordinary least squares y ~ a + b x; throws on degenerate x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Precomputed grid propagators for the skin chain so sweeps cost one
/// matrix-vector product per grid step.
class SkinGridPropagator {
public:
    SkinGridPropagator(const RealMatrix& q, const std::vector<double>& grid);
    /// Distances to `pi` in l1 along the grid for initial populations p0.
    std::vector<double> curve(const RealVector& p0, const RealVector& pi) const;

private:
    std::vector<double> grid_;
    std::vector<RealMatrix> steps_;
};

double l1_distance(const RealVector& p, const RealVector& q);

/// Simple deterministic index-sliced parallel loop (worker w takes indices
/// w, w+W, ...). Results must be written by index.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace mixlab

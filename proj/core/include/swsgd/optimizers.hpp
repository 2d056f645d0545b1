#pragma once

#include <optional>
#include <vector>

#include "swsgd/estimators.hpp"
#include "swsgd/gain.hpp"

namespace swsgd {

enum class OptimizerKind { GD, SGD, SWSGD };

/// Magnitude beyond which an iterate coordinate counts as diverged.
inline constexpr double kDivergenceGuard = 1e12;

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::SGD;
    std::int64_t window_t = 2;  // SWSGD only
    GainSequence gain{};
    Vector theta0;
    std::int64_t iterations = 1;
    std::int64_t record_stride = 1;

    // Retention beyond the squared-error curve. Estimate norms feed the
    // boundedness monitor; iterates + raw estimates feed the bias
    // partial-sum diagnostic.
    bool record_estimate_norms = false;
    bool record_iterates = false;
    bool record_raw_estimates = false;
};

/// Everything recorded from one optimizer run. Squared errors are stored per
/// recorded index against theta*; full iterates only on request, to keep
/// replicated experiments at curve-sized memory.
struct Trajectory {
    std::vector<std::int64_t> indices;       // 0 ... K, strictly increasing
    std::vector<double> squared_errors;      // same length as indices
    Vector final_theta;

    std::vector<double> estimate_norms;      // per step, if recorded
    std::vector<Vector> iterates;            // theta_0 ... theta_K, if recorded
    std::vector<Vector> raw_estimates;       // raw_0 ... raw_{K-1}, if recorded
};

/// One deterministic step theta - a_k g(theta) with the true gradient.
Vector gd_step(const Problem& problem, const Vector& theta, std::int64_t k,
               const GainSequence& gain);

/// One step with a fresh raw estimate.
Vector sgd_step(const Problem& problem, const RawEstimatorKind& estimator,
                const Vector& theta, std::int64_t k, const GainSequence& gain,
                RngStream& rng);

/// One sliding-window step: draw a fresh raw estimate at theta, push it into
/// the buffer, subtract a_k times the window mean.
Vector swsgd_step(const Problem& problem, const RawEstimatorKind& estimator,
                  WindowBuffer& buffer, const Vector& theta, std::int64_t k,
                  const GainSequence& gain, RngStream& rng);

/// Runs `config.iterations` steps from theta0 and records the squared-error
/// trajectory. Pure function of (config, problem, estimator, stream spec):
/// identical inputs give bitwise-identical trajectories. Throws
/// DivergenceError (carrying the offending k) if an iterate goes non-finite
/// or beyond the guard.
Trajectory run(const OptimizerConfig& config, const Problem& problem,
               const EstimatorKind& estimator, const RngStreamSpec& stream);

}  // namespace swsgd

#pragma once

#include <span>
#include <string>
#include <vector>

#include "swsgd/optimizers.hpp"

namespace swsgd {

/// Outcome of one convergence-condition check. Conditions 2 and 3 are
/// decidable; Conditions 1 and 4 are asymptotic claims, so finite runs can
/// only report numeric evidence ("monitored"), never a proof.
struct ConditionReport {
    enum class Status { Pass, Fail, Monitored };

    int condition_id = 0;          // 1..4
    Status status = Status::Monitored;
    double evidence = 0.0;         // scalar summary (sup estimate, sum, ...)
    std::string detail;
};

std::string to_string(ConditionReport::Status s);

/// Condition 3: step sizes must satisfy sum a_k = inf, sum a_k^2 < inf,
/// which for a_k = a/(k+1)^alpha means alpha in (0.5, 1] and a > 0.
ConditionReport validate_gain(const GainSequence& gain);

/// Condition 2: every built-in problem has an analytic, everywhere
/// continuous gradient; recorded structurally.
ConditionReport continuity_report();

/// Condition 4 evidence: partial sums S_K = sum_{i<=K} a_i ||beta_i|| along
/// a recorded window-of-two trajectory (iterates and raw estimates must have
/// been retained). beta_0 = 0: the first window holds a single fresh
/// estimate and is conditionally unbiased.
struct BiasPartialSums {
    std::vector<double> sums;  // one entry per step, nondecreasing
    bool plateaued = false;    // S_K - S_{K/2} <= 0.01 S_K
    ConditionReport report() const;
};

BiasPartialSums bias_partial_sums(const Trajectory& trajectory,
                                  const Problem& problem,
                                  const GainSequence& gain);

/// Lipschitz constant of the gradient of theta^T A theta: M = 2 ||A||
/// (spectral norm). A must be symmetric to 1e-10 relative.
double lipschitz_quadratic(const Matrix& a);

/// Condition 1 evidence: max over steps of the across-replication mean
/// estimate norm. Trajectories must retain per-step estimate norms.
ConditionReport boundedness_monitor(std::span<const Trajectory> trajectories);

/// Same monitor computed from already-aggregated per-step mean norms.
ConditionReport boundedness_from_mean_norms(std::span<const double> mean_norms);

}  // namespace swsgd

#include "swsgd/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace swsgd {

std::string to_string(ConditionReport::Status s) {
    switch (s) {
        case ConditionReport::Status::Pass: return "pass";
        case ConditionReport::Status::Fail: return "fail";
        case ConditionReport::Status::Monitored: return "monitored";
    }
    return "unknown";
}

ConditionReport validate_gain(const GainSequence& gain) {
    ConditionReport r;
    r.condition_id = 3;
    const bool ok = gain_is_valid(gain);
    r.status = ok ? ConditionReport::Status::Pass
                  : ConditionReport::Status::Fail;
    r.evidence = gain.alpha;
    r.detail = ok ? "alpha in (0.5, 1] and a > 0"
                  : "requires alpha in (0.5, 1] and a > 0; got alpha = " +
                        std::to_string(gain.alpha) +
                        ", a = " + std::to_string(gain.a);
    return r;
}

ConditionReport continuity_report() {
    ConditionReport r;
    r.condition_id = 2;
    r.status = ConditionReport::Status::Pass;
    r.evidence = 0.0;
    r.detail = "analytic gradient, continuous everywhere (structural)";
    return r;
}

ConditionReport BiasPartialSums::report() const {
    ConditionReport r;
    r.condition_id = 4;
    r.status = ConditionReport::Status::Monitored;
    r.evidence = sums.empty() ? 0.0 : sums.back();
    r.detail = plateaued ? "monitored: plateauing" : "monitored: still growing";
    return r;
}

BiasPartialSums bias_partial_sums(const Trajectory& trajectory,
                                  const Problem& problem,
                                  const GainSequence& gain) {
    const auto& thetas = trajectory.iterates;
    const auto& raws = trajectory.raw_estimates;
    if (thetas.empty() || raws.empty()) {
        throw InvalidInputError(
            "bias_partial_sums requires a trajectory recorded with iterates "
            "and raw estimates retained");
    }
    if (thetas.size() != raws.size() + 1) {
        throw InvalidInputError(
            "trajectory retention is inconsistent: expected one more iterate "
            "than raw estimates");
    }

    BiasPartialSums out;
    out.sums.reserve(raws.size());
    double s = 0.0;
    // Step 0 contributes nothing: the window holds only the fresh estimate.
    out.sums.push_back(0.0);
    for (std::size_t i = 1; i < raws.size(); ++i) {
        const Vector beta =
            sw_bias_t2(problem, thetas[i], thetas[i - 1], raws[i - 1]);
        s += gain_at(gain, static_cast<std::int64_t>(i)) * beta.norm();
        out.sums.push_back(s);
    }
    const std::size_t n = out.sums.size();
    const double tail = out.sums[n - 1] - out.sums[(n - 1) / 2];
    out.plateaued = tail <= 0.01 * out.sums[n - 1];
    return out;
}

double lipschitz_quadratic(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw InvalidInputError("lipschitz_quadratic requires a square matrix");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        throw InvalidInputError(
            "lipschitz_quadratic requires a symmetric matrix (relative "
            "asymmetry " + std::to_string(asym / scale) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()),
                                             Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double m = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        m = std::max(m, std::abs(ev[i]));
    }
    return 2.0 * m;
}

ConditionReport boundedness_monitor(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) {
        throw InvalidInputError("boundedness_monitor needs trajectories");
    }
    const std::size_t steps = trajectories.front().estimate_norms.size();
    for (const auto& t : trajectories) {
        if (t.estimate_norms.size() != steps) {
            throw InvalidInputError(
                "trajectories must retain estimate norms of equal length");
        }
    }
    if (steps == 0) {
        throw InvalidInputError(
            "boundedness_monitor requires estimate norms to be retained");
    }
    std::vector<double> means(steps, 0.0);
    for (const auto& t : trajectories) {
        for (std::size_t k = 0; k < steps; ++k) {
            means[k] += t.estimate_norms[k];
        }
    }
    const double inv = 1.0 / static_cast<double>(trajectories.size());
    for (auto& m : means) m *= inv;
    return boundedness_from_mean_norms(means);
}

ConditionReport boundedness_from_mean_norms(
    std::span<const double> mean_norms) {
    if (mean_norms.empty()) {
        throw InvalidInputError("no estimate norms provided");
    }
    ConditionReport r;
    r.condition_id = 1;
    r.status = ConditionReport::Status::Monitored;
    r.evidence = *std::max_element(mean_norms.begin(), mean_norms.end());
    r.detail = "max over k of mean ||estimate|| across replications";
    return r;
}

}  // namespace swsgd

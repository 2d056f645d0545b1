#include "swsgd/optimizers.hpp"

#include <cmath>

namespace swsgd {

namespace {

bool all_finite(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return false;
    }
    return true;
}

Vector apply_update(const Vector& theta, double ak, const Vector& direction) {
    return theta - ak * direction;
}

}  // namespace

Vector gd_step(const Problem& problem, const Vector& theta, std::int64_t k,
               const GainSequence& gain) {
    const Vector g = problem.true_gradient(theta);
    return apply_update(theta, gain_at(gain, k), g);
}

Vector sgd_step(const Problem& problem, const RawEstimatorKind& estimator,
                const Vector& theta, std::int64_t k, const GainSequence& gain,
                RngStream& rng) {
    const Vector g = raw_estimate(estimator, problem, theta, k, rng);
    return apply_update(theta, gain_at(gain, k), g);
}

Vector swsgd_step(const Problem& problem, const RawEstimatorKind& estimator,
                  WindowBuffer& buffer, const Vector& theta, std::int64_t k,
                  const GainSequence& gain, RngStream& rng) {
    const Vector fresh = raw_estimate(estimator, problem, theta, k, rng);
    const Vector avg = sw_estimate(buffer, fresh);
    return apply_update(theta, gain_at(gain, k), avg);
}

Trajectory run(const OptimizerConfig& config, const Problem& problem,
               const EstimatorKind& estimator, const RngStreamSpec& stream) {
    if (config.iterations < 0) {
        throw InvalidInputError("iterations must be >= 0");
    }
    if (config.record_stride < 1) {
        throw InvalidInputError("record_stride must be >= 1");
    }
    if (!gain_is_valid(config.gain)) {
        throw InvalidInputError(
            "optimizer gain is invalid: requires a > 0 and alpha in (0.5, 1]");
    }
    if (config.theta0.size() != problem.dimension()) {
        throw DimensionMismatchError(
            "theta0 dimension does not match the problem");
    }
    if (!all_finite(config.theta0)) {
        throw InvalidInputError("theta0 must be finite");
    }

    const bool is_window = std::holds_alternative<SlidingWindow>(estimator);
    if (config.kind == OptimizerKind::SWSGD && !is_window) {
        throw InvalidInputError(
            "SWSGD requires a SlidingWindow estimator kind");
    }
    if (config.kind != OptimizerKind::SWSGD && is_window) {
        throw InvalidInputError(
            "SlidingWindow estimator requires the SWSGD optimizer");
    }

    RngStream rng = derive_stream(stream);
    const Vector& theta_star = problem.theta_star();
    const std::int64_t K = config.iterations;

    Trajectory traj;
    traj.indices.reserve(K / config.record_stride + 2);
    traj.squared_errors.reserve(K / config.record_stride + 2);
    if (config.record_estimate_norms) traj.estimate_norms.reserve(K);
    if (config.record_iterates) traj.iterates.reserve(K + 1);
    if (config.record_raw_estimates) traj.raw_estimates.reserve(K);

    Vector theta = config.theta0;
    traj.indices.push_back(0);
    traj.squared_errors.push_back((theta - theta_star).squaredNorm());
    if (config.record_iterates) traj.iterates.push_back(theta);

    WindowBuffer buffer(is_window
                            ? std::get<SlidingWindow>(estimator).t
                            : 1);

    for (std::int64_t k = 0; k < K; ++k) {
        Vector direction;
        switch (config.kind) {
            case OptimizerKind::GD:
                direction = problem.true_gradient(theta);
                break;
            case OptimizerKind::SGD: {
                const RawEstimatorKind raw = std::visit(
                    [](const auto& e) -> RawEstimatorKind {
                        if constexpr (std::is_same_v<std::decay_t<decltype(e)>,
                                                     SlidingWindow>) {
                            throw InvalidInputError(
                                "SlidingWindow estimator requires SWSGD");
                        } else {
                            return e;
                        }
                    },
                    estimator);
                direction = raw_estimate(raw, problem, theta, k, rng);
                break;
            }
            case OptimizerKind::SWSGD: {
                const auto& win = std::get<SlidingWindow>(estimator);
                const Vector fresh =
                    raw_estimate(win.inner, problem, theta, k, rng);
                if (config.record_raw_estimates) {
                    traj.raw_estimates.push_back(fresh);
                }
                direction = sw_estimate(buffer, fresh);
                break;
            }
        }
        if (config.record_raw_estimates && config.kind == OptimizerKind::SGD) {
            traj.raw_estimates.push_back(direction);
        }
        if (config.record_estimate_norms) {
            traj.estimate_norms.push_back(direction.norm());
        }

        theta = apply_update(theta, gain_at(config.gain, k), direction);

        if (!all_finite(theta) ||
            theta.cwiseAbs().maxCoeff() > kDivergenceGuard) {
            throw DivergenceError(
                "iterate diverged at k = " + std::to_string(k + 1), k + 1);
        }

        if (config.record_iterates) traj.iterates.push_back(theta);
        const std::int64_t next = k + 1;
        if (next % config.record_stride == 0 || next == K) {
            traj.indices.push_back(next);
            traj.squared_errors.push_back((theta - theta_star).squaredNorm());
        }
    }

    traj.final_theta = std::move(theta);
    return traj;
}

}  // namespace swsgd

#include "swsgd/estimators.hpp"

namespace swsgd {

WindowBuffer::WindowBuffer(std::int64_t t) : capacity_(t) {
    if (t < 1) throw InvalidInputError("window size must be >= 1");
}

Vector WindowBuffer::push_and_mean(const Vector& fresh) {
    if (!ring_.empty() && ring_.front().size() != fresh.size()) {
        throw DimensionMismatchError(
            "window entry dimension does not match buffer contents");
    }
    if (size() == capacity_) ring_.pop_front();
    ring_.push_back(fresh);
    Vector sum = ring_.front();
    for (std::size_t i = 1; i < ring_.size(); ++i) sum += ring_[i];
    return sum / static_cast<double>(ring_.size());
}

Vector raw_estimate(const RawEstimatorKind& kind, const Problem& problem,
                    const Vector& theta, std::int64_t k, RngStream& rng) {
    const NoiseDraw draw = sample_noise(problem.noise_model(), k, theta, rng);
    return std::visit(
        [&](const auto& est) -> Vector {
            using E = std::decay_t<decltype(est)>;
            if constexpr (std::is_same_v<E, ScoreFunctionUnbiased>) {
                return problem.score_function_estimate(theta, draw);
            } else if constexpr (std::is_same_v<E, Pathwise>) {
                return problem.pathwise_gradient(theta, draw);
            } else {
                static_assert(std::is_same_v<E, OffsetBiased>);
                if (est.b.size() != problem.dimension()) {
                    throw DimensionMismatchError(
                        "offset vector dimension does not match the problem");
                }
                return problem.pathwise_gradient(theta, draw) + est.b;
            }
        },
        kind);
}

Vector sw_estimate(WindowBuffer& buffer, const Vector& fresh) {
    return buffer.push_and_mean(fresh);
}

Vector sw_bias_t2(const Problem& problem, const Vector& theta_k,
                  const Vector& theta_km1, const Vector& raw_km1) {
    if (theta_k.size() != problem.dimension() ||
        theta_km1.size() != problem.dimension() ||
        raw_km1.size() != problem.dimension()) {
        throw DimensionMismatchError("sw_bias_t2: dimension mismatch");
    }
    const Vector g_km1 = problem.true_gradient(theta_km1);
    const Vector g_k = problem.true_gradient(theta_k);
    return 0.5 * (g_km1 - g_k) + 0.5 * (raw_km1 - g_km1);
}

}  // namespace swsgd

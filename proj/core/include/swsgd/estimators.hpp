#pragma once

#include <cstdint>
#include <deque>
#include <variant>

#include "swsgd/problems.hpp"

namespace swsgd {

/// Sampling rules producing one gradient estimate per fresh noise draw.
struct ScoreFunctionUnbiased {};
struct Pathwise {};
struct OffsetBiased {
    Vector b;
};

using RawEstimatorKind =
    std::variant<ScoreFunctionUnbiased, Pathwise, OffsetBiased>;

/// Uniform average over the last t raw estimates, each evaluated at the
/// iterate where it was produced.
struct SlidingWindow {
    std::int64_t t = 2;
    RawEstimatorKind inner = Pathwise{};
};

using EstimatorKind = std::variant<ScoreFunctionUnbiased, Pathwise,
                                   OffsetBiased, SlidingWindow>;

/// Ring of up to t raw gradient estimates, oldest first. The entries are
/// the raw draws exactly as produced at past iterates; they are never
/// re-evaluated, so the staleness that causes the window bias is preserved.
class WindowBuffer {
public:
    explicit WindowBuffer(std::int64_t t);

    std::int64_t capacity() const { return capacity_; }
    std::int64_t size() const { return static_cast<std::int64_t>(ring_.size()); }

    /// Pushes a fresh raw estimate (evicting the oldest when full) and
    /// returns the mean of the held entries. With a single entry held the
    /// result is bitwise the fresh estimate.
    Vector push_and_mean(const Vector& fresh);

    const Vector& entry(std::int64_t i) const { return ring_.at(i); }

private:
    std::int64_t capacity_;
    std::deque<Vector> ring_;
};

/// One fresh raw gradient estimate of the given kind at theta. Draws a
/// single noise realization from the problem's model.
Vector raw_estimate(const RawEstimatorKind& kind, const Problem& problem,
                    const Vector& theta, std::int64_t k, RngStream& rng);

/// Window update: push fresh into the buffer, return the current average.
Vector sw_estimate(WindowBuffer& buffer, const Vector& fresh);

/// Conditional bias of the t = 2 window estimator given the history:
///   beta_k = (g(theta_{k-1}) - g(theta_k)) / 2
///          + (raw_{k-1} - g(theta_{k-1})) / 2
/// where raw_{k-1} is the stored raw estimate produced at theta_{k-1}.
Vector sw_bias_t2(const Problem& problem, const Vector& theta_k,
                  const Vector& theta_km1, const Vector& raw_km1);

}  // namespace swsgd

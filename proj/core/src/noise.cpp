#include "swsgd/noise.hpp"

#include <cmath>

#include "swsgd/errors.hpp"

namespace swsgd {

namespace {

double sample_truncated_offset(const TruncatedGaussianMultiplicative& m,
                               RngStream& rng) {
    if (m.r < 0.0) throw InvalidInputError("noise variance must be >= 0");
    if (m.c <= 0.0) {
        throw InvalidInputError("truncation half-width must be > 0");
    }
    const double sd = std::sqrt(m.r);
    const double bound = m.c * sd;
    // Rejection against the symmetric window around the mean. With c = 5
    // the acceptance probability is ~1, so the loop is all but free.
    for (;;) {
        const double x = sd * rng.next_normal();
        if (std::abs(x) <= bound) return x;
    }
}

}  // namespace

NoiseDraw sample_noise(const NoiseModel& model, std::int64_t k,
                       const Vector& theta, RngStream& rng) {
    return std::visit(
        [&](const auto& m) -> NoiseDraw {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GaussianMultiplicative>) {
                if (m.r < 0.0) {
                    throw InvalidInputError("noise variance must be >= 0");
                }
                return ScalarDraw{1.0 + std::sqrt(m.r) * rng.next_normal()};
            } else if constexpr (std::is_same_v<
                                     M, TruncatedGaussianMultiplicative>) {
                return ScalarDraw{1.0 + sample_truncated_offset(m, rng)};
            } else if constexpr (std::is_same_v<M, DecayingMultiplicative>) {
                if (m.gamma < 0.5) {
                    throw InvalidInputError(
                        "decaying noise requires gamma >= 0.5");
                }
                const double x = sample_truncated_offset(m.base, rng);
                const double scale =
                    std::pow(static_cast<double>(k) + 1.0, m.gamma);
                return ScalarDraw{1.0 + x / scale};
            } else if constexpr (std::is_same_v<M, SimpleExampleNoise>) {
                if (m.sigma <= 0.0) {
                    throw InvalidInputError(
                        "simple-example noise requires sigma > 0");
                }
                if (theta.size() != 1) {
                    throw DimensionMismatchError(
                        "simple-example noise requires a 1-dimensional theta");
                }
                const double th = theta[0];
                if (th == 0.0) {
                    throw DegenerateParameterError(
                        "simple-example noise is undefined at theta = 0");
                }
                const double z = rng.next_normal(1.0, 1.0);
                const double w =
                    rng.next_normal(th * th, m.sigma * std::abs(th));
                return PairDraw{z, w};
            } else {
                static_assert(std::is_same_v<M, AdditiveVector>);
                Vector eps(theta.size());
                const double sd = std::sqrt(m.c);
                for (Eigen::Index i = 0; i < eps.size(); ++i) {
                    eps[i] = sd * rng.next_normal();
                }
                return VectorDraw{std::move(eps)};
            }
        },
        model);
}

}  // namespace swsgd

#pragma once

#include <cstdint>
#include <variant>

#include <Eigen/Core>

#include "swsgd/errors.hpp"
#include "swsgd/rng.hpp"

namespace swsgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// V ~ N(1, r); r is the variance.
struct GaussianMultiplicative {
    double r = 0.0;
};

/// V from N(1, r) conditioned on |V - 1| <= c * sqrt(r), by rejection.
/// Bounded support keeps the randomness admissible for the sliding-window
/// convergence analysis; c = 5 leaves mean/variance essentially untouched.
struct TruncatedGaussianMultiplicative {
    double r = 0.0;
    double c = 5.0;
};

/// V_k = 1 + X_k / (k+1)^gamma with X_k a bounded mean-zero draw taken from
/// the truncated-Gaussian base (X = V_base - 1). Var(V_k) = O(1/k^{2 gamma}).
struct DecayingMultiplicative {
    double gamma = 0.5;
    TruncatedGaussianMultiplicative base{};
};

/// The (Z, W) pair of the one-dimensional example: Z ~ N(1, 1) and
/// W | theta ~ N(theta^2, sigma^2 theta^2), independent of Z.
struct SimpleExampleNoise {
    double sigma = 1.0;
};

/// eps ~ N(0, c I), a p-vector. Backs the additive-noise quadratic used to
/// validate covariance predictions with a noise whose covariance does not
/// vanish at the optimum.
struct AdditiveVector {
    double c = 0.0;
};

using NoiseModel = std::variant<GaussianMultiplicative,
                                TruncatedGaussianMultiplicative,
                                DecayingMultiplicative,
                                SimpleExampleNoise,
                                AdditiveVector>;

/// One realization of a noise model.
struct ScalarDraw {
    double v = 1.0;
};
struct PairDraw {
    double z = 1.0;
    double w = 0.0;
};
struct VectorDraw {
    Vector eps;
};

using NoiseDraw = std::variant<ScalarDraw, PairDraw, VectorDraw>;

/// Draws one realization. k is the iteration index (used by the decaying
/// model); theta is the current iterate (the simple-example W depends on it,
/// and the additive model needs its dimension).
NoiseDraw sample_noise(const NoiseModel& model, std::int64_t k,
                       const Vector& theta, RngStream& rng);

}  // namespace swsgd

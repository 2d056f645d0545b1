#pragma once

#include <memory>

#include "swsgd/noise.hpp"

namespace swsgd {

/// A stochastic optimization problem: true loss L(theta) = E[Q(theta, V)],
/// its analytic gradient and Hessian, the noisy loss Q, the derivative of Q
/// at fixed noise, and the optimum.
///
/// Instances are immutable after construction and may be shared freely
/// across replication threads.
class Problem {
public:
    virtual ~Problem() = default;

    virtual Eigen::Index dimension() const = 0;
    virtual const Vector& theta_star() const = 0;
    virtual const NoiseModel& noise_model() const = 0;

    virtual double loss(const Vector& theta) const = 0;
    virtual Vector true_gradient(const Vector& theta) const = 0;
    virtual double noisy_loss(const Vector& theta,
                              const NoiseDraw& draw) const = 0;

    /// dQ/dtheta holding the noise realization fixed.
    virtual Vector pathwise_gradient(const Vector& theta,
                                     const NoiseDraw& draw) const = 0;

    virtual Matrix hessian_at(const Vector& theta) const = 0;

    /// Whether the noise distribution depends on theta, i.e. whether a
    /// score-function correction exists for this problem.
    virtual bool has_score_term() const { return false; }

    /// Pathwise derivative plus the score-function correction; unbiased for
    /// the true gradient even when the noise depends on theta.
    virtual Vector score_function_estimate(const Vector&,
                                           const NoiseDraw&) const {
        throw UnsupportedEstimatorError(
            "problem has no score term; the score-function estimator is only "
            "defined when the noise distribution depends on theta");
    }

protected:
    void check_dimension(const Vector& theta) const {
        if (theta.size() != dimension()) {
            throw DimensionMismatchError(
                "theta has dimension " + std::to_string(theta.size()) +
                ", problem expects " + std::to_string(dimension()));
        }
    }
};

/// L(theta) = (theta - 6)^2 + theta^2 in one dimension, with
/// Q(theta, (Z, W)) = (theta - 6)^2 Z + W. The optimum is theta* = 3 with
/// L(theta*) = 18. The noise depends on theta through W, so the pathwise
/// derivative (2 theta - 12) Z is biased and the score correction restores
/// unbiasedness.
class SimpleExample1D final : public Problem {
public:
    /// eq210_literal switches the loss factor inside the score product to
    /// theta^2 Z + W (the alternative printed form); both choices have the
    /// same expectation and differ only in variance.
    explicit SimpleExample1D(double sigma, bool eq210_literal = false);

    Eigen::Index dimension() const override { return 1; }
    const Vector& theta_star() const override { return theta_star_; }
    const NoiseModel& noise_model() const override { return noise_; }

    double loss(const Vector& theta) const override;
    Vector true_gradient(const Vector& theta) const override;
    double noisy_loss(const Vector& theta, const NoiseDraw& draw) const override;
    Vector pathwise_gradient(const Vector& theta,
                             const NoiseDraw& draw) const override;
    Matrix hessian_at(const Vector& theta) const override;

    bool has_score_term() const override { return true; }
    Vector score_function_estimate(const Vector& theta,
                                   const NoiseDraw& draw) const override;

    /// d log p_W(w | theta) / d theta = -1/theta - (theta^4 - w^2) /
    /// (sigma^2 theta^3). Throws on theta = 0.
    double score_log_pdf_gradient(double theta, double w) const;

    double sigma() const { return sigma_; }
    bool eq210_literal() const { return eq210_literal_; }

private:
    double sigma_;
    bool eq210_literal_;
    Vector theta_star_;
    NoiseModel noise_;
};

/// L(theta) = (theta - center)^T (theta - center) with multiplicative noise
/// Q = L * V, V ~ N(1, r). Hessian is 2 I everywhere.
class QuadraticProblem final : public Problem {
public:
    QuadraticProblem(Vector center, double r);
    QuadraticProblem(Vector center, NoiseModel noise);

    Eigen::Index dimension() const override { return center_.size(); }
    const Vector& theta_star() const override { return center_; }
    const NoiseModel& noise_model() const override { return noise_; }

    double loss(const Vector& theta) const override;
    Vector true_gradient(const Vector& theta) const override;
    double noisy_loss(const Vector& theta, const NoiseDraw& draw) const override;
    Vector pathwise_gradient(const Vector& theta,
                             const NoiseDraw& draw) const override;
    Matrix hessian_at(const Vector& theta) const override;

    const Vector& center() const { return center_; }

private:
    Vector center_;
    NoiseModel noise_;
};

/// Additive-noise variant of the quadratic: Q = L(theta) + 2 theta^T eps
/// with eps ~ N(0, c I). Its gradient noise 2 eps has the constant
/// covariance 4 c I, which keeps covariance predictions non-degenerate at
/// the optimum (multiplicative noise vanishes there). Validation aid, not
/// one of the experiment configurations.
class AdditiveNoiseQuadratic final : public Problem {
public:
    AdditiveNoiseQuadratic(Vector center, double c);

    Eigen::Index dimension() const override { return center_.size(); }
    const Vector& theta_star() const override { return center_; }
    const NoiseModel& noise_model() const override { return noise_; }

    double loss(const Vector& theta) const override;
    Vector true_gradient(const Vector& theta) const override;
    double noisy_loss(const Vector& theta, const NoiseDraw& draw) const override;
    Vector pathwise_gradient(const Vector& theta,
                             const NoiseDraw& draw) const override;
    Matrix hessian_at(const Vector& theta) const override;

private:
    Vector center_;
    NoiseModel noise_;
};

/// Skewed quartic test loss
///   L(theta) = sum (B theta)_i^2 + 0.1 sum (B theta)_i^3
///            + 0.01 sum (B theta)_i^4
/// where p B is the upper-triangular matrix of ones (diagonal included).
/// theta* = 0 and L(0) = 0. Multiplicative noise Q = L * V, V ~ N(1, r).
class SkewedQuartic final : public Problem {
public:
    SkewedQuartic(Eigen::Index p, double r);
    SkewedQuartic(Eigen::Index p, NoiseModel noise);

    Eigen::Index dimension() const override { return theta_star_.size(); }
    const Vector& theta_star() const override { return theta_star_; }
    const NoiseModel& noise_model() const override { return noise_; }

    double loss(const Vector& theta) const override;
    Vector true_gradient(const Vector& theta) const override;
    double noisy_loss(const Vector& theta, const NoiseDraw& draw) const override;
    Vector pathwise_gradient(const Vector& theta,
                             const NoiseDraw& draw) const override;
    Matrix hessian_at(const Vector& theta) const override;

    const Matrix& b_matrix() const { return b_; }

private:
    Matrix b_;
    Vector theta_star_;
    NoiseModel noise_;
};

}  // namespace swsgd

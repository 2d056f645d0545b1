#include "swsgd/problems.hpp"

#include <cmath>

namespace swsgd {

namespace {

double scalar_v(const NoiseDraw& draw) {
    if (const auto* s = std::get_if<ScalarDraw>(&draw)) return s->v;
    throw InvalidInputError(
        "noise draw does not match the problem's model (scalar V expected)");
}

const PairDraw& pair_zw(const NoiseDraw& draw) {
    if (const auto* p = std::get_if<PairDraw>(&draw)) return *p;
    throw InvalidInputError(
        "noise draw does not match the problem's model ((Z, W) expected)");
}

const Vector& vector_eps(const NoiseDraw& draw) {
    if (const auto* v = std::get_if<VectorDraw>(&draw)) return v->eps;
    throw InvalidInputError(
        "noise draw does not match the problem's model (vector eps expected)");
}

}  // namespace

// ---------------------------------------------------------------- simple 1-D

SimpleExample1D::SimpleExample1D(double sigma, bool eq210_literal)
    : sigma_(sigma), eq210_literal_(eq210_literal),
      theta_star_(Vector::Constant(1, 3.0)),
      noise_(SimpleExampleNoise{sigma}) {
    if (sigma <= 0.0) {
        throw InvalidInputError("SimpleExample1D requires sigma > 0");
    }
}

double SimpleExample1D::loss(const Vector& theta) const {
    check_dimension(theta);
    const double th = theta[0];
    return (th - 6.0) * (th - 6.0) + th * th;
}

Vector SimpleExample1D::true_gradient(const Vector& theta) const {
    check_dimension(theta);
    return Vector::Constant(1, 4.0 * theta[0] - 12.0);
}

double SimpleExample1D::noisy_loss(const Vector& theta,
                                   const NoiseDraw& draw) const {
    check_dimension(theta);
    const auto& zw = pair_zw(draw);
    const double th = theta[0];
    return (th - 6.0) * (th - 6.0) * zw.z + zw.w;
}

Vector SimpleExample1D::pathwise_gradient(const Vector& theta,
                                          const NoiseDraw& draw) const {
    check_dimension(theta);
    const auto& zw = pair_zw(draw);
    // dW/dtheta = 0 when the realization is held fixed.
    return Vector::Constant(1, (2.0 * theta[0] - 12.0) * zw.z);
}

Matrix SimpleExample1D::hessian_at(const Vector& theta) const {
    check_dimension(theta);
    return Matrix::Constant(1, 1, 4.0);
}

double SimpleExample1D::score_log_pdf_gradient(double theta, double w) const {
    if (theta == 0.0) {
        throw DegenerateParameterError(
            "score term is singular at theta = 0 (theta^3 denominator)");
    }
    const double th2 = theta * theta;
    return -1.0 / theta -
           (th2 * th2 - w * w) / (sigma_ * sigma_ * theta * th2);
}

Vector SimpleExample1D::score_function_estimate(const Vector& theta,
                                                const NoiseDraw& draw) const {
    check_dimension(theta);
    const auto& zw = pair_zw(draw);
    const double th = theta[0];
    const double score = score_log_pdf_gradient(th, zw.w);
    const double q = eq210_literal_
                         ? th * th * zw.z + zw.w
                         : (th - 6.0) * (th - 6.0) * zw.z + zw.w;
    return Vector::Constant(1, (2.0 * th - 12.0) * zw.z + q * score);
}

// ----------------------------------------------------------------- quadratic

QuadraticProblem::QuadraticProblem(Vector center, double r)
    : QuadraticProblem(std::move(center), GaussianMultiplicative{r}) {}

QuadraticProblem::QuadraticProblem(Vector center, NoiseModel noise)
    : center_(std::move(center)), noise_(std::move(noise)) {
    if (center_.size() < 1) {
        throw InvalidInputError("quadratic center must have dimension >= 1");
    }
}

double QuadraticProblem::loss(const Vector& theta) const {
    check_dimension(theta);
    return (theta - center_).squaredNorm();
}

Vector QuadraticProblem::true_gradient(const Vector& theta) const {
    check_dimension(theta);
    return 2.0 * (theta - center_);
}

double QuadraticProblem::noisy_loss(const Vector& theta,
                                    const NoiseDraw& draw) const {
    return loss(theta) * scalar_v(draw);
}

Vector QuadraticProblem::pathwise_gradient(const Vector& theta,
                                           const NoiseDraw& draw) const {
    check_dimension(theta);
    return (2.0 * (theta - center_)) * scalar_v(draw);
}

Matrix QuadraticProblem::hessian_at(const Vector& theta) const {
    check_dimension(theta);
    return 2.0 * Matrix::Identity(dimension(), dimension());
}

// ------------------------------------------------------- additive quadratic

AdditiveNoiseQuadratic::AdditiveNoiseQuadratic(Vector center, double c)
    : center_(std::move(center)), noise_(AdditiveVector{c}) {
    if (center_.size() < 1) {
        throw InvalidInputError("quadratic center must have dimension >= 1");
    }
    if (c < 0.0) {
        throw InvalidInputError("additive noise variance must be >= 0");
    }
}

double AdditiveNoiseQuadratic::loss(const Vector& theta) const {
    check_dimension(theta);
    return (theta - center_).squaredNorm();
}

Vector AdditiveNoiseQuadratic::true_gradient(const Vector& theta) const {
    check_dimension(theta);
    return 2.0 * (theta - center_);
}

double AdditiveNoiseQuadratic::noisy_loss(const Vector& theta,
                                          const NoiseDraw& draw) const {
    check_dimension(theta);
    return loss(theta) + 2.0 * theta.dot(vector_eps(draw));
}

Vector AdditiveNoiseQuadratic::pathwise_gradient(const Vector& theta,
                                                 const NoiseDraw& draw) const {
    check_dimension(theta);
    return 2.0 * (theta - center_) + 2.0 * vector_eps(draw);
}

Matrix AdditiveNoiseQuadratic::hessian_at(const Vector& theta) const {
    check_dimension(theta);
    return 2.0 * Matrix::Identity(dimension(), dimension());
}

// ------------------------------------------------------------ skewed quartic

SkewedQuartic::SkewedQuartic(Eigen::Index p, double r)
    : SkewedQuartic(p, NoiseModel(GaussianMultiplicative{r})) {}

SkewedQuartic::SkewedQuartic(Eigen::Index p, NoiseModel noise)
    : theta_star_(Vector::Zero(p)), noise_(std::move(noise)) {
    if (p < 1) throw InvalidInputError("skewed quartic requires p >= 1");
    b_ = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i; j < p; ++j) {
            b_(i, j) = 1.0 / static_cast<double>(p);
        }
    }
}

double SkewedQuartic::loss(const Vector& theta) const {
    check_dimension(theta);
    const Vector y = b_ * theta;
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double yi = y[i];
        const double yi2 = yi * yi;
        s2 += yi2;
        s3 += yi2 * yi;
        s4 += yi2 * yi2;
    }
    return s2 + 0.1 * s3 + 0.01 * s4;
}

Vector SkewedQuartic::true_gradient(const Vector& theta) const {
    check_dimension(theta);
    const Vector y = b_ * theta;
    Vector inner(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double yi = y[i];
        inner[i] = 2.0 * yi + 0.3 * yi * yi + 0.04 * yi * yi * yi;
    }
    return b_.transpose() * inner;
}

double SkewedQuartic::noisy_loss(const Vector& theta,
                                 const NoiseDraw& draw) const {
    return loss(theta) * scalar_v(draw);
}

Vector SkewedQuartic::pathwise_gradient(const Vector& theta,
                                        const NoiseDraw& draw) const {
    return true_gradient(theta) * scalar_v(draw);
}

Matrix SkewedQuartic::hessian_at(const Vector& theta) const {
    check_dimension(theta);
    const Vector y = b_ * theta;
    Vector d(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double yi = y[i];
        d[i] = 2.0 + 0.6 * yi + 0.12 * yi * yi;
    }
    return b_.transpose() * d.asDiagonal() * b_;
}

}  // namespace swsgd

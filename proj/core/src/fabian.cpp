#include "swsgd/fabian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace swsgd {

namespace {

constexpr double kStabilityTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;

void require_symmetric(const Matrix& m, const char* name) {
    if (m.rows() != m.cols()) {
        throw InvalidInputError(std::string(name) + " must be square");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * scale) {
        throw InvalidInputError(std::string(name) +
                                " must be symmetric (relative asymmetry " +
                                std::to_string(asym / scale) + ")");
    }
}

/// Symmetric eigendecomposition with deterministic conventions: eigenvalues
/// in descending order, each eigenvector's first component of magnitude
/// above 1e-12 made positive. The assembled covariance is invariant to
/// these conventions; fixing them makes intermediates testable.
void ordered_eigendecomposition(const Matrix& gamma, Vector& lambda,
                                Matrix& p) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 *
                                             (gamma + gamma.transpose()));
    if (es.info() != Eigen::Success) {
        throw InvalidInputError("eigendecomposition failed to converge");
    }
    const Eigen::Index n = gamma.rows();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const Vector raw = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) {
                         return raw[i] > raw[j];
                     });
    lambda.resize(n);
    p.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        lambda[c] = raw[order[c]];
        Vector col = es.eigenvectors().col(order[c]);
        for (Eigen::Index r = 0; r < n; ++r) {
            if (std::abs(col[r]) > 1e-12) {
                if (col[r] < 0.0) col = -col;
                break;
            }
        }
        p.col(c) = col;
    }
}

}  // namespace

double beta_plus(double alpha) {
    if (!(alpha > 0.5 && alpha <= 1.0)) {
        throw InvalidInputError("beta_plus requires alpha in (0.5, 1]");
    }
    return alpha == 1.0 ? 1.0 : 0.0;
}

Matrix asymptotic_sigma(const FabianInputs& inputs) {
    require_symmetric(inputs.gamma, "Gamma");
    require_symmetric(inputs.c, "C");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            0.5 * (inputs.c + inputs.c.transpose()), Eigen::EigenvaluesOnly);
        const double scale = std::max(1.0, inputs.c.cwiseAbs().maxCoeff());
        if (es.eigenvalues().minCoeff() < -kSymmetryTol * scale) {
            throw InvalidInputError(
                "C must be positive semidefinite (smallest eigenvalue " +
                std::to_string(es.eigenvalues().minCoeff()) + ")");
        }
    }
    const double bp = beta_plus(inputs.alpha);

    Vector lambda;
    Matrix p;
    ordered_eigendecomposition(inputs.gamma, lambda, p);

    const Eigen::Index n = lambda.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            if (lambda[i] + lambda[j] - bp <= kStabilityTol) {
                throw InstabilityError(
                    "stability violated: Lambda_" + std::to_string(i) + " + "
                    "Lambda_" + std::to_string(j) + " - beta_+ = " +
                    std::to_string(lambda[i] + lambda[j] - bp) +
                    " (eigenvalues " + std::to_string(lambda[i]) + ", " +
                    std::to_string(lambda[j]) + ")");
            }
        }
    }

    const Matrix inner =
        p.transpose() * inputs.phi * inputs.c * inputs.phi.transpose() * p;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = inner(i, j) / (lambda[i] + lambda[j] - bp);
        }
    }
    Matrix sigma = p * m * p.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

Vector asymptotic_mu(const FabianInputs& inputs, MuForm form) {
    const double bp = beta_plus(inputs.alpha);
    const Matrix shifted =
        inputs.gamma -
        0.5 * bp * Matrix::Identity(inputs.gamma.rows(), inputs.gamma.cols());
    if (inputs.t.size() != inputs.gamma.rows()) {
        throw DimensionMismatchError("T dimension does not match Gamma");
    }
    if (form == MuForm::Literal) {
        return shifted * inputs.t;
    }
    Eigen::FullPivLU<Matrix> lu(shifted);
    if (!lu.isInvertible()) {
        throw SingularMatrixError(
            "Gamma - beta_+/2 I is singular; inverse form unavailable");
    }
    return lu.solve(inputs.t);
}

namespace {

FabianInputs inputs_for(const Problem& problem, const GainSequence& gain,
                        Matrix c) {
    if (!gain_is_valid(gain)) {
        throw InvalidInputError("gain is invalid: alpha in (0.5, 1], a > 0");
    }
    const Eigen::Index p = problem.dimension();
    if (c.rows() != p || c.cols() != p) {
        throw DimensionMismatchError("C dimension does not match the problem");
    }
    FabianInputs in;
    in.gamma = gain.a * problem.hessian_at(problem.theta_star());
    in.phi = -gain.a * Matrix::Identity(p, p);
    in.c = std::move(c);
    in.t = Vector::Zero(p);
    in.alpha = gain.alpha;
    return in;
}

}  // namespace

FabianInputs sgd_inputs(const Problem& problem, const GainSequence& gain,
                        Matrix c) {
    return inputs_for(problem, gain, std::move(c));
}

FabianInputs swsgd_inputs(const Problem& problem, const GainSequence& gain,
                          Matrix c_window) {
    return inputs_for(problem, gain, std::move(c_window));
}

Matrix estimate_c(const Problem& problem, const RawEstimatorKind& estimator,
                  const Vector& theta_ref, std::int64_t n, RngStream& rng) {
    if (n < 2) throw InvalidInputError("estimate_c requires n >= 2");
    const Eigen::Index p = problem.dimension();
    Vector sum = Vector::Zero(p);
    Matrix outer = Matrix::Zero(p, p);
    for (std::int64_t i = 0; i < n; ++i) {
        const Vector g = raw_estimate(estimator, problem, theta_ref, 0, rng);
        sum += g;
        outer.selfadjointView<Eigen::Lower>().rankUpdate(g);
    }
    const double dn = static_cast<double>(n);
    const Vector mean = sum / dn;
    Matrix full = Matrix(outer.selfadjointView<Eigen::Lower>());
    Matrix c = (full - dn * mean * mean.transpose()) / (dn - 1.0);
    return 0.5 * (c + c.transpose());
}

double mse_at(const AsymptoticDistribution& dist, std::int64_t k) {
    if (k < 1) throw InvalidInputError("mse_at requires k >= 1");
    const double decay = std::pow(static_cast<double>(k), dist.alpha);
    return dist.sigma.trace() / decay + dist.mu.squaredNorm() / decay;
}

double intersection_k(double tr_sigma_unbiased, double tr_sigma_biased,
                      const Vector& w, double alpha) {
    if (!(alpha > 0.5 && alpha <= 1.0)) {
        throw InvalidInputError("intersection_k requires alpha in (0.5, 1]");
    }
    const double ww = w.squaredNorm();
    if (!(ww > 0.0)) {
        throw InvalidInputError("intersection_k requires w^T w > 0");
    }
    if (tr_sigma_unbiased <= tr_sigma_biased) {
        throw NoIntersectionError(
            "no intersection: tr(Sigma_unbiased) = " +
            std::to_string(tr_sigma_unbiased) +
            " does not exceed tr(Sigma_biased) = " +
            std::to_string(tr_sigma_biased) +
            "; the biased curve never rises above the unbiased one");
    }
    return std::pow((tr_sigma_unbiased - tr_sigma_biased) / ww, 1.0 / alpha);
}

}  // namespace swsgd

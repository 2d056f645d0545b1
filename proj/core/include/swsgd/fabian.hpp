#pragma once

#include <cstdint>

#include "swsgd/estimators.hpp"
#include "swsgd/gain.hpp"

namespace swsgd {

/// Inputs of the asymptotic-normality calculation for one algorithm:
///   Gamma = a H*, Phi = -a I, C = limit covariance of the gradient noise,
///   T = scaled limit of the bias sequence (zero for both algorithms here),
///   and the gain exponent alpha (beta = alpha).
/// Gamma must be symmetric: the covariance assembly diagonalizes it.
struct FabianInputs {
    Matrix gamma;
    Matrix phi;
    Matrix c;
    Vector t;
    double alpha = 0.501;
};

/// Limit distribution of k^{alpha/2} (theta_k - theta*).
struct AsymptoticDistribution {
    Vector mu;
    Matrix sigma;
    double alpha = 0.501;
};

enum class MuForm {
    Literal,  // (Gamma - beta_+/2 I) T, as printed
    Inverse,  // (Gamma - beta_+/2 I)^{-1} T
};

/// beta_+ = alpha if alpha = 1 exactly, else 0. alpha must lie in (0.5, 1].
double beta_plus(double alpha);

/// Limit covariance: eigendecompose Gamma = P Lambda P^T (eigenvalues
/// descending, first nonzero component of each eigenvector positive),
/// assemble M_ij = (P^T Phi C Phi^T P)_ij / (Lambda_ii + Lambda_jj - beta_+),
/// and return P M P^T, symmetrized.
///
/// Throws InstabilityError when some eigenvalue pair has
/// Lambda_ii + Lambda_jj - beta_+ <= 1e-12, naming the offending pair.
Matrix asymptotic_sigma(const FabianInputs& inputs);

/// Limit mean. Both supported algorithms have T = 0, which makes the two
/// forms agree at zero; the switch records the ambiguity rather than
/// resolving it.
Vector asymptotic_mu(const FabianInputs& inputs, MuForm form = MuForm::Literal);

/// Assembles the inputs for plain SGD: Gamma = a H(theta*), Phi = -a I,
/// T = 0. C is supplied by the caller (closed form or estimate_c).
FabianInputs sgd_inputs(const Problem& problem, const GainSequence& gain,
                        Matrix c);

/// Same assembly for the window-of-two algorithm: Gamma and Phi are
/// unchanged and T = 0 (the window bias decays to zero); only the supplied
/// covariance differs (the window average halves the raw covariance in the
/// limit).
FabianInputs swsgd_inputs(const Problem& problem, const GainSequence& gain,
                          Matrix c_window);

/// Empirical covariance of n fresh raw estimates at theta_ref, about their
/// sample mean, symmetrized. n >= 2.
Matrix estimate_c(const Problem& problem, const RawEstimatorKind& estimator,
                  const Vector& theta_ref, std::int64_t n, RngStream& rng);

/// Predicted mean squared error at iteration k >= 1:
///   tr(Sigma)/k^alpha + ||mu||^2 / k^alpha.
double mse_at(const AsymptoticDistribution& dist, std::int64_t k);

/// Iteration count where the unbiased curve tr(Sigma)/k^alpha crosses the
/// biased curve w^T w + tr(Sigma')/k^alpha:
///   k* = ((tr_sigma_unbiased - tr_sigma_biased) / w^T w)^{1/alpha}.
/// Returns the real-valued crossing; callers round for display.
double intersection_k(double tr_sigma_unbiased, double tr_sigma_biased,
                      const Vector& w, double alpha);

}  // namespace swsgd

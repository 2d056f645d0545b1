#pragma once

#include <cmath>
#include <cstdint>

#include "swsgd/errors.hpp"

namespace swsgd {

/// Decaying step-size sequence a_k = a / (k+1)^alpha.
///
/// Convergence of the stochastic algorithms requires alpha in (0.5, 1];
/// construction through make_gain_sequence enforces that range, while the
/// plain aggregate stays constructible so diagnostics can inspect invalid
/// candidates.
struct GainSequence {
    double a = 1.0;
    double alpha = 1.0;
};

inline bool gain_is_valid(const GainSequence& g) {
    return g.a > 0.0 && g.alpha > 0.5 && g.alpha <= 1.0;
}

inline GainSequence make_gain_sequence(double a, double alpha) {
    GainSequence g{a, alpha};
    if (!gain_is_valid(g)) {
        throw InvalidInputError(
            "gain sequence requires a > 0 and alpha in (0.5, 1]; got a=" +
            std::to_string(a) + ", alpha=" + std::to_string(alpha));
    }
    return g;
}

/// a_k for iteration k (k starts at 0; the +1 keeps the denominator nonzero).
inline double gain_at(const GainSequence& gain, std::int64_t k) {
    return gain.a / std::pow(static_cast<double>(k) + 1.0, gain.alpha);
}

}  // namespace swsgd

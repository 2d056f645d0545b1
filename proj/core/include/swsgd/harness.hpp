#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swsgd/diagnostics.hpp"
#include "swsgd/fabian.hpp"

namespace swsgd {

enum class ProblemFamily { Simple1D, Quadratic, QuadraticAdditive, SkewedQuartic };

/// Serializable description of a problem; the harness instantiates one
/// Problem per arm so each arm can carry its own noise level over the same
/// loss, optimum and dimension.
struct ProblemConfig {
    ProblemFamily family = ProblemFamily::Quadratic;
    Eigen::Index p = 2;        // quadratic / quartic dimension
    double sigma = 50.0;       // simple example
    bool eq210_literal = false;
    Vector center;             // quadratic center; defaults to zero
    double r = 1.0;            // multiplicative noise variance
    double c = 1.0;            // additive noise variance

    /// noise_override replaces r (multiplicative families), c (additive) or
    /// sigma (simple example).
    std::unique_ptr<Problem> build(
        std::optional<double> noise_override = std::nullopt) const;
};

struct EstimatorConfig {
    enum class Kind { ScoreFunction, Pathwise, OffsetBiased };
    Kind kind = Kind::Pathwise;
    Vector b;  // OffsetBiased only

    RawEstimatorKind build_raw() const;
};

struct ArmSpec {
    std::string label;
    OptimizerKind optimizer = OptimizerKind::SGD;
    std::int64_t window_t = 2;  // SWSGD only
    EstimatorConfig estimator{};
    std::optional<double> noise_override;
};

/// How the covariance entering the crossing-point prediction is obtained.
/// Multiplicative noise vanishes at the optimum, which makes the
/// at-the-limit covariance degenerate for the unbiased arm; the trajectory
/// policy estimates it empirically at a reference iterate instead.
enum class CPolicy { ClosedFormAtLimit, TrajectoryAtIterate };

struct IntersectionRequest {
    std::size_t unbiased_arm = 0;
    std::size_t biased_arm = 1;
    CPolicy policy = CPolicy::TrajectoryAtIterate;
    std::int64_t k_ref = 100;       // trajectory policy reference iteration
    std::int64_t n_samples = 100000;
};

enum class StreamPolicy {
    /// Replication j of every arm uses stream j: common random numbers,
    /// which pairs the arms' curves and sharpens their comparison.
    Paired,
    /// Replication j of arm i uses stream i * J + j (arms independent).
    PerArm,
};

struct ExperimentSpec {
    std::string name = "experiment";
    ProblemConfig problem{};
    std::vector<ArmSpec> arms;
    GainSequence gain{};
    Vector theta0;
    std::int64_t iterations = 10000;
    std::int64_t record_stride = 1;
    std::int64_t replications = 200;
    std::uint64_t master_seed = 42;
    StreamPolicy stream_policy = StreamPolicy::Paired;
    int threads = 0;  // 0 = hardware concurrency; affects wall time only
    std::string out_dir;  // optional default output directory for the CLI
    std::optional<IntersectionRequest> intersection;
};

struct MseCurve {
    std::string label;
    std::vector<std::int64_t> indices;
    std::vector<double> values;       // mean squared error per recorded k
    std::int64_t replications_total = 0;
    std::int64_t replications_used = 0;  // excludes diverged replications
};

struct ArmResult {
    MseCurve curve;
    std::vector<ConditionReport> reports;
    std::int64_t divergences = 0;
    std::vector<std::int64_t> diverged_replications;  // first few indices
};

struct IntersectionResult {
    double k_star = 0.0;  // NaN when the analysis failed (see error)
    double tr_sigma_unbiased = 0.0;
    double tr_sigma_biased = 0.0;
    Vector w;
    double alpha = 0.0;
    std::string c_policy;
    std::int64_t k_ref = 0;
    Matrix c_unbiased;
    Matrix c_biased;
    std::string error;  // empty on success
};

struct ExperimentResult {
    ExperimentSpec spec;  // fully-resolved effective configuration
    std::vector<ArmResult> arms;
    std::optional<IntersectionResult> intersection;
};

/// Runs every arm of the experiment over `replications` Monte Carlo
/// replications and aggregates the per-iteration mean squared errors.
/// Output is deterministic for a fixed spec: replications are reduced in
/// replication-index order regardless of the worker-pool size. Throws
/// DivergenceError when more than 1% of an arm's replications diverge.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// The crossing-point analysis between a designated unbiased/biased arm
/// pair on a quadratic problem: w = b/2 from the biased fixed point,
/// covariances per policy, then the predicted crossing of the two MSE
/// curves. Throws NoIntersectionError when the unbiased curve never rises
/// above the biased one.
IntersectionResult intersection_analysis(const ExperimentSpec& spec,
                                         const IntersectionRequest& request);

/// CSV with header `k,<label1>,<label2>,...`, one row per recorded
/// iteration, 17 significant digits. Curves must share recorded indices.
void emit_csv(const std::vector<MseCurve>& curves,
              const std::filesystem::path& path);

/// gnuplot script plotting MSE vs k from the CSV on log-log axes, with a
/// vertical line at the predicted crossing when one is present.
void emit_plot_script(const std::vector<MseCurve>& curves,
                      const std::optional<IntersectionResult>& intersection,
                      const std::string& csv_filename,
                      const std::filesystem::path& path);

/// Summary JSON: effective configuration, per-arm condition reports and
/// divergence counts, crossing-point analysis, output file names. Contains
/// no wall-clock data, so bytes depend only on the spec.
void emit_summary(const ExperimentResult& result,
                  const std::string& csv_filename,
                  const std::string& plot_filename,
                  const std::filesystem::path& path);

/// Runs one experiment and writes `<name>.csv`, `<name>.gp` and
/// `<name>.summary.json` under out_dir. Returns the result.
ExperimentResult run_and_emit(const ExperimentSpec& spec,
                              const std::filesystem::path& out_dir);

// ---------------------------------------------------------------- presets

struct PresetOptions {
    bool quick = true;  // full mode restores the original replication counts
    std::uint64_t seed = 42;
    std::optional<std::int64_t> replications;
    std::optional<std::int64_t> iterations;
    std::optional<std::int64_t> record_stride;
    int threads = 0;
    bool additive_c = false;  // fig4_1 validation variant
};

struct PresetBundle {
    std::string name;
    std::vector<ExperimentSpec> experiments;
};

/// Experiment presets: "fig2_1" (one-dimensional example, biased vs
/// score-function arms over four noise levels), "fig4_1" (quadratic,
/// offset-biased vs unbiased arms with crossing-point analysis) and
/// "fig4_2" (skewed quartic, plain vs window-of-two averaging). Accepts
/// both fig2_1 and fig2.1 spellings. Unknown names throw.
PresetBundle preset(const std::string& name, const PresetOptions& options = {});

}  // namespace swsgd

#include "swsgd/harness.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <future>
#include <thread>

#include "json.hpp"

namespace swsgd {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Streams reserved for covariance estimation, far above any replication
/// index an experiment can use.
constexpr std::uint64_t kCEstimateStreamBase = 1ULL << 32;

std::uint64_t stream_index_for(const ExperimentSpec& spec,
                               std::size_t arm_index, std::int64_t rep) {
    if (spec.stream_policy == StreamPolicy::Paired) {
        return static_cast<std::uint64_t>(rep);
    }
    return static_cast<std::uint64_t>(arm_index) *
               static_cast<std::uint64_t>(spec.replications) +
           static_cast<std::uint64_t>(rep);
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.arms.empty()) throw InvalidInputError("experiment has no arms");
    if (spec.replications < 1) throw InvalidInputError("replications must be >= 1");
    if (spec.iterations < 0) throw InvalidInputError("iterations must be >= 0");
    if (spec.record_stride < 1) throw InvalidInputError("record_stride must be >= 1");
    if (!gain_is_valid(spec.gain)) {
        throw InvalidInputError(
            "gain fails Condition 3: requires alpha in (0.5, 1] and a > 0 "
            "(got alpha = " + std::to_string(spec.gain.alpha) +
            ", a = " + std::to_string(spec.gain.a) + ")");
    }
    for (std::size_t i = 0; i < spec.arms.size(); ++i) {
        const auto& arm = spec.arms[i];
        if (arm.label.empty()) throw InvalidInputError("arm label must be non-empty");
        if (arm.label.find(',') != std::string::npos) {
            throw InvalidInputError("arm label must not contain a comma: " + arm.label);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.arms[j].label == arm.label) {
                throw InvalidInputError("duplicate arm label: " + arm.label);
            }
        }
    }
}

struct ReplicationOutcome {
    std::optional<Trajectory> trajectory;  // empty when diverged
};

OptimizerConfig arm_optimizer_config(const ExperimentSpec& spec,
                                     const ArmSpec& arm) {
    OptimizerConfig cfg;
    cfg.kind = arm.optimizer;
    cfg.window_t = arm.window_t;
    cfg.gain = spec.gain;
    cfg.theta0 = spec.theta0;
    cfg.iterations = spec.iterations;
    cfg.record_stride = spec.record_stride;
    cfg.record_estimate_norms = true;
    return cfg;
}

EstimatorKind arm_estimator(const ArmSpec& arm) {
    if (arm.optimizer == OptimizerKind::SWSGD) {
        return SlidingWindow{arm.window_t, arm.estimator.build_raw()};
    }
    return std::visit([](auto e) -> EstimatorKind { return e; },
                      arm.estimator.build_raw());
}

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs produce(j) for j = 0..n-1 on a bounded pool and hands the results
/// to consume(j, outcome) strictly in index order, so the reduction is
/// byte-identical for every pool size.
template <typename Produce, typename Consume>
void ordered_parallel_map(std::int64_t n, int threads, Produce produce,
                          Consume consume) {
    const std::int64_t chunk = 16;
    const std::int64_t n_chunks = (n + chunk - 1) / chunk;
    const int inflight = std::max(1, threads);

    std::deque<std::future<std::vector<ReplicationOutcome>>> pending;
    std::int64_t submitted = 0, consumed_chunks = 0;

    auto submit = [&]() {
        const std::int64_t begin = submitted * chunk;
        const std::int64_t end = std::min(n, begin + chunk);
        pending.push_back(std::async(std::launch::async, [=, &produce]() {
            std::vector<ReplicationOutcome> out;
            out.reserve(end - begin);
            for (std::int64_t j = begin; j < end; ++j) out.push_back(produce(j));
            return out;
        }));
        ++submitted;
    };

    while (submitted < n_chunks && submitted < inflight) submit();
    while (consumed_chunks < n_chunks) {
        auto results = pending.front().get();
        pending.pop_front();
        const std::int64_t begin = consumed_chunks * chunk;
        for (std::size_t i = 0; i < results.size(); ++i) {
            consume(begin + static_cast<std::int64_t>(i),
                    std::move(results[i]));
        }
        ++consumed_chunks;
        if (submitted < n_chunks) submit();
    }
}

Matrix closed_form_c(const Problem& problem, const Vector& theta_ref) {
    if (const auto* q = dynamic_cast<const QuadraticProblem*>(&problem)) {
        const double r = std::visit(
            [](const auto& m) -> double {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, GaussianMultiplicative>) {
                    return m.r;
                } else if constexpr (std::is_same_v<
                                         M, TruncatedGaussianMultiplicative>) {
                    return m.r;
                } else {
                    throw InvalidInputError(
                        "closed-form covariance needs (truncated) Gaussian "
                        "multiplicative noise");
                }
            },
            problem.noise_model());
        const Vector d = theta_ref - q->center();
        return 4.0 * r * d * d.transpose();
    }
    if (dynamic_cast<const AdditiveNoiseQuadratic*>(&problem) != nullptr) {
        const auto& add = std::get<AdditiveVector>(problem.noise_model());
        return 4.0 * add.c *
               Matrix::Identity(problem.dimension(), problem.dimension());
    }
    throw InvalidInputError(
        "closed-form covariance is only available for quadratic problems");
}

}  // namespace

std::unique_ptr<Problem> ProblemConfig::build(
    std::optional<double> noise_override) const {
    switch (family) {
        case ProblemFamily::Simple1D:
            return std::make_unique<SimpleExample1D>(
                noise_override.value_or(sigma), eq210_literal);
        case ProblemFamily::Quadratic: {
            Vector ctr = center.size() > 0 ? center : Vector::Zero(p);
            return std::make_unique<QuadraticProblem>(
                std::move(ctr), noise_override.value_or(r));
        }
        case ProblemFamily::QuadraticAdditive: {
            Vector ctr = center.size() > 0 ? center : Vector::Zero(p);
            return std::make_unique<AdditiveNoiseQuadratic>(
                std::move(ctr), noise_override.value_or(c));
        }
        case ProblemFamily::SkewedQuartic:
            return std::make_unique<SkewedQuartic>(p,
                                                   noise_override.value_or(r));
    }
    throw InvalidInputError("unknown problem family");
}

RawEstimatorKind EstimatorConfig::build_raw() const {
    switch (kind) {
        case Kind::ScoreFunction: return ScoreFunctionUnbiased{};
        case Kind::Pathwise: return Pathwise{};
        case Kind::OffsetBiased: return OffsetBiased{b};
    }
    throw InvalidInputError("unknown estimator kind");
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const int threads = effective_threads(spec.threads);
    const std::int64_t J = spec.replications;

    ExperimentResult result;
    result.spec = spec;
    result.arms.reserve(spec.arms.size());

    for (std::size_t arm_index = 0; arm_index < spec.arms.size(); ++arm_index) {
        const ArmSpec& arm = spec.arms[arm_index];
        const auto problem = spec.problem.build(arm.noise_override);
        const OptimizerConfig cfg = arm_optimizer_config(spec, arm);
        const EstimatorKind estimator = arm_estimator(arm);

        std::vector<double> sq_sums;
        std::vector<std::int64_t> indices;
        std::vector<double> norm_sums(
            static_cast<std::size_t>(spec.iterations), 0.0);
        std::int64_t used = 0;
        std::vector<std::int64_t> diverged;

        auto produce = [&](std::int64_t j) -> ReplicationOutcome {
            const RngStreamSpec stream{spec.master_seed,
                                       stream_index_for(spec, arm_index, j)};
            try {
                return {run(cfg, *problem, estimator, stream)};
            } catch (const DivergenceError&) {
                return {std::nullopt};
            }
        };
        auto consume = [&](std::int64_t j, ReplicationOutcome&& out) {
            if (!out.trajectory) {
                diverged.push_back(j);
                return;
            }
            const Trajectory& t = *out.trajectory;
            if (indices.empty()) {
                indices = t.indices;
                sq_sums.assign(indices.size(), 0.0);
            }
            for (std::size_t i = 0; i < sq_sums.size(); ++i) {
                sq_sums[i] += t.squared_errors[i];
            }
            for (std::size_t k = 0; k < norm_sums.size(); ++k) {
                norm_sums[k] += t.estimate_norms[k];
            }
            ++used;
        };
        ordered_parallel_map(J, threads, produce, consume);

        const std::int64_t n_div = static_cast<std::int64_t>(diverged.size());
        if (n_div * 100 > J) {
            throw DivergenceError(
                "arm '" + arm.label + "': " + std::to_string(n_div) + " of " +
                    std::to_string(J) +
                    " replications diverged (more than 1%)",
                -1);
        }
        if (used == 0) {
            throw DivergenceError("arm '" + arm.label +
                                      "': every replication diverged",
                                  -1);
        }

        ArmResult ar;
        ar.curve.label = arm.label;
        ar.curve.indices = std::move(indices);
        ar.curve.values.resize(sq_sums.size());
        for (std::size_t i = 0; i < sq_sums.size(); ++i) {
            ar.curve.values[i] = sq_sums[i] / static_cast<double>(used);
        }
        ar.curve.replications_total = J;
        ar.curve.replications_used = used;
        ar.divergences = n_div;
        ar.diverged_replications.assign(
            diverged.begin(),
            diverged.begin() + std::min<std::size_t>(diverged.size(), 16));

        // Convergence-condition reports.
        if (spec.iterations > 0) {
            std::vector<double> mean_norms(norm_sums.size());
            for (std::size_t k = 0; k < norm_sums.size(); ++k) {
                mean_norms[k] = norm_sums[k] / static_cast<double>(used);
            }
            ar.reports.push_back(boundedness_from_mean_norms(mean_norms));
        }
        ar.reports.push_back(continuity_report());
        ar.reports.push_back(validate_gain(spec.gain));
        if (arm.optimizer == OptimizerKind::SWSGD && arm.window_t == 2 &&
            spec.iterations > 0) {
            OptimizerConfig diag_cfg = cfg;
            diag_cfg.record_estimate_norms = false;
            diag_cfg.record_iterates = true;
            diag_cfg.record_raw_estimates = true;
            const RngStreamSpec stream{spec.master_seed,
                                       stream_index_for(spec, arm_index, 0)};
            try {
                const Trajectory diag = run(diag_cfg, *problem, estimator, stream);
                ar.reports.push_back(
                    bias_partial_sums(diag, *problem, spec.gain).report());
            } catch (const DivergenceError&) {
                ConditionReport r;
                r.condition_id = 4;
                r.status = ConditionReport::Status::Monitored;
                r.evidence = std::numeric_limits<double>::quiet_NaN();
                r.detail = "reference replication diverged; sums unavailable";
                ar.reports.push_back(r);
            }
        }
        result.arms.push_back(std::move(ar));
    }

    if (spec.intersection) {
        try {
            result.intersection = intersection_analysis(spec, *spec.intersection);
        } catch (const NoIntersectionError& e) {
            IntersectionResult ir;
            ir.k_star = std::numeric_limits<double>::quiet_NaN();
            ir.error = e.what();
            result.intersection = std::move(ir);
        }
    }
    return result;
}

IntersectionResult intersection_analysis(const ExperimentSpec& spec,
                                         const IntersectionRequest& request) {
    if (spec.problem.family != ProblemFamily::Quadratic &&
        spec.problem.family != ProblemFamily::QuadraticAdditive) {
        throw InvalidInputError(
            "intersection analysis requires a quadratic problem");
    }
    if (request.unbiased_arm >= spec.arms.size() ||
        request.biased_arm >= spec.arms.size() ||
        request.unbiased_arm == request.biased_arm) {
        throw InvalidInputError("intersection analysis needs two distinct arms");
    }
    const ArmSpec& ua = spec.arms[request.unbiased_arm];
    const ArmSpec& ba = spec.arms[request.biased_arm];
    if (ua.estimator.kind != EstimatorConfig::Kind::Pathwise) {
        throw InvalidInputError("designated unbiased arm must be pathwise");
    }
    if (ba.estimator.kind != EstimatorConfig::Kind::OffsetBiased) {
        throw InvalidInputError("designated biased arm must be offset-biased");
    }

    const auto prob_u = spec.problem.build(ua.noise_override);
    const auto prob_b = spec.problem.build(ba.noise_override);
    if (ba.estimator.b.size() != prob_b->dimension()) {
        throw DimensionMismatchError("offset b dimension mismatch");
    }

    // Fixed point of the biased update: g(theta) + b = 0, so the biased
    // sequence settles at theta* - b/2 and w = b/2.
    const Vector w = 0.5 * ba.estimator.b;
    const Vector theta_lim_biased = prob_b->theta_star() - w;

    IntersectionResult ir;
    ir.w = w;
    ir.alpha = spec.gain.alpha;
    ir.k_ref = request.k_ref;

    if (request.policy == CPolicy::ClosedFormAtLimit) {
        ir.c_policy = "closed_form_at_limit";
        ir.c_unbiased = closed_form_c(*prob_u, prob_u->theta_star());
        ir.c_biased = closed_form_c(*prob_b, theta_lim_biased);
    } else {
        ir.c_policy = "trajectory_at_iterate";
        auto trajectory_c = [&](const Problem& problem, const ArmSpec& arm,
                                std::size_t arm_index) {
            OptimizerConfig cfg = arm_optimizer_config(spec, arm);
            cfg.iterations = request.k_ref;
            cfg.record_estimate_norms = false;
            const RngStreamSpec ref_stream{
                spec.master_seed, stream_index_for(spec, arm_index, 0)};
            const Trajectory ref =
                run(cfg, problem, arm_estimator(arm), ref_stream);
            RngStream c_rng = derive_stream(
                {spec.master_seed, kCEstimateStreamBase + arm_index});
            return estimate_c(problem, arm.estimator.build_raw(),
                              ref.final_theta, request.n_samples, c_rng);
        };
        ir.c_unbiased = trajectory_c(*prob_u, ua, request.unbiased_arm);
        ir.c_biased = trajectory_c(*prob_b, ba, request.biased_arm);
    }

    const Matrix sigma_u =
        asymptotic_sigma(sgd_inputs(*prob_u, spec.gain, ir.c_unbiased));
    const Matrix sigma_b =
        asymptotic_sigma(sgd_inputs(*prob_b, spec.gain, ir.c_biased));
    ir.tr_sigma_unbiased = sigma_u.trace();
    ir.tr_sigma_biased = sigma_b.trace();
    ir.k_star = intersection_k(ir.tr_sigma_unbiased, ir.tr_sigma_biased, w,
                               spec.gain.alpha);
    return ir;
}

// ------------------------------------------------------------------ outputs

namespace {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " +
                          path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void emit_csv(const std::vector<MseCurve>& curves,
              const std::filesystem::path& path) {
    if (curves.empty()) throw InvalidInputError("no curves to write");
    const auto& indices = curves.front().indices;
    for (const auto& c : curves) {
        if (c.indices != indices) {
            throw InvalidInputError(
                "curves must share recorded indices to be written together");
        }
    }
    auto out = open_for_write(path);
    out << "k";
    for (const auto& c : curves) out << ',' << c.label;
    out << '\n';
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out << indices[i];
        for (const auto& c : curves) out << ',' << format_g17(c.values[i]);
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void emit_plot_script(const std::vector<MseCurve>& curves,
                      const std::optional<IntersectionResult>& intersection,
                      const std::string& csv_filename,
                      const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "# MSE vs iteration count (log-log)\n";
    out << "set datafile separator comma\n";
    out << "set logscale xy\n";
    out << "set xlabel 'k'\n";
    out << "set ylabel 'empirical MSE'\n";
    out << "set key top right\n";
    if (intersection && intersection->error.empty() &&
        std::isfinite(intersection->k_star)) {
        out << "set arrow from " << format_g17(intersection->k_star)
            << ",graph 0 to " << format_g17(intersection->k_star)
            << ",graph 1 nohead dashtype 2 lc rgb 'green'\n";
        out << "set label 'k* = " << format_g17(intersection->k_star)
            << "' at " << format_g17(intersection->k_star)
            << ",graph 0.95 offset 1,0\n";
    }
    out << "plot \\\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        // ($1>0 ? $1 : 1/0) masks k = 0, which a log axis cannot show.
        out << "  '" << csv_filename << "' skip 1 using ($1>0?$1:1/0):"
            << (i + 2) << " with lines title '" << curves[i].label << "'";
        out << (i + 1 < curves.size() ? ", \\\n" : "\n");
    }
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

ordered_json vector_to_json(const Vector& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

const char* family_name(ProblemFamily f) {
    switch (f) {
        case ProblemFamily::Simple1D: return "simple";
        case ProblemFamily::Quadratic: return "quadratic";
        case ProblemFamily::QuadraticAdditive: return "quadratic_additive";
        case ProblemFamily::SkewedQuartic: return "quartic";
    }
    return "unknown";
}

const char* optimizer_name(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::GD: return "gd";
        case OptimizerKind::SGD: return "sgd";
        case OptimizerKind::SWSGD: return "swsgd";
    }
    return "unknown";
}

const char* estimator_name(EstimatorConfig::Kind k) {
    switch (k) {
        case EstimatorConfig::Kind::ScoreFunction: return "score";
        case EstimatorConfig::Kind::Pathwise: return "pathwise";
        case EstimatorConfig::Kind::OffsetBiased: return "offset";
    }
    return "unknown";
}

}  // namespace

void emit_summary(const ExperimentResult& result,
                  const std::string& csv_filename,
                  const std::string& plot_filename,
                  const std::filesystem::path& path) {
    const ExperimentSpec& spec = result.spec;
    ordered_json j;
    j["name"] = spec.name;

    ordered_json prob;
    prob["family"] = family_name(spec.problem.family);
    prob["p"] = spec.problem.p;
    switch (spec.problem.family) {
        case ProblemFamily::Simple1D:
            prob["sigma"] = spec.problem.sigma;
            prob["eq210_literal"] = spec.problem.eq210_literal;
            break;
        case ProblemFamily::Quadratic:
            prob["center"] = vector_to_json(
                spec.problem.center.size() > 0 ? spec.problem.center
                                               : Vector::Zero(spec.problem.p));
            prob["r"] = spec.problem.r;
            break;
        case ProblemFamily::QuadraticAdditive:
            prob["center"] = vector_to_json(
                spec.problem.center.size() > 0 ? spec.problem.center
                                               : Vector::Zero(spec.problem.p));
            prob["c"] = spec.problem.c;
            break;
        case ProblemFamily::SkewedQuartic:
            prob["r"] = spec.problem.r;
            break;
    }
    j["problem"] = prob;
    j["gain"] = {{"a", spec.gain.a}, {"alpha", spec.gain.alpha}};
    j["theta0"] = vector_to_json(spec.theta0);
    j["iterations"] = spec.iterations;
    j["record_stride"] = spec.record_stride;
    j["replications"] = spec.replications;
    j["master_seed"] = spec.master_seed;
    j["stream_policy"] =
        spec.stream_policy == StreamPolicy::Paired ? "paired" : "per_arm";

    ordered_json arms = ordered_json::array();
    for (std::size_t i = 0; i < result.arms.size(); ++i) {
        const ArmSpec& arm = spec.arms[i];
        const ArmResult& ar = result.arms[i];
        ordered_json ja;
        ja["label"] = arm.label;
        ja["optimizer"] = optimizer_name(arm.optimizer);
        if (arm.optimizer == OptimizerKind::SWSGD) ja["t"] = arm.window_t;
        ja["estimator"] = estimator_name(arm.estimator.kind);
        if (arm.estimator.kind == EstimatorConfig::Kind::OffsetBiased) {
            ja["b"] = vector_to_json(arm.estimator.b);
        }
        if (arm.noise_override) ja["noise_override"] = *arm.noise_override;
        ja["replications_used"] = ar.curve.replications_used;
        ja["divergences"] = ar.divergences;
        if (!ar.diverged_replications.empty()) {
            ja["diverged_replications"] = ar.diverged_replications;
        }
        ordered_json reports = ordered_json::array();
        for (const auto& r : ar.reports) {
            ordered_json jr;
            jr["condition"] = r.condition_id;
            jr["status"] = to_string(r.status);
            if (std::isfinite(r.evidence)) {
                jr["evidence"] = r.evidence;
            } else {
                jr["evidence"] = nullptr;
            }
            jr["detail"] = r.detail;
            reports.push_back(jr);
        }
        ja["condition_reports"] = reports;
        arms.push_back(ja);
    }
    j["arms"] = arms;

    if (result.intersection) {
        const IntersectionResult& ir = *result.intersection;
        ordered_json ji;
        if (ir.error.empty()) {
            ji["k_star"] = ir.k_star;
            ji["tr_sigma_unbiased"] = ir.tr_sigma_unbiased;
            ji["tr_sigma_biased"] = ir.tr_sigma_biased;
            ji["w"] = vector_to_json(ir.w);
            ji["w_dot_w"] = ir.w.squaredNorm();
            ji["mu"] = vector_to_json(Vector::Zero(ir.w.size()));
            ji["alpha"] = ir.alpha;
            ji["c_policy"] = ir.c_policy;
            if (ir.c_policy == "trajectory_at_iterate") ji["k_ref"] = ir.k_ref;
            ji["c_unbiased"] = matrix_to_json(ir.c_unbiased);
            ji["c_biased"] = matrix_to_json(ir.c_biased);
        } else {
            ji["k_star"] = nullptr;
            ji["error"] = ir.error;
        }
        j["intersection"] = ji;
    }

    j["outputs"] = {{"csv", csv_filename}, {"plot", plot_filename}};

    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

ExperimentResult run_and_emit(const ExperimentSpec& spec,
                              const std::filesystem::path& out_dir) {
    ExperimentResult result = run_experiment(spec);
    std::vector<MseCurve> curves;
    curves.reserve(result.arms.size());
    for (const auto& a : result.arms) curves.push_back(a.curve);

    const std::string csv_name = spec.name + ".csv";
    const std::string gp_name = spec.name + ".gp";
    const std::string summary_name = spec.name + ".summary.json";
    emit_csv(curves, out_dir / csv_name);
    emit_plot_script(curves, result.intersection, csv_name, out_dir / gp_name);
    emit_summary(result, csv_name, gp_name, out_dir / summary_name);
    return result;
}

// ------------------------------------------------------------------ presets

namespace {

std::string canonical_preset_name(std::string name) {
    for (auto& ch : name) {
        if (ch == '.') ch = '_';
    }
    return name;
}

void apply_common_options(ExperimentSpec& spec, const PresetOptions& opt) {
    spec.master_seed = opt.seed;
    spec.threads = opt.threads;
    if (opt.replications) spec.replications = *opt.replications;
    if (opt.iterations) spec.iterations = *opt.iterations;
    if (opt.record_stride) spec.record_stride = *opt.record_stride;
}

PresetBundle preset_fig2_1(const PresetOptions& opt) {
    PresetBundle bundle;
    bundle.name = "fig2_1";
    for (const double sigma : {50.0, 200.0, 240.0, 300.0}) {
        ExperimentSpec spec;
        spec.name = "fig2_1_sigma" + std::to_string(static_cast<int>(sigma));
        spec.problem.family = ProblemFamily::Simple1D;
        spec.problem.p = 1;
        spec.problem.sigma = sigma;
        spec.theta0 = Vector::Constant(1, 7.0);
        // The step scale keeps the 1/sigma shape; its constant is tuned so
        // the score-function arm takes large steps without overshooting.
        spec.gain = GainSequence{2.5 / sigma, 0.501};
        spec.iterations = 10000;
        spec.replications = opt.quick ? 200 : 1000;

        ArmSpec unbiased;
        unbiased.label = "unbiased";
        unbiased.estimator.kind = EstimatorConfig::Kind::ScoreFunction;
        ArmSpec biased;
        biased.label = "biased";
        biased.estimator.kind = EstimatorConfig::Kind::Pathwise;
        spec.arms = {unbiased, biased};

        apply_common_options(spec, opt);
        bundle.experiments.push_back(std::move(spec));
    }
    return bundle;
}

PresetBundle preset_fig4_1(const PresetOptions& opt) {
    PresetBundle bundle;
    bundle.name = opt.additive_c ? "fig4_1_additive" : "fig4_1";
    const double r_biased = 10.0;
    for (const double r_u : {50.0, 100.0, 500.0, 1000.0}) {
        ExperimentSpec spec;
        const std::string suffix = std::to_string(static_cast<int>(r_u));
        spec.problem.p = 2;
        if (opt.additive_c) {
            spec.name = "fig4_1_additive_cu" + suffix;
            spec.problem.family = ProblemFamily::QuadraticAdditive;
            spec.problem.c = r_u;
            spec.theta0 = Vector::Constant(2, 1.0);
        } else {
            spec.name = "fig4_1_ru" + suffix;
            spec.problem.family = ProblemFamily::Quadratic;
            spec.problem.r = r_u;
            spec.theta0 = Vector::Constant(2, 5.0);
        }
        spec.gain = GainSequence{0.05, 0.501};
        spec.iterations = 10000;
        spec.replications = opt.quick ? 200 : 10000;

        ArmSpec unbiased;
        unbiased.label = "unbiased";
        unbiased.estimator.kind = EstimatorConfig::Kind::Pathwise;
        unbiased.noise_override = r_u;
        ArmSpec biased;
        biased.label = "biased";
        biased.estimator.kind = EstimatorConfig::Kind::OffsetBiased;
        biased.estimator.b = Vector::Ones(2);
        biased.noise_override = r_biased;
        spec.arms = {unbiased, biased};

        IntersectionRequest req;
        req.unbiased_arm = 0;
        req.biased_arm = 1;
        req.policy = opt.additive_c ? CPolicy::ClosedFormAtLimit
                                    : CPolicy::TrajectoryAtIterate;
        req.k_ref = 100;
        req.n_samples = 100000;
        spec.intersection = req;

        apply_common_options(spec, opt);
        bundle.experiments.push_back(std::move(spec));
    }
    return bundle;
}

PresetBundle preset_fig4_2(const PresetOptions& opt) {
    PresetBundle bundle;
    bundle.name = "fig4_2";
    for (const double r : {1.0, 2.0, 4.0, 8.0}) {
        ExperimentSpec spec;
        spec.name = "fig4_2_r" + std::to_string(static_cast<int>(r));
        spec.problem.family = ProblemFamily::SkewedQuartic;
        spec.problem.p = 3;
        spec.problem.r = r;
        spec.theta0 = Vector::Constant(3, 10.0);
        spec.gain = GainSequence{0.032, 0.501};
        spec.iterations = 10000;
        spec.replications = opt.quick ? 200 : 1000;

        ArmSpec sgd;
        sgd.label = "sgd";
        sgd.estimator.kind = EstimatorConfig::Kind::Pathwise;
        ArmSpec sw;
        sw.label = "swsgd_t2";
        sw.optimizer = OptimizerKind::SWSGD;
        sw.window_t = 2;
        sw.estimator.kind = EstimatorConfig::Kind::Pathwise;
        spec.arms = {sgd, sw};

        apply_common_options(spec, opt);
        bundle.experiments.push_back(std::move(spec));
    }
    return bundle;
}

}  // namespace

PresetBundle preset(const std::string& name, const PresetOptions& options) {
    const std::string canon = canonical_preset_name(name);
    if (canon == "fig2_1") return preset_fig2_1(options);
    if (canon == "fig4_1") return preset_fig4_1(options);
    if (canon == "fig4_2") return preset_fig4_2(options);
    throw InvalidInputError("unknown preset '" + name +
                            "' (available: fig2.1, fig4.1, fig4.2)");
}

}  // namespace swsgd

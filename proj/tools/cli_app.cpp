#include "cli_app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "swsgd/config.hpp"
#include "swsgd/harness.hpp"

namespace swsgd::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

fs::path default_out_dir() {
    if (const char* env = std::getenv("SWSGD_OUT_DIR")) {
        if (*env != '\0') return fs::path(env);
    }
    return fs::path("out");
}

struct CommonFlags {
    std::optional<std::int64_t> seed;
    std::optional<std::int64_t> reps;
    std::optional<std::int64_t> iters;
    std::optional<std::int64_t> stride;
    std::optional<int> threads;
    std::string out;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed");
    cmd->add_option("--reps", flags.reps, "Replications per arm");
    cmd->add_option("--iters", flags.iters, "Iteration count K");
    cmd->add_option("--stride", flags.stride, "Recording stride");
    cmd->add_option("--threads", flags.threads,
                    "Worker threads (default: hardware; never changes "
                    "output bytes)");
    cmd->add_option("--out", flags.out,
                    "Output directory (default: $SWSGD_OUT_DIR or ./out)");
}

/// Flag overrides take precedence over config-file and preset values.
void apply_overrides(ExperimentSpec& spec, const CommonFlags& flags) {
    if (flags.seed) spec.master_seed = static_cast<std::uint64_t>(*flags.seed);
    if (flags.reps) spec.replications = *flags.reps;
    if (flags.iters) spec.iterations = *flags.iters;
    if (flags.stride) spec.record_stride = *flags.stride;
    if (flags.threads) spec.threads = *flags.threads;
}

fs::path resolve_out(const CommonFlags& flags) {
    return flags.out.empty() ? default_out_dir() : fs::path(flags.out);
}

void report_experiment(const ExperimentResult& result) {
    std::cerr << result.spec.name << ": " << result.spec.replications
              << " replications x " << result.arms.size() << " arms";
    for (const auto& arm : result.arms) {
        if (arm.divergences > 0) {
            std::cerr << " [" << arm.curve.label << ": " << arm.divergences
                      << " diverged]";
        }
    }
    std::cerr << '\n';
}

int run_reproduce(const std::string& preset_name, bool full,
                  bool additive_c, const CommonFlags& flags) {
    PresetOptions opt;
    opt.quick = !full;
    opt.additive_c = additive_c;
    if (flags.seed) opt.seed = static_cast<std::uint64_t>(*flags.seed);
    if (flags.reps) opt.replications = *flags.reps;
    if (flags.iters) opt.iterations = *flags.iters;
    if (flags.stride) opt.record_stride = *flags.stride;
    if (flags.threads) opt.threads = *flags.threads;

    const PresetBundle bundle = preset(preset_name, opt);
    const fs::path out_dir = resolve_out(flags);
    for (const auto& spec : bundle.experiments) {
        report_experiment(run_and_emit(spec, out_dir));
    }
    std::cout << bundle.name << ": wrote " << bundle.experiments.size()
              << " experiment(s) under " << out_dir.string() << '\n';
    return kExitOk;
}

int run_custom(const std::string& config_path, const CommonFlags& flags) {
    ExperimentSpec spec =
        experiment_from_config(parse_config_file(config_path));
    apply_overrides(spec, flags);
    // --out beats the config's out_dir, which beats the environment default.
    const fs::path out_dir = !flags.out.empty() ? fs::path(flags.out)
                             : !spec.out_dir.empty()
                                 ? fs::path(spec.out_dir)
                                 : default_out_dir();
    report_experiment(run_and_emit(spec, out_dir));
    std::cout << spec.name << ": outputs under " << out_dir.string() << '\n';
    return kExitOk;
}

Matrix closed_form_c_at(const AnalyzeSpec& spec, const Vector& theta_ref,
                        std::optional<double> noise_override) {
    const auto problem = spec.problem.build(noise_override);
    if (spec.problem.family == ProblemFamily::QuadraticAdditive) {
        const auto& add = std::get<AdditiveVector>(problem->noise_model());
        return 4.0 * add.c *
               Matrix::Identity(problem->dimension(), problem->dimension());
    }
    if (spec.problem.family == ProblemFamily::Quadratic) {
        const auto& mult =
            std::get<GaussianMultiplicative>(problem->noise_model());
        const Vector d = theta_ref - problem->theta_star();
        return 4.0 * mult.r * d * d.transpose();
    }
    throw ConfigError(
        "analyze supports the quadratic problem families only (no closed-form "
        "gradient-noise covariance elsewhere)");
}

int run_analyze(const std::string& config_path, const CommonFlags& flags) {
    const AnalyzeSpec spec = analyze_from_config(parse_config_file(config_path));
    const auto gain_report = validate_gain(spec.gain);
    if (gain_report.status != ConditionReport::Status::Pass) {
        throw ConfigError("Condition 3 violated: " + gain_report.detail);
    }

    const auto problem = spec.problem.build();
    const Vector at =
        spec.c_at.size() > 0 ? spec.c_at : problem->theta_star();
    const Matrix c = closed_form_c_at(spec, at, std::nullopt);
    const FabianInputs inputs = sgd_inputs(*problem, spec.gain, c);
    AsymptoticDistribution dist;
    dist.mu = asymptotic_mu(inputs, spec.mu_form);
    dist.sigma = asymptotic_sigma(inputs);
    dist.alpha = spec.gain.alpha;

    ordered_json j;
    j["name"] = spec.name;
    j["alpha"] = dist.alpha;
    j["mu"] = ordered_json::array();
    for (Eigen::Index i = 0; i < dist.mu.size(); ++i) j["mu"].push_back(dist.mu[i]);
    j["tr_sigma"] = dist.sigma.trace();
    ordered_json sig = ordered_json::array();
    for (Eigen::Index i = 0; i < dist.sigma.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index k = 0; k < dist.sigma.cols(); ++k) {
            row.push_back(dist.sigma(i, k));
        }
        sig.push_back(row);
    }
    j["sigma"] = sig;

    std::cout << "mu = 0 (T = 0), tr(Sigma) = " << dist.sigma.trace()
              << ", alpha = " << dist.alpha << '\n';
    ordered_json table = ordered_json::array();
    std::cout << "predicted MSE:\n";
    for (const std::int64_t k : spec.mse_at_ks) {
        const double v = mse_at(dist, k);
        std::cout << "  k = " << k << ": " << v << '\n';
        table.push_back({{"k", k}, {"mse", v}});
    }
    j["predicted_mse"] = table;

    if (spec.has_biased) {
        const Vector w = 0.5 * spec.b;
        const Vector theta_lim = problem->theta_star() - w;
        const Matrix cb = closed_form_c_at(spec, theta_lim, spec.r_biased);
        const auto problem_b = spec.problem.build(spec.r_biased);
        const Matrix sigma_b =
            asymptotic_sigma(sgd_inputs(*problem_b, spec.gain, cb));
        const double k_star = intersection_k(dist.sigma.trace(),
                                             sigma_b.trace(), w,
                                             spec.gain.alpha);
        std::cout << "crossing with biased arm: k* = " << k_star << '\n';
        j["k_star"] = k_star;
        j["tr_sigma_biased"] = sigma_b.trace();
        ordered_json jw = ordered_json::array();
        for (Eigen::Index i = 0; i < w.size(); ++i) jw.push_back(w[i]);
        j["w"] = jw;
    }

    const fs::path out_dir = resolve_out(flags);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const fs::path out_path = out_dir / (spec.name + ".analysis.json");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path.string());
    out << j.dump(2) << '\n';
    std::cout << "analysis written to " << out_path.string() << '\n';
    return kExitOk;
}

int run_intersect(const std::string& config_path, const CommonFlags& flags) {
    const IntersectSpec spec =
        intersect_from_config(parse_config_file(config_path));
    double k_star = 0.0;
    double tr_u = 0.0, tr_b = 0.0;
    Vector w;
    double alpha = spec.alpha;
    if (spec.direct) {
        tr_u = spec.tr_sigma_unbiased;
        tr_b = spec.tr_sigma_biased;
        w = spec.w;
        k_star = intersection_k(tr_u, tr_b, w, alpha);
    } else {
        const AnalyzeSpec& a = spec.derived;
        const auto gain_report = validate_gain(a.gain);
        if (gain_report.status != ConditionReport::Status::Pass) {
            throw ConfigError("Condition 3 violated: " + gain_report.detail);
        }
        const auto problem_u = a.problem.build();
        const auto problem_b = a.problem.build(a.r_biased);
        w = 0.5 * a.b;
        const Matrix cu = closed_form_c_at(a, problem_u->theta_star(),
                                           std::nullopt);
        const Matrix cb = closed_form_c_at(a, problem_b->theta_star() - w,
                                           a.r_biased);
        tr_u = asymptotic_sigma(sgd_inputs(*problem_u, a.gain, cu)).trace();
        tr_b = asymptotic_sigma(sgd_inputs(*problem_b, a.gain, cb)).trace();
        alpha = a.gain.alpha;
        k_star = intersection_k(tr_u, tr_b, w, alpha);
    }

    std::cout << "k* = " << k_star << " (tr_sigma_unbiased = " << tr_u
              << ", tr_sigma_biased = " << tr_b << ", w'w = " << w.squaredNorm()
              << ", alpha = " << alpha << ")\n";

    if (!flags.out.empty()) {
        const fs::path out_dir = resolve_out(flags);
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        ordered_json j;
        j["name"] = spec.name;
        j["k_star"] = k_star;
        j["tr_sigma_unbiased"] = tr_u;
        j["tr_sigma_biased"] = tr_b;
        j["w_dot_w"] = w.squaredNorm();
        j["alpha"] = alpha;
        const fs::path out_path = out_dir / (spec.name + ".intersect.json");
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot open " + out_path.string());
        out << j.dump(2) << '\n';
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{
        "Stochastic-gradient experiment bench: plain and sliding-window SGD "
        "with biased/unbiased gradient estimators, Monte Carlo MSE curves "
        "and asymptotic-covariance predictions"};
    app.require_subcommand(1);

    std::string preset_name;
    bool full = false, quick = false, additive_c = false;
    CommonFlags reproduce_flags;
    auto* reproduce =
        app.add_subcommand("reproduce", "Run a built-in experiment preset");
    reproduce->add_option("preset", preset_name,
                          "fig2.1 | fig4.1 | fig4.2 (also fig2_1 style)")
        ->required();
    reproduce->add_flag("--full", full,
                        "Full replication counts (default: quick)");
    reproduce->add_flag("--quick", quick, "Quick mode (default)");
    reproduce->add_flag("--additive-c", additive_c,
                        "fig4.1 additive-noise validation variant");
    add_common_flags(reproduce, reproduce_flags);

    std::string run_config;
    CommonFlags run_flags;
    auto* run_cmd =
        app.add_subcommand("run", "Run an experiment from a config file");
    run_cmd->add_option("--config", run_config, "Config file path")->required();
    add_common_flags(run_cmd, run_flags);

    std::string analyze_config;
    CommonFlags analyze_flags;
    auto* analyze = app.add_subcommand(
        "analyze",
        "Covariance/MSE prediction from closed forms; no simulation");
    analyze->add_option("--config", analyze_config, "Config file path")
        ->required();
    analyze->add_option("--out", analyze_flags.out, "Output directory");

    std::string intersect_config;
    CommonFlags intersect_flags;
    auto* intersect = app.add_subcommand(
        "intersect", "Predicted crossing point of two MSE curves");
    intersect->add_option("--config", intersect_config, "Config file path")
        ->required();
    intersect->add_option("--out", intersect_flags.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (reproduce->parsed()) {
            if (full && quick) {
                std::cerr << "error: --full and --quick are exclusive\n";
                return kExitUsage;
            }
            return run_reproduce(preset_name, full, additive_c,
                                 reproduce_flags);
        }
        if (run_cmd->parsed()) return run_custom(run_config, run_flags);
        if (analyze->parsed()) return run_analyze(analyze_config, analyze_flags);
        if (intersect->parsed()) {
            return run_intersect(intersect_config, intersect_flags);
        }
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidInputError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NoIntersectionError& e) {
        std::cerr << "no intersection: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace swsgd::cli

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "swsgd/config.hpp"

using namespace swsgd;

TEST_CASE("key = value parsing with comments and sections") {
    const std::string text =
        "# experiment\n"
        "name = demo   # trailing comment\n"
        "problem = quadratic\n"
        "\n"
        "[arm]\n"
        "label = unbiased\n"
        "estimator = pathwise\n"
        "[arm]\n"
        "label = biased\n"
        "estimator = offset\n";
    const auto cfg = parse_config_text(text);
    CHECK(cfg.globals.at("name") == "demo");
    CHECK(cfg.globals.at("problem") == "quadratic");
    REQUIRE(cfg.arms.size() == 2);
    CHECK(cfg.arms[0].at("label") == "unbiased");
    CHECK(cfg.arms[1].at("estimator") == "offset");
}

TEST_CASE("parse errors carry line context") {
    CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[weird]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("= 3\n"), ConfigError);
}

TEST_CASE("experiment config round trip") {
    const std::string text =
        "name = quad_demo\n"
        "problem = quadratic\n"
        "p = 2\n"
        "theta0 = 5, 5\n"
        "a = 0.05\n"
        "alpha = 0.501\n"
        "iterations = 100\n"
        "reps = 8\n"
        "seed = 17\n"
        "stride = 2\n"
        "stream_policy = per_arm\n"
        "[arm]\n"
        "label = unbiased\n"
        "estimator = pathwise\n"
        "r = 50\n"
        "[arm]\n"
        "label = biased\n"
        "estimator = offset\n"
        "b = 1, 1\n"
        "r = 10\n";
    const auto spec = experiment_from_config(parse_config_text(text));
    CHECK(spec.name == "quad_demo");
    CHECK(spec.problem.family == ProblemFamily::Quadratic);
    CHECK(spec.theta0.size() == 2);
    CHECK(spec.gain.a == 0.05);
    CHECK(spec.iterations == 100);
    CHECK(spec.replications == 8);
    CHECK(spec.master_seed == 17);
    CHECK(spec.record_stride == 2);
    CHECK(spec.stream_policy == StreamPolicy::PerArm);
    REQUIRE(spec.arms.size() == 2);
    CHECK(spec.arms[0].noise_override == 50.0);
    CHECK(spec.arms[1].estimator.b.size() == 2);

    // Parsed specs drive the harness directly.
    const auto result = run_experiment(spec);
    CHECK(result.arms.size() == 2);
}

TEST_CASE("r_u r_b shorthand builds the standard pair") {
    const std::string text =
        "problem = quadratic\n"
        "p = 2\n"
        "theta0 = 5, 5\n"
        "a = 0.05\n"
        "alpha = 0.501\n"
        "r_u = 50\n"
        "r_b = 10\n"
        "b = 1, 1\n";
    const auto spec = experiment_from_config(parse_config_text(text));
    REQUIRE(spec.arms.size() == 2);
    CHECK(spec.arms[0].label == "unbiased");
    CHECK(spec.arms[0].estimator.kind == EstimatorConfig::Kind::Pathwise);
    CHECK(spec.arms[0].noise_override == 50.0);
    CHECK(spec.arms[1].label == "biased");
    CHECK(spec.arms[1].estimator.kind == EstimatorConfig::Kind::OffsetBiased);
    CHECK(spec.arms[1].noise_override == 10.0);
}

TEST_CASE("intersection keys") {
    const std::string text =
        "problem = quadratic\n"
        "p = 2\n"
        "theta0 = 5, 5\n"
        "a = 0.05\n"
        "alpha = 0.501\n"
        "r_u = 50\n"
        "r_b = 10\n"
        "intersect_arms = unbiased, biased\n"
        "c_policy = trajectory\n"
        "k_ref = 123\n"
        "c_samples = 5000\n";
    const auto spec = experiment_from_config(parse_config_text(text));
    REQUIRE(spec.intersection.has_value());
    CHECK(spec.intersection->policy == CPolicy::TrajectoryAtIterate);
    CHECK(spec.intersection->k_ref == 123);
    CHECK(spec.intersection->n_samples == 5000);
    CHECK(spec.intersection->unbiased_arm == 0);
    CHECK(spec.intersection->biased_arm == 1);
}

TEST_CASE("config rejection paths") {
    // Unknown global key.
    CHECK_THROWS_AS(
        experiment_from_config(parse_config_text(
            "problem = quadratic\ntheta0 = 1\nbogus = 3\n[arm]\nlabel = x\n")),
        ConfigError);
    // Unknown arm key.
    CHECK_THROWS_AS(
        experiment_from_config(parse_config_text(
            "problem = quadratic\np = 1\ntheta0 = 1\n[arm]\nwhat = 3\n")),
        ConfigError);
    // Missing theta0.
    CHECK_THROWS_AS(experiment_from_config(parse_config_text(
                        "problem = quadratic\np = 2\n[arm]\nlabel = x\n")),
                    ConfigError);
    // theta0 dimension mismatch.
    CHECK_THROWS_AS(
        experiment_from_config(parse_config_text(
            "problem = quadratic\np = 3\ntheta0 = 1, 2\n[arm]\nlabel = x\n")),
        ConfigError);
    // No arms at all.
    CHECK_THROWS_AS(experiment_from_config(parse_config_text(
                        "problem = quadratic\np = 1\ntheta0 = 1\n")),
                    ConfigError);
    // r_u without r_b.
    CHECK_THROWS_AS(experiment_from_config(parse_config_text(
                        "problem = quadratic\np = 1\ntheta0 = 1\nr_u = 5\n")),
                    ConfigError);
    // Bad values.
    CHECK_THROWS_AS(experiment_from_config(parse_config_text(
                        "problem = quadratic\np = x\ntheta0 = 1\n")),
                    ConfigError);
    CHECK_THROWS_AS(experiment_from_config(parse_config_text(
                        "problem = mystery\ntheta0 = 1\n")),
                    ConfigError);
}

TEST_CASE("simple example config forces one dimension") {
    const std::string text =
        "problem = simple\n"
        "sigma = 300\n"
        "theta0 = 7\n"
        "a = 0.0083\n"
        "alpha = 0.501\n"
        "[arm]\n"
        "label = unbiased\n"
        "estimator = score\n";
    const auto spec = experiment_from_config(parse_config_text(text));
    CHECK(spec.problem.p == 1);
    CHECK(spec.problem.sigma == 300.0);
}

TEST_CASE("analyze config") {
    const std::string text =
        "name = pred\n"
        "problem = quadratic_additive\n"
        "p = 2\n"
        "c = 1.5\n"
        "a = 0.05\n"
        "alpha = 0.501\n"
        "mse_at = 10, 100, 1000\n"
        "b = 1, 1\n"
        "r_b = 0.5\n";
    const auto spec = analyze_from_config(parse_config_text(text));
    CHECK(spec.problem.family == ProblemFamily::QuadraticAdditive);
    CHECK(spec.problem.c == 1.5);
    CHECK(spec.mse_at_ks == std::vector<std::int64_t>{10, 100, 1000});
    CHECK(spec.has_biased);
    CHECK(spec.r_biased == 0.5);
}

TEST_CASE("intersect config: direct and derived modes") {
    const auto direct = intersect_from_config(parse_config_text(
        "tr_sigma_unbiased = 2\ntr_sigma_biased = 1\nw = 1\nalpha = 1\n"));
    CHECK(direct.direct);
    CHECK(direct.tr_sigma_unbiased == 2.0);
    CHECK(direct.w.size() == 1);

    const auto derived = intersect_from_config(parse_config_text(
        "problem = quadratic_additive\np = 2\nc = 50\na = 0.05\n"
        "alpha = 0.501\nb = 1, 1\nr_b = 10\n"));
    CHECK(!derived.direct);
    CHECK(derived.derived.has_biased);

    CHECK_THROWS_AS(intersect_from_config(parse_config_text(
                        "problem = quadratic_additive\np = 2\nc = 50\n"
                        "a = 0.05\nalpha = 0.501\n")),
                    ConfigError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swsgd/harness.hpp"

using namespace swsgd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSpec tiny_quadratic_spec() {
    ExperimentSpec spec;
    spec.name = "tiny";
    spec.problem.family = ProblemFamily::Quadratic;
    spec.problem.p = 2;
    spec.problem.r = 1.0;
    spec.theta0 = Vector::Constant(2, 3.0);
    spec.gain = {0.05, 0.501};
    spec.iterations = 200;
    spec.replications = 40;
    spec.master_seed = 42;

    ArmSpec sgd;
    sgd.label = "sgd";
    sgd.estimator.kind = EstimatorConfig::Kind::Pathwise;
    ArmSpec sw;
    sw.label = "swsgd_t2";
    sw.optimizer = OptimizerKind::SWSGD;
    sw.window_t = 2;
    sw.estimator.kind = EstimatorConfig::Kind::Pathwise;
    spec.arms = {sgd, sw};
    return spec;
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("swsgd_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("single replication with zero variance equals the gd trajectory") {
    ExperimentSpec spec;
    spec.name = "gd_equiv";
    spec.problem.family = ProblemFamily::Quadratic;
    spec.problem.p = 2;
    spec.problem.r = 0.0;
    spec.theta0 = Vector::Constant(2, 4.0);
    spec.gain = {0.1, 0.501};
    spec.iterations = 100;
    spec.replications = 1;
    ArmSpec arm;
    arm.label = "sgd";
    arm.estimator.kind = EstimatorConfig::Kind::Pathwise;
    spec.arms = {arm};

    const auto result = run_experiment(spec);

    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::GD;
    cfg.gain = spec.gain;
    cfg.theta0 = spec.theta0;
    cfg.iterations = spec.iterations;
    const auto problem = spec.problem.build();
    const Trajectory gd = run(cfg, *problem, Pathwise{}, {42, 0});

    REQUIRE(result.arms.size() == 1);
    const auto& curve = result.arms[0].curve;
    REQUIRE(curve.values.size() == gd.squared_errors.size());
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        CHECK(curve.values[i] == gd.squared_errors[i]);
    }
}

TEST_CASE("thread count never changes output bytes") {
    const auto dir1 = temp_dir("threads1");
    const auto dir8 = temp_dir("threads8");
    ExperimentSpec spec = tiny_quadratic_spec();
    spec.threads = 1;
    (void)run_and_emit(spec, dir1);
    spec.threads = 8;
    (void)run_and_emit(spec, dir8);
    for (const char* name : {"tiny.csv", "tiny.gp", "tiny.summary.json"}) {
        CHECK(slurp(dir1 / name) == slurp(dir8 / name));
    }
    fs::remove_all(dir1);
    fs::remove_all(dir8);
}

TEST_CASE("stream policies are both deterministic and differ from each other") {
    ExperimentSpec spec = tiny_quadratic_spec();
    spec.stream_policy = StreamPolicy::Paired;
    const auto paired_a = run_experiment(spec);
    const auto paired_b = run_experiment(spec);
    CHECK(paired_a.arms[0].curve.values == paired_b.arms[0].curve.values);

    spec.stream_policy = StreamPolicy::PerArm;
    const auto per_arm = run_experiment(spec);
    // Arm 0 uses streams 0..J-1 under both policies; arm 1 differs.
    CHECK(paired_a.arms[0].curve.values == per_arm.arms[0].curve.values);
    CHECK(paired_a.arms[1].curve.values != per_arm.arms[1].curve.values);
}

TEST_CASE("csv layout and re-emission") {
    MseCurve a{"one", {0, 1, 2}, {1.0, 0.5, 0.25}, 4, 4};
    MseCurve b{"two", {0, 1, 2}, {2.0, 1.0, 0.5}, 4, 4};
    const auto dir = temp_dir("csv");
    emit_csv({a, b}, dir / "x.csv");
    const std::string body = slurp(dir / "x.csv");
    CHECK(body ==
          "k,one,two\n0,1,2\n1,0.5,1\n2,0.25,0.5\n");
    emit_csv({a, b}, dir / "y.csv");
    CHECK(slurp(dir / "y.csv") == body);

    MseCurve mismatched{"bad", {0, 2}, {1.0, 1.0}, 4, 4};
    CHECK_THROWS_AS(emit_csv({a, mismatched}, dir / "z.csv"),
                    InvalidInputError);
    fs::remove_all(dir);
}

TEST_CASE("csv uses 17 significant digits") {
    MseCurve a{"v", {0}, {1.0 / 3.0}, 1, 1};
    const auto dir = temp_dir("csv17");
    emit_csv({a}, dir / "x.csv");
    CHECK(slurp(dir / "x.csv") == "k,v\n0,0.33333333333333331\n");
    fs::remove_all(dir);
}

TEST_CASE("plot script includes curves and the crossing marker") {
    MseCurve a{"unbiased", {0, 1}, {1.0, 0.5}, 1, 1};
    MseCurve b{"biased", {0, 1}, {2.0, 1.0}, 1, 1};
    IntersectionResult ir;
    ir.k_star = 123.5;
    ir.w = Vector::Ones(2);
    const auto dir = temp_dir("gp");
    emit_plot_script({a, b}, ir, "x.csv", dir / "x.gp");
    const std::string body = slurp(dir / "x.gp");
    CHECK(body.find("set logscale xy") != std::string::npos);
    CHECK(body.find("set arrow from 123.5") != std::string::npos);
    CHECK(body.find("title 'unbiased'") != std::string::npos);
    CHECK(body.find("title 'biased'") != std::string::npos);
    CHECK(body.find("'x.csv'") != std::string::npos);

    emit_plot_script({a, b}, std::nullopt, "x.csv", dir / "y.gp");
    CHECK(slurp(dir / "y.gp").find("set arrow") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("summary json echoes the effective configuration") {
    const auto dir = temp_dir("summary");
    ExperimentSpec spec = tiny_quadratic_spec();
    spec.replications = 10;
    spec.iterations = 50;
    (void)run_and_emit(spec, dir);
    const std::string body = slurp(dir / "tiny.summary.json");
    CHECK(body.find("\"master_seed\": 42") != std::string::npos);
    CHECK(body.find("\"replications\": 10") != std::string::npos);
    CHECK(body.find("\"stream_policy\": \"paired\"") != std::string::npos);
    CHECK(body.find("\"condition_reports\"") != std::string::npos);
    CHECK(body.find("\"swsgd_t2\"") != std::string::npos);
    // No wall-clock content: bytes must be a pure function of the spec.
    CHECK(body.find("time") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("arm failure above one percent divergence") {
    ExperimentSpec spec;
    spec.name = "explode";
    spec.problem.family = ProblemFamily::SkewedQuartic;
    spec.problem.p = 3;
    spec.problem.r = 8.0;
    spec.theta0 = Vector::Constant(3, 10.0);
    spec.gain = {0.9, 0.501};  // far beyond the stable range
    spec.iterations = 300;
    spec.replications = 20;
    ArmSpec arm;
    arm.label = "sgd";
    arm.estimator.kind = EstimatorConfig::Kind::Pathwise;
    spec.arms = {arm};
    CHECK_THROWS_AS(run_experiment(spec), DivergenceError);
}

TEST_CASE("intersection analysis: w and round trip on the additive quadratic") {
    ExperimentSpec spec;
    spec.name = "ix";
    spec.problem.family = ProblemFamily::QuadraticAdditive;
    spec.problem.p = 2;
    spec.problem.c = 50.0;
    spec.theta0 = Vector::Constant(2, 1.0);
    spec.gain = {0.05, 0.501};
    spec.iterations = 10;
    spec.replications = 1;
    ArmSpec u;
    u.label = "unbiased";
    u.estimator.kind = EstimatorConfig::Kind::Pathwise;
    u.noise_override = 50.0;
    ArmSpec b;
    b.label = "biased";
    b.estimator.kind = EstimatorConfig::Kind::OffsetBiased;
    b.estimator.b = Vector::Ones(2);
    b.noise_override = 10.0;
    spec.arms = {u, b};

    IntersectionRequest req;
    req.policy = CPolicy::ClosedFormAtLimit;
    const auto ir = intersection_analysis(spec, req);

    CHECK(ir.w.squaredNorm() == doctest::Approx(0.5));  // b = ones, w = b/2
    // Closed forms: C = 4 c I, Sigma = (a/4) C = a c I, trace = 2 a c.
    CHECK(ir.tr_sigma_unbiased == doctest::Approx(2 * 0.05 * 50.0).epsilon(1e-12));
    CHECK(ir.tr_sigma_biased == doctest::Approx(2 * 0.05 * 10.0).epsilon(1e-12));
    const double gap =
        (ir.tr_sigma_unbiased - ir.tr_sigma_biased) / std::pow(ir.k_star, 0.501);
    CHECK(gap == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("intersection analysis propagates the no-crossing case") {
    ExperimentSpec spec;
    spec.name = "ix2";
    spec.problem.family = ProblemFamily::QuadraticAdditive;
    spec.problem.p = 2;
    spec.theta0 = Vector::Constant(2, 1.0);
    spec.gain = {0.05, 0.501};
    ArmSpec u;
    u.label = "unbiased";
    u.estimator.kind = EstimatorConfig::Kind::Pathwise;
    u.noise_override = 10.0;
    ArmSpec b;
    b.label = "biased";
    b.estimator.kind = EstimatorConfig::Kind::OffsetBiased;
    b.estimator.b = Vector::Ones(2);
    b.noise_override = 10.0;  // equal variances: curves never cross
    spec.arms = {u, b};
    IntersectionRequest req;
    req.policy = CPolicy::ClosedFormAtLimit;
    CHECK_THROWS_AS(intersection_analysis(spec, req), NoIntersectionError);

    // Inside run_experiment the failure is recorded, not thrown.
    spec.iterations = 5;
    spec.replications = 2;
    spec.intersection = req;
    const auto result = run_experiment(spec);
    REQUIRE(result.intersection.has_value());
    CHECK(!result.intersection->error.empty());
}

TEST_CASE("trajectory covariance policy produces a usable crossing") {
    ExperimentSpec spec;
    spec.name = "ix3";
    spec.problem.family = ProblemFamily::Quadratic;
    spec.problem.p = 2;
    spec.theta0 = Vector::Constant(2, 5.0);
    spec.gain = {0.05, 0.501};
    spec.iterations = 100;
    spec.replications = 4;
    ArmSpec u;
    u.label = "unbiased";
    u.estimator.kind = EstimatorConfig::Kind::Pathwise;
    u.noise_override = 50.0;
    ArmSpec b;
    b.label = "biased";
    b.estimator.kind = EstimatorConfig::Kind::OffsetBiased;
    b.estimator.b = Vector::Ones(2);
    b.noise_override = 10.0;
    spec.arms = {u, b};
    IntersectionRequest req;
    req.policy = CPolicy::TrajectoryAtIterate;
    req.k_ref = 50;
    req.n_samples = 20000;
    const auto ir = intersection_analysis(spec, req);
    CHECK(ir.k_star > 0.0);
    CHECK(ir.c_policy == "trajectory_at_iterate");
    CHECK(ir.tr_sigma_unbiased > ir.tr_sigma_biased);
}

TEST_CASE("presets have the documented structure") {
    PresetOptions opt;
    opt.quick = true;

    const auto f21 = preset("fig2.1", opt);
    REQUIRE(f21.experiments.size() == 4);
    for (const auto& e : f21.experiments) {
        CHECK(e.problem.family == ProblemFamily::Simple1D);
        REQUIRE(e.arms.size() == 2);
        CHECK(e.arms[0].label == "unbiased");
        CHECK(e.arms[0].estimator.kind == EstimatorConfig::Kind::ScoreFunction);
        CHECK(e.arms[1].label == "biased");
        CHECK(e.arms[1].estimator.kind == EstimatorConfig::Kind::Pathwise);
        CHECK(e.replications == 200);
        CHECK(e.iterations == 10000);
        CHECK(e.gain.alpha == 0.501);
        CHECK(e.theta0[0] == 7.0);
    }
    CHECK(f21.experiments[0].problem.sigma == 50.0);
    CHECK(f21.experiments[3].problem.sigma == 300.0);

    const auto f41 = preset("fig4_1", opt);
    REQUIRE(f41.experiments.size() == 4);
    for (const auto& e : f41.experiments) {
        CHECK(e.problem.family == ProblemFamily::Quadratic);
        REQUIRE(e.arms.size() == 2);
        CHECK(e.arms[1].estimator.kind == EstimatorConfig::Kind::OffsetBiased);
        CHECK(e.arms[1].noise_override == 10.0);
        CHECK(e.intersection.has_value());
    }
    CHECK(f41.experiments[0].arms[0].noise_override == 50.0);
    CHECK(f41.experiments[3].arms[0].noise_override == 1000.0);

    PresetOptions full = opt;
    full.quick = false;
    CHECK(preset("fig4.1", full).experiments[0].replications == 10000);
    CHECK(preset("fig2.1", full).experiments[0].replications == 1000);
    CHECK(preset("fig4.2", full).experiments[0].replications == 1000);

    const auto f42 = preset("fig4.2", opt);
    REQUIRE(f42.experiments.size() == 4);
    CHECK(f42.experiments[0].problem.r == 1.0);
    CHECK(f42.experiments[3].problem.r == 8.0);
    CHECK(f42.experiments[0].arms[1].optimizer == OptimizerKind::SWSGD);
    CHECK(f42.experiments[0].arms[1].window_t == 2);

    PresetOptions add = opt;
    add.additive_c = true;
    const auto f41a = preset("fig4.1", add);
    CHECK(f41a.experiments[0].problem.family ==
          ProblemFamily::QuadraticAdditive);
    CHECK(f41a.experiments[0].intersection->policy ==
          CPolicy::ClosedFormAtLimit);

    CHECK_THROWS_AS(preset("fig9.9", opt), InvalidInputError);
}

TEST_CASE("preset option overrides are honored") {
    PresetOptions opt;
    opt.quick = true;
    opt.seed = 7;
    opt.replications = 3;
    opt.iterations = 25;
    const auto bundle = preset("fig4.2", opt);
    for (const auto& e : bundle.experiments) {
        CHECK(e.master_seed == 7);
        CHECK(e.replications == 3);
        CHECK(e.iterations == 25);
    }
}

namespace {

double loglog_slope(const MseCurve& curve, std::int64_t k_min,
                    std::int64_t k_max) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < curve.indices.size(); ++i) {
        const std::int64_t k = curve.indices[i];
        if (k < k_min || k > k_max) continue;
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(curve.values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

TEST_CASE("unbiased-arm decay slopes over the asymptotic window") {
    PresetOptions opt;
    opt.quick = true;
    opt.seed = 42;

    // Additive-noise validation mode: MSE tracks k^{-alpha}, so the
    // least-squares slope on [1e3, 1e4] sits inside [-alpha-0.2, -alpha+0.2].
    {
        PresetOptions add = opt;
        add.additive_c = true;
        const auto bundle = preset("fig4.1", add);
        const auto result = run_experiment(bundle.experiments[0]);
        const double slope = loglog_slope(result.arms[0].curve, 1000, 10000);
        CHECK(slope <= -0.501 + 0.2);
        CHECK(slope >= -0.501 - 0.2);
    }
    // Multiplicative noise vanishes at the optimum, which makes the decay
    // strictly faster; only the upper bound applies.
    {
        const auto bundle = preset("fig4.1", opt);
        const auto result = run_experiment(bundle.experiments[0]);
        const double slope = loglog_slope(result.arms[0].curve, 1000, 10000);
        CHECK(slope <= -0.501 + 0.2);
    }
}

TEST_CASE("boundedness evidence is finite and recorded per arm") {
    const auto result = run_experiment(tiny_quadratic_spec());
    for (const auto& arm : result.arms) {
        REQUIRE(!arm.reports.empty());
        CHECK(arm.reports[0].condition_id == 1);
        CHECK(std::isfinite(arm.reports[0].evidence));
        CHECK(arm.reports[0].evidence > 0.0);
    }
}

TEST_CASE("experiment validation rejects broken specs") {
    ExperimentSpec spec = tiny_quadratic_spec();
    spec.arms.clear();
    CHECK_THROWS_AS(run_experiment(spec), InvalidInputError);

    spec = tiny_quadratic_spec();
    spec.arms[1].label = "sgd";  // duplicate
    CHECK_THROWS_AS(run_experiment(spec), InvalidInputError);

    spec = tiny_quadratic_spec();
    spec.gain.alpha = 0.4;
    CHECK_THROWS_AS(run_experiment(spec), InvalidInputError);

    spec = tiny_quadratic_spec();
    spec.arms[0].label = "a,b";
    CHECK_THROWS_AS(run_experiment(spec), InvalidInputError);
}

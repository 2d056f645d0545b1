#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "swsgd/harness.hpp"

namespace swsgd {

/// Parsed form of the line-oriented config format: `key = value` pairs,
/// `#` comments, and `[arm]` section headers opening one arm each. Keys
/// before the first section are global.
struct ParsedConfig {
    std::map<std::string, std::string> globals;
    std::vector<std::map<std::string, std::string>> arms;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::filesystem::path& path);

/// Builds an experiment from a parsed config. Global keys: name, problem
/// (simple|quadratic|quadratic_additive|quartic), p, sigma, r, c, a_vec,
/// eq210_literal, theta0, a, alpha, iterations, reps, seed, stride,
/// threads, out_dir, stream_policy (paired|per_arm), c_policy
/// (trajectory|limit), k_ref, c_samples, intersect_arms
/// (<unbiased label>,<biased label>), r_u, r_b, b. Arm keys: label,
/// optimizer (gd|sgd|swsgd), estimator (score|pathwise|offset), t, b, r, c.
///
/// `r_u`/`r_b` are shorthand: with no [arm] sections they expand to the
/// standard unbiased-pathwise / offset-biased pair with those noise levels.
ExperimentSpec experiment_from_config(const ParsedConfig& config);

/// Inputs of the simulation-free prediction path: problem + gain, the
/// points where the closed-form covariance is evaluated, the k grid for the
/// predicted MSE table, and an optional biased arm for a crossing point.
struct AnalyzeSpec {
    std::string name = "analysis";
    ProblemConfig problem{};
    GainSequence gain{};
    std::vector<std::int64_t> mse_at_ks{1, 10, 100, 1000, 10000};
    Vector c_at;          // evaluation point; defaults to theta*
    MuForm mu_form = MuForm::Literal;
    bool has_biased = false;
    Vector b;             // biased arm offset
    double r_biased = 0.0;
};

AnalyzeSpec analyze_from_config(const ParsedConfig& config);

/// Inputs of the standalone crossing-point computation. Direct mode uses
/// explicitly given traces; derived mode computes them from an analyze-style
/// problem description.
struct IntersectSpec {
    std::string name = "intersection";
    bool direct = false;
    double tr_sigma_unbiased = 0.0;
    double tr_sigma_biased = 0.0;
    Vector w;
    double alpha = 0.501;
    AnalyzeSpec derived;  // used when !direct
};

IntersectSpec intersect_from_config(const ParsedConfig& config);

// Shared value parsers (exposed for the CLI's flag handling).
double parse_double(const std::string& key, const std::string& value);
std::int64_t parse_int(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);
Vector parse_vector(const std::string& key, const std::string& value);

}  // namespace swsgd

#include "swsgd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace swsgd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& where) {
    throw ConfigError("unknown " + where + " key '" + key + "'");
}

}  // namespace

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + value +
                          "' as a real number");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ConfigError("key '" + key + "': cannot parse '" + value +
                          "' as an integer");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as a boolean");
}

Vector parse_vector(const std::string& key, const std::string& value) {
    std::vector<double> entries;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        entries.push_back(parse_double(key, trim(item)));
    }
    if (entries.empty()) {
        throw ConfigError("key '" + key + "': empty vector");
    }
    Vector v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i];
    return v;
}

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig cfg;
    std::map<std::string, std::string>* current = &cfg.globals;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line != "[arm]") {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown section '" + line +
                                  "' (only [arm] is supported)");
            }
            cfg.arms.emplace_back();
            current = &cfg.arms.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        if (current->count(key)) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        }
        (*current)[key] = value;
    }
    return cfg;
}

ParsedConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

ProblemFamily parse_family(const std::string& value) {
    if (value == "simple") return ProblemFamily::Simple1D;
    if (value == "quadratic") return ProblemFamily::Quadratic;
    if (value == "quadratic_additive") return ProblemFamily::QuadraticAdditive;
    if (value == "quartic") return ProblemFamily::SkewedQuartic;
    throw ConfigError(
        "key 'problem': expected simple | quadratic | quadratic_additive | "
        "quartic, got '" + value + "'");
}

/// Fills problem and gain fields shared by the run/analyze/intersect paths.
/// Returns the set of keys it consumed.
void apply_problem_keys(const std::map<std::string, std::string>& g,
                        ProblemConfig& problem, GainSequence& gain,
                        std::vector<std::string>& consumed) {
    auto take = [&](const char* key) -> const std::string* {
        auto it = g.find(key);
        if (it == g.end()) return nullptr;
        consumed.push_back(key);
        return &it->second;
    };
    if (const auto* v = take("problem")) problem.family = parse_family(*v);
    if (const auto* v = take("p")) {
        problem.p = static_cast<Eigen::Index>(parse_int("p", *v));
    }
    if (const auto* v = take("sigma")) problem.sigma = parse_double("sigma", *v);
    if (const auto* v = take("r")) problem.r = parse_double("r", *v);
    if (const auto* v = take("c")) problem.c = parse_double("c", *v);
    if (const auto* v = take("a_vec")) problem.center = parse_vector("a_vec", *v);
    if (const auto* v = take("eq210_literal")) {
        problem.eq210_literal = parse_bool("eq210_literal", *v);
    }
    if (const auto* v = take("a")) gain.a = parse_double("a", *v);
    if (const auto* v = take("alpha")) gain.alpha = parse_double("alpha", *v);
    if (problem.center.size() > 0) problem.p = problem.center.size();
    if (problem.family == ProblemFamily::Simple1D) problem.p = 1;
}

EstimatorConfig::Kind parse_estimator(const std::string& value) {
    if (value == "score") return EstimatorConfig::Kind::ScoreFunction;
    if (value == "pathwise") return EstimatorConfig::Kind::Pathwise;
    if (value == "offset") return EstimatorConfig::Kind::OffsetBiased;
    throw ConfigError(
        "key 'estimator': expected score | pathwise | offset, got '" + value +
        "'");
}

OptimizerKind parse_optimizer(const std::string& value) {
    if (value == "gd") return OptimizerKind::GD;
    if (value == "sgd") return OptimizerKind::SGD;
    if (value == "swsgd") return OptimizerKind::SWSGD;
    throw ConfigError("key 'optimizer': expected gd | sgd | swsgd, got '" +
                      value + "'");
}

ArmSpec parse_arm(const std::map<std::string, std::string>& section,
                  Eigen::Index p, int index) {
    ArmSpec arm;
    arm.label = "arm" + std::to_string(index);
    for (const auto& [key, value] : section) {
        if (key == "label") {
            arm.label = value;
        } else if (key == "optimizer") {
            arm.optimizer = parse_optimizer(value);
        } else if (key == "estimator") {
            arm.estimator.kind = parse_estimator(value);
        } else if (key == "t") {
            arm.window_t = parse_int("t", value);
        } else if (key == "b") {
            arm.estimator.b = parse_vector("b", value);
        } else if (key == "r" || key == "c" || key == "sigma") {
            arm.noise_override = parse_double(key, value);
        } else {
            bad_key(key, "arm");
        }
    }
    if (arm.estimator.kind == EstimatorConfig::Kind::OffsetBiased &&
        arm.estimator.b.size() == 0) {
        arm.estimator.b = Vector::Ones(p);
    }
    return arm;
}

void reject_unconsumed(const std::map<std::string, std::string>& g,
                       const std::vector<std::string>& consumed,
                       const char* where) {
    for (const auto& [key, value] : g) {
        if (std::find(consumed.begin(), consumed.end(), key) ==
            consumed.end()) {
            bad_key(key, where);
        }
    }
}

}  // namespace

ExperimentSpec experiment_from_config(const ParsedConfig& config) {
    const auto& g = config.globals;
    ExperimentSpec spec;
    std::vector<std::string> consumed;
    apply_problem_keys(g, spec.problem, spec.gain, consumed);

    auto take = [&](const char* key) -> const std::string* {
        auto it = g.find(key);
        if (it == g.end()) return nullptr;
        consumed.push_back(key);
        return &it->second;
    };
    if (const auto* v = take("name")) spec.name = *v;
    if (const auto* v = take("theta0")) spec.theta0 = parse_vector("theta0", *v);
    if (const auto* v = take("iterations")) {
        spec.iterations = parse_int("iterations", *v);
    }
    if (const auto* v = take("reps")) spec.replications = parse_int("reps", *v);
    if (const auto* v = take("seed")) {
        spec.master_seed = static_cast<std::uint64_t>(parse_int("seed", *v));
    }
    if (const auto* v = take("stride")) {
        spec.record_stride = parse_int("stride", *v);
    }
    if (const auto* v = take("threads")) {
        spec.threads = static_cast<int>(parse_int("threads", *v));
    }
    if (const auto* v = take("out_dir")) spec.out_dir = *v;
    if (const auto* v = take("stream_policy")) {
        if (*v == "paired") {
            spec.stream_policy = StreamPolicy::Paired;
        } else if (*v == "per_arm") {
            spec.stream_policy = StreamPolicy::PerArm;
        } else {
            throw ConfigError(
                "key 'stream_policy': expected paired | per_arm, got '" + *v +
                "'");
        }
    }

    // Shorthand: r_u/r_b expand to the standard two-arm comparison.
    const auto* r_u = take("r_u");
    const auto* r_b = take("r_b");
    const auto* b_val = take("b");
    if ((r_u != nullptr) != (r_b != nullptr)) {
        throw ConfigError("keys r_u and r_b must be given together");
    }
    if (r_u && !config.arms.empty()) {
        throw ConfigError("r_u/r_b shorthand cannot be mixed with [arm] sections");
    }

    if (r_u) {
        ArmSpec unbiased;
        unbiased.label = "unbiased";
        unbiased.estimator.kind = EstimatorConfig::Kind::Pathwise;
        unbiased.noise_override = parse_double("r_u", *r_u);
        ArmSpec biased;
        biased.label = "biased";
        biased.estimator.kind = EstimatorConfig::Kind::OffsetBiased;
        biased.estimator.b =
            b_val ? parse_vector("b", *b_val) : Vector::Ones(spec.problem.p);
        biased.noise_override = parse_double("r_b", *r_b);
        spec.arms = {unbiased, biased};
    } else {
        if (b_val) {
            throw ConfigError("top-level 'b' is only valid with r_u/r_b");
        }
        int index = 0;
        for (const auto& section : config.arms) {
            spec.arms.push_back(parse_arm(section, spec.problem.p, index++));
        }
    }
    if (spec.arms.empty()) {
        throw ConfigError("config defines no arms (add [arm] sections or r_u/r_b)");
    }

    const auto* intersect_arms = take("intersect_arms");
    const auto* c_policy = take("c_policy");
    const auto* k_ref = take("k_ref");
    const auto* c_samples = take("c_samples");
    if (intersect_arms) {
        IntersectionRequest req;
        const auto comma = intersect_arms->find(',');
        if (comma == std::string::npos) {
            throw ConfigError(
                "key 'intersect_arms': expected '<unbiased label>,<biased "
                "label>'");
        }
        const std::string lu = trim(intersect_arms->substr(0, comma));
        const std::string lb = trim(intersect_arms->substr(comma + 1));
        auto find_arm = [&](const std::string& label) -> std::size_t {
            for (std::size_t i = 0; i < spec.arms.size(); ++i) {
                if (spec.arms[i].label == label) return i;
            }
            throw ConfigError("intersect_arms: no arm labeled '" + label + "'");
        };
        req.unbiased_arm = find_arm(lu);
        req.biased_arm = find_arm(lb);
        if (c_policy) {
            if (*c_policy == "trajectory") {
                req.policy = CPolicy::TrajectoryAtIterate;
            } else if (*c_policy == "limit") {
                req.policy = CPolicy::ClosedFormAtLimit;
            } else {
                throw ConfigError(
                    "key 'c_policy': expected trajectory | limit, got '" +
                    *c_policy + "'");
            }
        }
        if (k_ref) req.k_ref = parse_int("k_ref", *k_ref);
        if (c_samples) req.n_samples = parse_int("c_samples", *c_samples);
        spec.intersection = req;
    } else if (c_policy || k_ref || c_samples) {
        throw ConfigError(
            "c_policy/k_ref/c_samples require intersect_arms to be set");
    }

    reject_unconsumed(g, consumed, "global");

    if (spec.theta0.size() == 0) {
        throw ConfigError("config must set theta0");
    }
    if (spec.theta0.size() != spec.problem.p) {
        throw ConfigError("theta0 dimension " +
                          std::to_string(spec.theta0.size()) +
                          " does not match problem dimension " +
                          std::to_string(spec.problem.p));
    }
    return spec;
}

AnalyzeSpec analyze_from_config(const ParsedConfig& config) {
    if (!config.arms.empty()) {
        throw ConfigError("analyze configs do not take [arm] sections");
    }
    const auto& g = config.globals;
    AnalyzeSpec spec;
    std::vector<std::string> consumed;
    apply_problem_keys(g, spec.problem, spec.gain, consumed);
    auto take = [&](const char* key) -> const std::string* {
        auto it = g.find(key);
        if (it == g.end()) return nullptr;
        consumed.push_back(key);
        return &it->second;
    };
    if (const auto* v = take("name")) spec.name = *v;
    if (const auto* v = take("mse_at")) {
        spec.mse_at_ks.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            spec.mse_at_ks.push_back(parse_int("mse_at", trim(item)));
        }
    }
    if (const auto* v = take("c_at")) spec.c_at = parse_vector("c_at", *v);
    if (const auto* v = take("mu_form")) {
        if (*v == "literal") {
            spec.mu_form = MuForm::Literal;
        } else if (*v == "inverse") {
            spec.mu_form = MuForm::Inverse;
        } else {
            throw ConfigError(
                "key 'mu_form': expected literal | inverse, got '" + *v + "'");
        }
    }
    if (const auto* v = take("b")) {
        spec.b = parse_vector("b", *v);
        spec.has_biased = true;
    }
    if (const auto* v = take("r_b")) {
        spec.r_biased = parse_double("r_b", *v);
        if (!spec.has_biased) {
            throw ConfigError("analyze key 'r_b' requires 'b'");
        }
    }
    reject_unconsumed(g, consumed, "analyze");
    return spec;
}

IntersectSpec intersect_from_config(const ParsedConfig& config) {
    const auto& g = config.globals;
    IntersectSpec spec;
    if (g.count("tr_sigma_unbiased") || g.count("tr_sigma_biased") ||
        g.count("w")) {
        spec.direct = true;
        std::vector<std::string> consumed;
        auto need = [&](const char* key) -> const std::string& {
            auto it = g.find(key);
            if (it == g.end()) {
                throw ConfigError(std::string("direct intersect config needs '") +
                                  key + "'");
            }
            consumed.push_back(key);
            return it->second;
        };
        spec.tr_sigma_unbiased =
            parse_double("tr_sigma_unbiased", need("tr_sigma_unbiased"));
        spec.tr_sigma_biased =
            parse_double("tr_sigma_biased", need("tr_sigma_biased"));
        spec.w = parse_vector("w", need("w"));
        auto it = g.find("alpha");
        if (it != g.end()) {
            spec.alpha = parse_double("alpha", it->second);
            consumed.push_back("alpha");
        }
        if (auto n = g.find("name"); n != g.end()) {
            spec.name = n->second;
            consumed.push_back("name");
        }
        reject_unconsumed(g, consumed, "intersect");
        return spec;
    }
    spec.direct = false;
    spec.derived = analyze_from_config(config);
    spec.name = spec.derived.name;
    spec.alpha = spec.derived.gain.alpha;
    if (!spec.derived.has_biased) {
        throw ConfigError(
            "derived intersect config needs a biased arm ('b', optionally "
            "'r_b')");
    }
    return spec;
}

}  // namespace swsgd

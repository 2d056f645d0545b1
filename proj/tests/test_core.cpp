#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/stats.hpp"
#include "swsgd/gain.hpp"
#include "swsgd/noise.hpp"
#include "swsgd/rng.hpp"

using namespace swsgd;

TEST_CASE("stream determinism: same spec, identical draws") {
    RngStream a = derive_stream({42, 0});
    RngStream b = derive_stream({42, 0});
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("stream separation: distinct indices differ immediately") {
    RngStream a = derive_stream({42, 0});
    RngStream b = derive_stream({42, 1});
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("golden values pin the generator algorithm") {
    // Frozen once from the documented splitmix64 construction; a change in
    // the algorithm or its seeding breaks every recorded experiment.
    RngStream s = derive_stream({42, 7});
    CHECK(s.next_u64() == 0x001dcf1b277a0c18ULL);
    CHECK(s.next_u64() == 0xff6a03ddcc9b51e2ULL);
    CHECK(s.next_u64() == 0x2a9c423cf344298eULL);
    CHECK(s.next_u64() == 0x19807f83a2b4fd77ULL);

    RngStream u = derive_stream({42, 7});
    CHECK(u.next_uniform() == doctest::Approx(0.000454849366612331).epsilon(1e-15));
    CHECK(u.next_uniform() == doctest::Approx(0.9977114120962204).epsilon(1e-15));

    RngStream n = derive_stream({42, 7});
    CHECK(n.next_normal() == doctest::Approx(3.922742186550324).epsilon(1e-12));
    CHECK(n.next_normal() == doctest::Approx(1.5347224777421673).epsilon(1e-12));
}

TEST_CASE("uniform layer stays inside (0, 1]") {
    RngStream s = derive_stream({1, 2});
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("each normal consumes exactly two integer draws") {
    RngStream a = derive_stream({9, 3});
    RngStream b = derive_stream({9, 3});
    (void)a.next_normal();
    (void)b.next_u64();
    (void)b.next_u64();
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("normal layer has the right first two moments") {
    RngStream s = derive_stream({5, 0});
    const int n = 1000000;
    double sum = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.next_normal();
        sum += x;
        ss += x * x;
    }
    const double mean = sum / n;
    const double var = ss / n - mean * mean;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("gain_at evaluates a/(k+1)^alpha") {
    CHECK(gain_at({250.0 / 50.0, 0.501}, 0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(gain_at({1.0, 1.0}, 0) == 1.0);
    // Cross-checked against an independent high-precision evaluation.
    CHECK(gain_at({5.0, 0.501}, 9999) ==
          doctest::Approx(0.049541597244638378720414157194).epsilon(1e-15));
}

TEST_CASE("gain sequence is strictly decreasing and diverges in sum") {
    RngStream s = derive_stream({77, 0});
    for (int rep = 0; rep < 20; ++rep) {
        const double a = 0.1 + 10.0 * s.next_uniform();
        const double alpha = 0.5 + 0.5 * s.next_uniform();
        const GainSequence g{a, alpha};
        double prev = gain_at(g, 0);
        for (std::int64_t k = 1; k < 200; ++k) {
            const double cur = gain_at(g, k);
            CHECK(cur < prev);
            prev = cur;
        }
    }

    // Partial sums grow without bound: at K = 1e6 they must exceed the
    // lower bound a ((K+1)^{1-alpha} - 1)/(1-alpha) predicted by the
    // integral comparison (alpha < 1), and a ln(K+1) at alpha = 1.
    {
        const GainSequence g{1.0, 0.6};
        double sum = 0.0;
        for (std::int64_t k = 0; k <= 1000000; ++k) sum += gain_at(g, k);
        const double bound = (std::pow(1e6 + 1.0, 0.4) - 1.0) / 0.4;
        CHECK(sum > bound);
        CHECK(sum > 100.0);
    }
    {
        const GainSequence g{1.0, 1.0};
        double sum = 0.0;
        for (std::int64_t k = 0; k <= 1000000; ++k) sum += gain_at(g, k);
        CHECK(sum > std::log(1e6));
    }
}

TEST_CASE("squared gains have convergent partial sums") {
    // Cauchy-style evidence: successive tail blocks shrink, and for
    // alpha = 1 the per-term increment at K = 1e6 is already below 1e-12.
    const GainSequence g{1.0, 0.501};
    auto block = [&](std::int64_t from, std::int64_t to) {
        double s = 0.0;
        for (std::int64_t k = from; k < to; ++k) {
            const double ak = gain_at(g, k);
            s += ak * ak;
        }
        return s;
    };
    const double b1 = block(1000, 2000);
    const double b2 = block(2000, 4000);
    const double b3 = block(4000, 8000);
    CHECK(b2 < b1);
    CHECK(b3 < b2);

    const GainSequence unit{1.0, 1.0};
    const double increment = gain_at(unit, 1000000) * gain_at(unit, 1000000);
    CHECK(increment < 1e-12);
}

TEST_CASE("make_gain_sequence rejects out-of-range parameters") {
    CHECK_THROWS_AS(make_gain_sequence(1.0, 0.5), InvalidInputError);
    CHECK_THROWS_AS(make_gain_sequence(1.0, 1.5), InvalidInputError);
    CHECK_THROWS_AS(make_gain_sequence(-1.0, 0.7), InvalidInputError);
    CHECK_NOTHROW(make_gain_sequence(1.0, 1.0));
    CHECK_NOTHROW(make_gain_sequence(1.0, 0.501));
}

TEST_CASE("zero-variance multiplicative noise is exactly one") {
    RngStream s = derive_stream({3, 0});
    const NoiseModel m = GaussianMultiplicative{0.0};
    const Vector theta = Vector::Zero(2);
    for (int i = 0; i < 10; ++i) {
        const auto draw = sample_noise(m, i, theta, s);
        CHECK(std::get<ScalarDraw>(draw).v == 1.0);
    }
}

TEST_CASE("truncated samples respect the bound exactly") {
    RngStream s = derive_stream({3, 1});
    const double r = 4.0, c = 1.5;
    const NoiseModel m = TruncatedGaussianMultiplicative{r, c};
    const Vector theta = Vector::Zero(1);
    for (int i = 0; i < 20000; ++i) {
        const auto draw = sample_noise(m, i, theta, s);
        CHECK(std::abs(std::get<ScalarDraw>(draw).v - 1.0) <=
              c * std::sqrt(r));
    }
}

TEST_CASE("decaying noise contracts toward one at the stated rate") {
    RngStream s = derive_stream({3, 2});
    const NoiseModel m =
        DecayingMultiplicative{0.5, TruncatedGaussianMultiplicative{1.0, 5.0}};
    const Vector theta = Vector::Zero(1);
    // |V_k - 1| <= c sqrt(r) / (k+1)^gamma is a hard bound.
    for (const std::int64_t k : {0L, 10L, 1000L, 1000000L}) {
        for (int i = 0; i < 100; ++i) {
            const auto draw = sample_noise(m, k, theta, s);
            const double dev = std::abs(std::get<ScalarDraw>(draw).v - 1.0);
            CHECK(dev <= 5.0 / std::pow(static_cast<double>(k) + 1.0, 0.5));
        }
    }
}

TEST_CASE("noise model means converge to one at the Monte Carlo rate") {
    const Vector theta = Vector::Zero(1);
    auto run_mean = [&](const NoiseModel& m, std::uint64_t idx, int n) {
        RngStream s = derive_stream({99, idx});
        std::vector<double> vs;
        vs.reserve(n);
        for (int i = 0; i < n; ++i) {
            vs.push_back(std::get<ScalarDraw>(sample_noise(m, 5, theta, s)).v);
        }
        return test_support::mean_with_se(vs);
    };
    // 3-standard-error acceptance, 1e6 samples for the case the tolerance
    // examples pin; fewer for the cheap bounded models.
    {
        const auto m = run_mean(GaussianMultiplicative{4.0}, 0, 1000000);
        CHECK(std::abs(m.mean - 1.0) < 3.0 * (2.0 / 1000.0));
    }
    {
        const auto m = run_mean(TruncatedGaussianMultiplicative{4.0, 5.0}, 1,
                                200000);
        CHECK(std::abs(m.mean - 1.0) < 3.0 * m.standard_error + 1e-12);
    }
    {
        const auto m = run_mean(
            DecayingMultiplicative{0.5, TruncatedGaussianMultiplicative{4.0, 5.0}},
            2, 200000);
        CHECK(std::abs(m.mean - 1.0) < 3.0 * m.standard_error + 1e-12);
    }
}

TEST_CASE("simple-example noise requires nonzero scalar theta") {
    RngStream s = derive_stream({1, 1});
    const NoiseModel m = SimpleExampleNoise{50.0};
    CHECK_THROWS_AS(sample_noise(m, 0, Vector::Zero(1), s),
                    DegenerateParameterError);
    CHECK_THROWS_AS(sample_noise(m, 0, Vector::Ones(2), s),
                    DimensionMismatchError);

    const Vector theta = Vector::Constant(1, 7.0);
    std::vector<double> zs, ws;
    for (int i = 0; i < 200000; ++i) {
        const auto d = std::get<PairDraw>(sample_noise(m, 0, theta, s));
        zs.push_back(d.z);
        ws.push_back(d.w);
    }
    const auto mz = test_support::mean_with_se(zs);
    const auto mw = test_support::mean_with_se(ws);
    CHECK(std::abs(mz.mean - 1.0) < 3.0 * mz.standard_error);
    CHECK(std::abs(mw.mean - 49.0) < 3.0 * mw.standard_error);
    CHECK(test_support::sample_variance(ws) ==
          doctest::Approx(50.0 * 50.0 * 49.0).epsilon(0.02));
}

TEST_CASE("additive vector noise has independent N(0, c) coordinates") {
    RngStream s = derive_stream({1, 4});
    const NoiseModel m = AdditiveVector{2.0};
    const Vector theta = Vector::Zero(3);
    std::vector<double> first;
    for (int i = 0; i < 100000; ++i) {
        const auto d = std::get<VectorDraw>(sample_noise(m, 0, theta, s));
        REQUIRE(d.eps.size() == 3);
        first.push_back(d.eps[0]);
    }
    const auto mf = test_support::mean_with_se(first);
    CHECK(std::abs(mf.mean) < 3.0 * mf.standard_error);
    CHECK(test_support::sample_variance(first) ==
          doctest::Approx(2.0).epsilon(0.03));
}

#include "prosokit/metrics.hpp"
#include "prosokit/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace prosokit;

namespace {

// The sixteen-syllable English reference sequence used as a worked case
// throughout the tests.
const std::vector<double> kEnglish16 = {170, 40,  210, 120, 180, 210, 140, 120,
                                        150, 170, 130, 130, 80,  350, 80,  320};

std::vector<double> scaled(const std::vector<double>& v, double k) {
    std::vector<double> out(v);
    for (double& x : out) x *= k;
    return out;
}

} // namespace

TEST_CASE("sd reproduces the worked value with the N-1 denominator") {
    CHECK(sd(kEnglish16) == doctest::Approx(81.6).epsilon(0.001));
    CHECK(std::llround(sd(kEnglish16)) == 82);
    // the population denominator gives a visibly different value
    CHECK(sd(kEnglish16, SdMode::Population) == doctest::Approx(79.0).epsilon(0.001));
}

TEST_CASE("sd basics") {
    std::vector<double> constant = {100, 100, 100};
    CHECK(sd(constant) == 0.0);
    std::vector<double> simple = {1, 2, 3};
    CHECK(sd(simple) == doctest::Approx(1.0));
    std::vector<double> one = {5};
    CHECK_THROWS_AS(sd(one), Error);
}

TEST_CASE("coeff_var") {
    CHECK(coeff_var(kEnglish16) == doctest::Approx(50.2).epsilon(0.002));
    CHECK(std::llround(coeff_var(kEnglish16)) == 50);
    std::vector<double> constant = {150, 150, 150};
    CHECK(coeff_var(constant) == 0.0);
    std::vector<double> pair = {100, 300};
    CHECK(coeff_var(pair) == doctest::Approx(70.7).epsilon(0.001));
}

TEST_CASE("rpvi") {
    std::vector<double> alt = {2, 4, 2, 4};
    CHECK(rpvi(alt) == doctest::Approx(2.0));
    std::vector<double> constant = {7, 7, 7};
    CHECK(rpvi(constant) == 0.0);
    std::vector<double> pair = {100, 150};
    CHECK(rpvi(pair) == doctest::Approx(50.0));
}

TEST_CASE("npvi of a strict alternation") {
    std::vector<double> alt = {2, 4, 2, 4, 2, 4};
    CHECK(npvi(alt) == doctest::Approx(200.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("npvi cannot see alternation in geometric mixtures") {
    std::vector<double> alternating = {2, 4, 2, 4, 2, 4};
    std::vector<double> doubling = {2, 4, 8, 16, 32, 16};
    std::vector<double> halving = {32, 16, 8, 16, 8, 4};
    CHECK(npvi(alternating) == doctest::Approx(npvi(doubling)).epsilon(1e-12));
    CHECK(npvi(doubling) == doctest::Approx(npvi(halving)).epsilon(1e-12));
    CHECK(npvi(alternating) == doctest::Approx(66.6667).epsilon(1e-4));
}

TEST_CASE("npvi of the sixteen-duration reference list") {
    CHECK(npvi(kEnglish16) == doctest::Approx(60.35).epsilon(0.001));
    CHECK(std::llround(npvi(kEnglish16)) == 60);
}

TEST_CASE("npvi edge cases") {
    std::vector<double> constant = {9, 9, 9, 9};
    CHECK(npvi(constant) == 0.0);
    std::vector<double> with_zero = {1, 0, 2};
    CHECK_THROWS_AS(npvi(with_zero), Error);
}

TEST_CASE("vi_deterding") {
    std::vector<double> constant = {4, 4, 4};
    CHECK(vi_deterding(constant) == 0.0);

    // pair means equal the global mean here, so both normalisations agree
    std::vector<double> alt = {2, 4, 2, 4, 2, 4};
    CHECK(vi_deterding(alt) == doctest::Approx(npvi(alt)).epsilon(1e-12));

    // and here they diverge: global mean 13, differences sum 46
    std::vector<double> geometric = {2, 4, 8, 16, 32, 16};
    CHECK(vi_deterding(geometric) == doctest::Approx(100.0 * 46.0 / 13.0 / 5.0).epsilon(1e-9));
    CHECK(vi_deterding(geometric) == doctest::Approx(70.77).epsilon(0.001));
    CHECK(vi_deterding(geometric) != doctest::Approx(npvi(geometric)).epsilon(0.01));
}

TEST_CASE("scale invariance and scale covariance") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dur(30.0, 400.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> d;
        for (int i = 0; i < 12; ++i) d.push_back(dur(rng));
        for (double k : {0.5, 3.0, 17.25}) {
            std::vector<double> kd = scaled(d, k);
            CHECK(npvi(kd) == doctest::Approx(npvi(d)).epsilon(1e-9));
            CHECK(coeff_var(kd) == doctest::Approx(coeff_var(d)).epsilon(1e-9));
            CHECK(rpvi(kd) == doctest::Approx(k * rpvi(d)).epsilon(1e-9));
            CHECK(sd(kd) == doctest::Approx(k * sd(d)).epsilon(1e-9));
        }
    }
}

TEST_CASE("permutation changes npvi but not sd") {
    std::vector<double> base = {1, 2, 3, 4};
    std::vector<double> swapped = {1, 3, 2, 4};
    CHECK(sd(base) == doctest::Approx(sd(swapped)).epsilon(1e-12));
    CHECK(coeff_var(base) == doctest::Approx(coeff_var(swapped)).epsilon(1e-12));
    CHECK(npvi(base) != doctest::Approx(npvi(swapped)).epsilon(1e-6));
}

TEST_CASE("npvi stays inside [0, 200)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dur(1e-3, 1e3);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> d;
        for (int i = 0; i < 8; ++i) d.push_back(dur(rng));
        const double v = npvi(d);
        CHECK(v >= 0.0);
        CHECK(v < 200.0);
    }
    // extreme pair ratio approaches but never reaches 200
    std::vector<double> extreme = {1e-3, 1e3};
    CHECK(npvi(extreme) < 200.0);
    CHECK(npvi(extreme) > 199.9);
}

TEST_CASE("metrics agree with a direct transcription of their formulas") {
    auto direct_sd = [](const std::vector<double>& d) {
        double mu = 0.0;
        for (double x : d) mu += x;
        mu /= static_cast<double>(d.size());
        double ss = 0.0;
        for (double x : d) ss += (x - mu) * (x - mu);
        return std::sqrt(ss / static_cast<double>(d.size() - 1));
    };
    auto direct_npvi = [](const std::vector<double>& d) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            acc += std::abs(d[i] - d[i + 1]) / ((d[i] + d[i + 1]) / 2.0);
        return 100.0 * acc / static_cast<double>(d.size() - 1);
    };
    auto direct_cv = [&](const std::vector<double>& d) {
        double mu = 0.0;
        for (double x : d) mu += x;
        mu /= static_cast<double>(d.size());
        return 100.0 * direct_sd(d) / mu;
    };
    auto direct_rpvi = [](const std::vector<double>& d) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) acc += std::abs(d[i] - d[i + 1]);
        return acc / static_cast<double>(d.size() - 1);
    };
    auto direct_vi = [](const std::vector<double>& d) {
        double mu = 0.0;
        for (double x : d) mu += x;
        mu /= static_cast<double>(d.size());
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) acc += std::abs(d[i] - d[i + 1]) / mu;
        return 100.0 * acc / static_cast<double>(d.size() - 1);
    };

    std::mt19937 rng(314159);
    std::uniform_real_distribution<double> dur(10.0, 500.0);
    std::uniform_int_distribution<int> len(2, 40);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> d;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) d.push_back(dur(rng));
        CHECK(sd(d) == doctest::Approx(direct_sd(d)).epsilon(1e-9));
        CHECK(npvi(d) == doctest::Approx(direct_npvi(d)).epsilon(1e-9));
        CHECK(coeff_var(d) == doctest::Approx(direct_cv(d)).epsilon(1e-9));
        CHECK(rpvi(d) == doctest::Approx(direct_rpvi(d)).epsilon(1e-9));
        CHECK(vi_deterding(d) == doctest::Approx(direct_vi(d)).epsilon(1e-9));
    }
}

TEST_CASE("compute_metrics bundles the family") {
    MetricsReport report = compute_metrics(kEnglish16);
    CHECK(report.n == 16);
    CHECK(report.mean == doctest::Approx(162.5));
    CHECK(report.median == doctest::Approx(145.0));
    CHECK(report.min == 40.0);
    CHECK(report.max == 350.0);
    CHECK(std::llround(report.sd) == 82);
    CHECK(std::llround(report.coeff_var) == 50);
    CHECK(std::llround(report.npvi) == 60);
}

TEST_CASE("moving_npvi constants") {
    std::vector<double> constant(9, 120.0);
    WindowSeries ws = moving_npvi(constant, 5, 1);
    REQUIRE(ws.values.size() == 5);
    for (double v : ws.values) CHECK(v == 0.0);
    CHECK(ws.summary.mean == 0.0);
    CHECK(ws.summary.coeff_var == 0.0);
}

TEST_CASE("moving_npvi over a strict alternation") {
    std::vector<double> alt = {2, 4, 2, 4, 2, 4, 2, 4, 2};
    WindowSeries ws = moving_npvi(alt, 5, 1);
    REQUIRE(ws.values.size() == 5);
    for (double v : ws.values) CHECK(v == doctest::Approx(200.0 / 3.0).epsilon(1e-9));
    CHECK(ws.summary.sd == doctest::Approx(0.0));
    CHECK(std::is_sorted(ws.sorted_values.begin(), ws.sorted_values.end()));
}

TEST_CASE("moving_npvi with window == n is the global npvi") {
    std::vector<double> d = {120, 80, 200, 140, 90};
    WindowSeries ws = moving_npvi(d, d.size(), 1);
    REQUIRE(ws.values.size() == 1);
    CHECK(ws.values[0] == npvi(d)); // exact: same code path over the same span
    CHECK(ws.summary.sd == 0.0);
}

TEST_CASE("moving_npvi sorted_values is an ascending permutation") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> dur(50.0, 300.0);
    std::vector<double> d;
    for (int i = 0; i < 30; ++i) d.push_back(dur(rng));
    WindowSeries ws = moving_npvi(d, 5, 1);
    CHECK(ws.values.size() == d.size() - 5 + 1);
    std::vector<double> resorted = ws.values;
    std::sort(resorted.begin(), resorted.end());
    CHECK(ws.sorted_values == resorted);
}

TEST_CASE("moving_npvi rejects short sequences") {
    std::vector<double> d = {100, 120, 140};
    try {
        moving_npvi(d, 5, 1);
        FAIL("expected SequenceShorterThanWindow");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SequenceShorterThanWindow);
    }
}

TEST_CASE("box_stats on singletons and quartile interpolation") {
    std::map<std::string, std::vector<double>> groups;
    groups["one"] = {42.0};
    groups["four"] = {1.0, 2.0, 3.0, 4.0};
    auto stats = box_stats(groups);

    const BoxStat& one = stats.at("one");
    CHECK(one.q1 == 42.0);
    CHECK(one.median == 42.0);
    CHECK(one.q3 == 42.0);
    CHECK(one.min == 42.0);
    CHECK(one.max == 42.0);
    CHECK(one.mean == 42.0);

    const BoxStat& four = stats.at("four");
    CHECK(four.median == doctest::Approx(2.5));
    CHECK(four.q1 == doctest::Approx(1.75));
    CHECK(four.q3 == doctest::Approx(3.25));
}

TEST_CASE("box_stats keeps categories independent") {
    std::map<std::string, std::vector<double>> groups;
    groups["a"] = {10.0, 20.0};
    groups["b"] = {1000.0, 2000.0};
    auto stats = box_stats(groups);
    CHECK(stats.at("a").max == 20.0);
    CHECK(stats.at("b").min == 1000.0);
    CHECK(stats.at("a").q1 <= stats.at("a").median);
    CHECK(stats.at("a").median <= stats.at("a").q3);
}

TEST_CASE("box_stats rejects empty groups") {
    std::map<std::string, std::vector<double>> groups;
    groups["empty"] = {};
    CHECK_THROWS_AS(box_stats(groups), Error);
}

TEST_CASE("speech_rate from the median duration") {
    std::vector<double> sp1 = {196.0, 180.0, 220.0}; // median 196
    CHECK(speech_rate(sp1).median_rate == doctest::Approx(5.10).epsilon(0.002));
    std::vector<double> sp2 = {174.0};
    CHECK(speech_rate(sp2).median_rate == doctest::Approx(5.75).epsilon(0.002));
    std::vector<double> even = {200.0, 200.0, 200.0, 200.0};
    CHECK(speech_rate(even).median_rate == doctest::Approx(5.0));
    CHECK_THROWS_AS(speech_rate({}), Error);
}

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "ccfilter/biquad.hpp"
#include "ccfilter/frequency_response.hpp"
#include "ccfilter/response_analysis.hpp"
#include "test_support.hpp"

using namespace ccfilter;

namespace {

constexpr FilterMode kModes[] = {FilterMode::low_pass, FilterMode::high_pass,
                                 FilterMode::band_pass, FilterMode::notch};

FrequencyResponse sweep_mode(const FilterDesign& d, FilterMode mode, double center_scale,
                             int ppd) {
    const double w0 = design_params(d).omega0;
    return sample_response(transfer_function(d, mode),
                           centered_log_grid(w0 * center_scale, 2.0, ppd));
}

FrequencyResponse flat_response(double level) {
    const auto grid = log_grid(1.0, 1e4, 8);
    std::vector<std::complex<double>> gains(grid.size(), {level, 0.0});
    return FrequencyResponse(grid, std::move(gains));
}

} // namespace

TEST_CASE("responses validate their inputs") {
    std::vector<double> w = log_grid(1.0, 10.0, 15); // 16 points
    std::vector<std::complex<double>> g(w.size(), {1.0, 0.0});
    CHECK_NOTHROW(FrequencyResponse(w, g));

    CHECK_THROWS_AS(FrequencyResponse({1.0, 2.0}, {{1, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyResponse(w, std::vector<std::complex<double>>(w.size() - 1)),
                    std::invalid_argument);

    auto stuck = w;
    stuck[4] = stuck[3];
    CHECK_THROWS_AS(FrequencyResponse(stuck, g), std::invalid_argument);
    auto negative = w;
    negative[0] = -1.0;
    CHECK_THROWS_AS(FrequencyResponse(negative, g), std::invalid_argument);
    auto infinite = w;
    infinite.back() = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(FrequencyResponse(infinite, g), std::invalid_argument);
}

TEST_CASE("log grids have the advertised shape") {
    const auto grid = log_grid(10.0, 1000.0, 8);
    REQUIRE(grid.size() == 17);
    CHECK(grid.front() == 10.0);
    CHECK(grid.back() == doctest::Approx(1000.0).epsilon(1e-12));
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] / grid[i - 1] ==
              doctest::Approx(std::pow(10.0, 1.0 / 8.0)).epsilon(1e-12));

    CHECK_THROWS_AS(log_grid(10.0, 10.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(-1.0, 10.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(1.0, 10.0, 0), std::invalid_argument);
}

TEST_CASE("centered grids put the center exactly on a sample") {
    const auto grid = centered_log_grid(100.0, 1.5, 10);
    REQUIRE(grid.size() == 31);
    CHECK(grid[15] == 100.0);
    CHECK(grid.front() == doctest::Approx(100.0 * std::pow(10.0, -1.5)).epsilon(1e-12));
    CHECK(grid.back() == doctest::Approx(100.0 * std::pow(10.0, 1.5)).epsilon(1e-12));

    // The CLI default: 1.5 decades each way at 200 per decade.
    CHECK(centered_log_grid(1234.5, 1.5, 200).size() == 601);
    CHECK_THROWS_AS(centered_log_grid(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(centered_log_grid(1.0, -1.0, 10), std::invalid_argument);
}

TEST_CASE("sampling a transfer function keeps the pointwise values") {
    const RationalTF tf({1.0}, {1.0, 1e-3});
    const auto grid = log_grid(1.0, 1e6, 4);
    const FrequencyResponse resp = sample_response(tf, grid);
    REQUIRE(resp.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(resp.omega(i) == grid[i]);
        CHECK(resp.gain(i) == tf.evaluate(grid[i]));
    }
}

TEST_CASE("the four drive configurations classify as themselves") {
    const FilterDesign d = FilterDesign::reference();
    for (FilterMode mode : kModes) {
        // Slightly off-center grid so no sample sits exactly on omega0.
        const FrequencyResponse resp = sweep_mode(d, mode, 1.001, 500);
        CHECK(classify(resp) == mode);
    }
}

TEST_CASE("flat and narrow responses stay unclassified") {
    CHECK(!classify(flat_response(1.0)).has_value());
    CHECK(!classify(flat_response(0.5)).has_value());

    // One decade around the center is too little context for a q = 0.5
    // band-pass: the edges only fall 14 dB.
    FilterDesign d = FilterDesign::reference();
    d.r3 = 1.0 / (2.0 * design_params(d).omega0 * d.c2); // q = 0.5
    const double w0 = design_params(d).omega0;
    const FrequencyResponse narrow = sample_response(
        transfer_function(d, FilterMode::band_pass), centered_log_grid(w0, 1.0, 50));
    CHECK(!classify(narrow).has_value());
}

TEST_CASE("first-order RC corners classify and measure") {
    // H = 1/(1 + s): corner at 1 rad/s.
    const RationalTF lp({1.0}, {1.0, 1.0});
    const FrequencyResponse lp_resp = sample_response(lp, centered_log_grid(1.0, 2.0, 100));
    REQUIRE(classify(lp_resp) == FilterMode::low_pass);
    const MeasuredParams lp_m = measure(lp_resp, FilterMode::low_pass);
    CHECK(lp_m.omega0 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(lp_m.q == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
    CHECK(lp_m.dc_gain == doctest::Approx(1.0).epsilon(1e-3));

    // H = s/(1 + s): the mirror image.
    const RationalTF hp({0.0, 1.0}, {1.0, 1.0});
    const FrequencyResponse hp_resp = sample_response(hp, centered_log_grid(1.0, 2.0, 100));
    REQUIRE(classify(hp_resp) == FilterMode::high_pass);
    const MeasuredParams hp_m = measure(hp_resp, FilterMode::high_pass);
    CHECK(hp_m.omega0 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(hp_m.q == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
    CHECK(hp_m.hf_gain == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("a synthetic band-pass reads back its construction values") {
    // H = (s/q) / (s^2 + s/q + 1) with omega0 = 1, q = 5.
    const RationalTF tf({0.0, 0.2}, {1.0, 0.2, 1.0});
    const FrequencyResponse resp = sample_response(tf, centered_log_grid(1.0, 2.0, 200));
    REQUIRE(classify(resp) == FilterMode::band_pass);
    const MeasuredParams m = measure(resp, FilterMode::band_pass);
    CHECK(std::abs(m.omega0 - 1.0) <= 1e-3);
    CHECK(std::abs(m.q - 5.0) <= 5.0 * 1e-2);
    CHECK(m.bandwidth == doctest::Approx(0.2).epsilon(1e-2));
    CHECK(m.peak_or_null_gain == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(m.dc_gain < 0.01);
    CHECK(m.hf_gain < 0.01);
}

TEST_CASE("notch measurement finds the null and its depth") {
    const FilterDesign d = FilterDesign::reference();
    const DesignParams p = design_params(d);
    const FrequencyResponse resp = sweep_mode(d, FilterMode::notch, 1.0, 1000);
    const MeasuredParams m = measure(resp, FilterMode::notch);
    CHECK(std::abs(m.omega0 - p.omega0) <= 1e-4 * p.omega0);
    // At 1000 points per decade the on-grid sample sits in the null itself.
    CHECK(m.peak_or_null_gain <= 1e-3);
    CHECK(m.q == doctest::Approx(p.q).epsilon(2e-2));
    CHECK(m.dc_gain == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(m.hf_gain == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("measured characteristics round-trip random designs") {
    std::mt19937 rng(46464);
    for (int trial = 0; trial < 10; ++trial) {
        const FilterDesign d = ccfilter::test::random_design_with_q(rng, 0.6, 10.0);
        const DesignParams p = design_params(d);
        for (FilterMode mode : kModes) {
            const FrequencyResponse resp = sweep_mode(d, mode, 1.0, 200);
            REQUIRE(classify(resp) == mode);
            const MeasuredParams m = measure(resp, mode);
            CHECK(std::abs(m.omega0 - p.omega0) <= 0.005 * p.omega0);
            CHECK(std::abs(m.q - p.q) <= 0.02 * p.q);
        }
    }
}

TEST_CASE("narrow sweeps fail loudly instead of guessing") {
    const FilterDesign d = FilterDesign::reference();
    const DesignParams p = design_params(d);
    const RationalTF bp = transfer_function(d, FilterMode::band_pass);
    const RationalTF lp = transfer_function(d, FilterMode::low_pass);
    const RationalTF nt = transfer_function(d, FilterMode::notch);

    // Peak outside the sweep: everything below the center frequency.
    const FrequencyResponse below =
        sample_response(bp, log_grid(p.omega0 / 1000.0, p.omega0 / 10.0, 10));
    CHECK_THROWS_WITH_AS(static_cast<void>(measure(below, FilterMode::band_pass)),
                         doctest::Contains("sweep too narrow"), MeasurementError);

    // Peak inside but the -3 dB skirts are not.
    const FrequencyResponse tight =
        sample_response(bp, centered_log_grid(p.omega0, 0.05, 400));
    CHECK_THROWS_WITH_AS(static_cast<void>(measure(tight, FilterMode::band_pass)),
                         doctest::Contains("-3 dB skirt not bracketed"), MeasurementError);

    // Low-pass sampled deep inside its passband never crosses -45 degrees.
    const FrequencyResponse passband =
        sample_response(lp, log_grid(p.omega0 * 1e-4, p.omega0 * 1e-2, 10));
    CHECK_THROWS_WITH_AS(static_cast<void>(measure(passband, FilterMode::low_pass)),
                         doctest::Contains("phase crossing not bracketed"), MeasurementError);

    // Notch null outside the sweep.
    const FrequencyResponse shoulder =
        sample_response(nt, log_grid(p.omega0 / 1000.0, p.omega0 / 10.0, 10));
    CHECK_THROWS_WITH_AS(static_cast<void>(measure(shoulder, FilterMode::notch)),
                         doctest::Contains("sweep too narrow"), MeasurementError);
}

TEST_CASE("doubling the grid density refines rather than degrades") {
    const FilterDesign d = FilterDesign::reference();
    const DesignParams p = design_params(d);
    // Off-center grid so refinement genuinely moves the sample points.
    const double center = p.omega0 * 1.37;

    // The notch needs a sample inside its -30 dB trough before it classifies
    // at all, hence the denser ladder.
    const std::vector<std::pair<FilterMode, std::vector<int>>> plans = {
        {FilterMode::band_pass, {25, 50, 100, 200}},
        {FilterMode::low_pass, {25, 50, 100, 200}},
        {FilterMode::notch, {200, 400, 800}},
    };
    for (const auto& [mode, ppds] : plans) {
        const RationalTF tf = transfer_function(d, mode);
        double prev_w0_err = -1.0;
        double prev_q_err = -1.0;
        for (int ppd : ppds) {
            const FrequencyResponse resp =
                sample_response(tf, centered_log_grid(center, 2.0, ppd));
            REQUIRE(classify(resp) == mode);
            const MeasuredParams m = measure(resp, mode);
            const double w0_err = std::abs(m.omega0 - p.omega0);
            const double q_err = std::abs(m.q - p.q);
            if (prev_w0_err >= 0.0) {
                CHECK(w0_err <= 1.1 * prev_w0_err + 1e-9 * p.omega0);
                CHECK(q_err <= 1.1 * prev_q_err + 1e-9 * p.q);
            }
            prev_w0_err = w0_err;
            prev_q_err = q_err;
        }
    }
}

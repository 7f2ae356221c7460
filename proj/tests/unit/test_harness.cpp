#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "polyapprox/errors.hpp"
#include "polyapprox/harness.hpp"
#include "polyapprox/metrics.hpp"

using namespace polyapprox;

namespace {

ExperimentConfig small_als() {
    ExperimentConfig c;
    c.function_id = "f1";
    c.dim = 2;
    c.max_m = 80;
    c.trials = 4;
    c.grid_size = 1500;
    c.seed = 17;
    return c;
}

std::string csv_of(const ExperimentResult& r) {
    std::ostringstream os;
    write_csv(os, r.rows);
    return os.str();
}

}  // namespace

TEST(Metrics, RelativeError) {
    const std::vector<double> f{3.0, 4.0}, g{3.0, 3.0};
    EXPECT_NEAR(relative_error(g, f, ErrorNorm::L2), 1.0 / 5.0, 1e-15);
    EXPECT_NEAR(relative_error(g, f, ErrorNorm::Linf), 1.0 / 4.0, 1e-15);
    EXPECT_EQ(relative_error(f, f, ErrorNorm::L2), 0.0);
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_THROW((void)relative_error(g, zero, ErrorNorm::L2), std::domain_error);
    // Scale invariance.
    const std::vector<double> f2{30.0, 40.0}, g2{30.0, 30.0};
    EXPECT_NEAR(relative_error(g2, f2, ErrorNorm::L2), relative_error(g, f, ErrorNorm::L2), 1e-15);
}

TEST(Metrics, GeometricStats) {
    const std::vector<double> v{1.0, 100.0};
    const GeometricStats s = geometric_stats(v);
    EXPECT_NEAR(s.mean, 10.0, 1e-12);
    EXPECT_NEAR(s.lower, std::pow(10.0, 1.0 - std::sqrt(2.0)), 1e-12);
    EXPECT_NEAR(s.upper, std::pow(10.0, 1.0 + std::sqrt(2.0)), 1e-10);
    EXPECT_FALSE(s.floored);
    const std::vector<double> one{5.0};
    EXPECT_NEAR(geometric_stats(one).mean, 5.0, 1e-14);
    EXPECT_NEAR(geometric_stats(one).upper, 5.0, 1e-14);
    const std::vector<double> z{0.0, 1.0};
    EXPECT_TRUE(geometric_stats(z).floored);
}

TEST(Metrics, LogLogSlope) {
    const std::vector<double> x{10, 100, 1000}, y{1, 1e-2, 1e-4};
    EXPECT_NEAR(loglog_slope(x, y), -2.0, 1e-12);
}

TEST(Names, RoundTrip) {
    for (Method m : {Method::ALS, Method::CS, Method::CSChristoffel}) EXPECT_EQ(parse_method(to_string(m)), m);
    for (auto s : {SamplingStrategy::MonteCarlo, SamplingStrategy::NearOptimal})
        EXPECT_EQ(parse_sampling(to_string(s)), s);
    EXPECT_THROW((void)parse_method("omp"), ConfigError);
    EXPECT_THROW((void)parse_sampling("qmc"), ConfigError);
}

TEST(Config, ValidationErrors) {
    ExperimentConfig c = small_als();
    EXPECT_NO_THROW(c.validate());
    c.trials = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_als();
    c.function_id = "nope";
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_als();
    c.grid_size = 10;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_als();
    c.method = Method::CS;
    EXPECT_THROW(c.validate(), ConfigError);  // no schedule
    c.m_schedule = {50, 100};
    EXPECT_NO_THROW(c.validate());
    c.beta = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, JsonRoundTrip) {
    ExperimentConfig c = small_als();
    c.method = Method::CSChristoffel;
    c.m_schedule = {40, 80};
    c.cs_max_restarts = 12;
    c.error_grid_seed = 99;
    c.threads = 8;
    const auto j = c.to_json();
    EXPECT_EQ(j.at("seed"), 17u);
    EXPECT_FALSE(j.contains("threads"));
    const ExperimentConfig back = ExperimentConfig::from_json(j);
    EXPECT_EQ(back.to_json(), j);
    EXPECT_EQ(back.method, Method::CSChristoffel);
    EXPECT_EQ(*back.cs_max_restarts, 12u);
    EXPECT_EQ(*back.error_grid_seed, 99u);
}

TEST(Csv, HeaderOnlyForNoRows) {
    std::ostringstream os;
    write_csv(os, std::vector<RecordRow>{});
    EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, RoundTripIncludingInfinity) {
    std::vector<RecordRow> rows(2);
    rows[0] = {0, 0, 2, 1, 0.1234567890123456789, 0.5, 1.0, 1.0, 0.0};
    rows[1] = {1, 3, 40, 12, 1e-17, 2e-300, std::numeric_limits<double>::infinity(), 12.5, 0.0};
    std::ostringstream os;
    write_csv(os, rows);
    std::istringstream is(os.str());
    EXPECT_EQ(read_csv(is), rows);

    ExperimentResult r;
    r.rows = rows;
    const auto j = to_json(r);
    EXPECT_EQ(rows_from_json(j), rows);
}

TEST(Experiment, AlsRowsAreNested) {
    ExperimentConfig c = small_als();
    c.trials = 1;
    const ExperimentResult r = run_experiment(c);
    ASSERT_TRUE(r.failures.empty());
    ASSERT_GE(r.rows.size(), 3u);
    EXPECT_EQ(r.exit_code(), 0);
    for (std::size_t l = 0; l < r.rows.size(); ++l) {
        EXPECT_EQ(r.rows[l].trial, 0u);
        EXPECT_EQ(r.rows[l].step, l);
        EXPECT_LE(r.rows[l].m, 80u);
        EXPECT_GE(r.rows[l].cond, 1.0);
        if (l > 0) EXPECT_GT(r.rows[l].n, r.rows[l - 1].n);
    }
    EXPECT_EQ(to_json(r).at("config").at("seed"), 17u);
}

TEST(Experiment, DeterministicAcrossRunsAndThreads) {
    ExperimentConfig c = small_als();
    c.sampling = SamplingStrategy::MonteCarlo;
    const std::string a = csv_of(run_experiment(c));
    const std::string b = csv_of(run_experiment(c));
    c.threads = 8;
    const std::string t8 = csv_of(run_experiment(c));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, t8);
    c.seed = 18;
    EXPECT_NE(a, csv_of(run_experiment(c)));
}

TEST(Experiment, CompressedSensingRows) {
    ExperimentConfig c;
    c.function_id = "f3";
    c.dim = 2;
    c.method = Method::CS;
    c.m_schedule = {30, 60};
    c.cs_budget = 60;
    c.trials = 2;
    c.grid_size = 1000;
    c.threads = 2;
    const ExperimentResult r = run_experiment(c);
    ASSERT_TRUE(r.failures.empty());
    ASSERT_EQ(r.rows.size(), 4u);
    for (const auto& row : r.rows) {
        EXPECT_GT(row.n, 0u);
        EXPECT_GT(row.error_l2, 0.0);
    }
    EXPECT_LT(r.rows[1].error_l2, r.rows[0].error_l2 * 2.0);
}

TEST(Experiment, CacheRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "polyapprox_cache_test";
    std::filesystem::remove_all(dir);
    const auto target = make_target("f2", 3);
    const Grid g = draw_grid(3, 300, BasisFamily::Legendre, 5);
    const auto first = target_on_grid(target, g, dir);
    EXPECT_FALSE(std::filesystem::is_empty(dir));
    const auto second = target_on_grid(target, g, dir);
    EXPECT_EQ(first, second);
    EXPECT_EQ(first, target.on_grid(g));
    std::filesystem::remove_all(dir);
}

TEST(Experiment, ExitCodeWhenAllTrialsFail) {
    ExperimentResult r;
    r.config.trials = 2;
    r.failures = {{0, "x"}, {1, "y"}};
    EXPECT_EQ(r.exit_code(), 3);
    r.failures.pop_back();
    EXPECT_EQ(r.exit_code(), 0);
}

TEST(Summary, LastRowAtOrBelowTarget) {
    std::vector<RecordRow> rows;
    auto add = [&](std::size_t t, std::size_t step, std::size_t m, double e) {
        RecordRow r;
        r.trial = t;
        r.step = step;
        r.m = m;
        r.error_l2 = e;
        rows.push_back(r);
    };
    add(0, 0, 10, 1.0);
    add(0, 1, 20, 0.1);
    add(1, 0, 15, 1.0);
    add(1, 1, 30, 0.01);
    const std::vector<std::size_t> targets{5, 20, 30};
    const auto pts = summarize(rows, targets, Column::ErrorL2);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0].count, 0u);
    EXPECT_EQ(pts[1].count, 2u);
    EXPECT_NEAR(pts[1].stats.mean, std::sqrt(0.1), 1e-12);
    EXPECT_NEAR(pts[2].stats.mean, std::sqrt(0.001), 1e-12);
}

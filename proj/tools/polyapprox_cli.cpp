// Command-line driver for the approximation experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyapprox/errors.hpp"
#include "polyapprox/harness.hpp"
#include "polyapprox/multi_index.hpp"
#include "polyapprox/oracles.hpp"
#include "polyapprox/test_functions.hpp"

namespace pa = polyapprox;

namespace {

struct SharedOptions {
    std::string fn = "f1";
    std::size_t dim = 1;
    std::string family = "legendre";
    std::string sampling = "optimal";
    std::string scaling = "loglinear";
    std::size_t trials = 50;
    std::size_t grid_size = 20000;
    std::uint64_t seed = 1;
    std::string norm = "l2";
    std::string out;
    std::string format = "csv";
    std::size_t threads = 1;
    std::uint64_t error_grid_seed = 0;
    bool timing = false;
    std::string cache_dir;
    std::string config_file;
};

void add_shared(CLI::App* app, SharedOptions& o) {
    app->add_option("--fn", o.fn, "Target function id");
    app->add_option("--dim", o.dim, "Parameter dimension d")->check(CLI::PositiveNumber);
    app->add_option("--family", o.family, "Polynomial family")->check(CLI::IsMember({"legendre", "cheb1", "cheb2"}));
    app->add_option("--sampling", o.sampling, "Sampling strategy")->check(CLI::IsMember({"mc", "optimal"}));
    app->add_option("--scaling", o.scaling, "Sample scaling rule")
        ->check(CLI::IsMember({"loglinear", "linear15", "linear2"}));
    app->add_option("--trials", o.trials, "Independent trials")->check(CLI::PositiveNumber);
    app->add_option("--grid-size", o.grid_size, "Grid size K")->check(CLI::PositiveNumber);
    app->add_option("--seed", o.seed, "Master seed");
    app->add_option("--norm", o.norm, "Error norm for summaries")->check(CLI::IsMember({"l2", "linf"}));
    app->add_option("--out", o.out, "Output file (default: stdout)");
    app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--error-grid-seed", o.error_grid_seed, "Seed of a held-out error grid (0: shared grid)");
    app->add_flag("--timing", o.timing, "Record wall-clock time per step");
    app->add_option("--cache-dir", o.cache_dir, "Directory for cached target values");
    app->add_option("--config", o.config_file, "JSON experiment config; flags given on the command line override it");
}

pa::ExperimentConfig to_config(const SharedOptions& o, const CLI::App& app) {
    pa::ExperimentConfig c;
    if (!o.config_file.empty()) {
        std::ifstream in(o.config_file);
        if (!in) throw pa::ConfigError("cannot open config file " + o.config_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw pa::ConfigError(std::string("malformed config file: ") + e.what());
        }
        c = pa::ExperimentConfig::from_json(j);
    }
    auto given = [&](const char* name) { return o.config_file.empty() || app.count(name) > 0; };
    if (given("--fn")) c.function_id = o.fn;
    if (given("--dim")) c.dim = o.dim;
    if (given("--family")) c.family = pa::parse_family(o.family);
    if (given("--sampling")) c.sampling = pa::parse_sampling(o.sampling);
    if (given("--scaling")) c.scaling = pa::parse_scaling(o.scaling);
    if (given("--trials")) c.trials = o.trials;
    if (given("--grid-size")) c.grid_size = o.grid_size;
    if (given("--seed")) c.seed = o.seed;
    if (given("--norm")) c.error_norm = pa::parse_norm(o.norm);
    if (given("--timing")) c.timing = o.timing;
    if (app.count("--error-grid-seed") > 0 && o.error_grid_seed != 0) c.error_grid_seed = o.error_grid_seed;
    c.threads = o.threads;
    if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
    return c;
}

/// Writes to --out or stdout.
void emit_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    body(out);
}

int emit_result(const pa::ExperimentResult& r, const SharedOptions& o) {
    emit_text(o.out, [&](std::ostream& os) {
        if (o.format == "json") {
            os << pa::to_json(r).dump(2) << '\n';
        } else {
            pa::write_csv(os, r.rows);
        }
    });
    for (const auto& f : r.failures) std::cerr << "trial " << f.trial << " failed: " << f.message << '\n';
    return r.exit_code();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::vector<std::size_t> default_m_grid(std::size_t max_m) {
    std::vector<std::size_t> out;
    for (double m = 10.0; m <= static_cast<double>(max_m) + 0.5; m *= 1.5) out.push_back(static_cast<std::size_t>(m));
    if (out.empty() || out.back() != max_m) out.push_back(max_m);
    return out;
}

/// Univariate factors of the product and additive targets.
std::function<double(double)> univariate_factor(const std::string& fn, std::size_t i) {
    if (fn == "f1") return [i](double y) { return std::exp(y / (2.0 * static_cast<double>(i))); };
    if (fn == "f3" || fn == "f3:i")
        return [i](double y) { return pa::f3_factor(y, pa::f3_delta(pa::DeltaRule::Linear, i)); };
    if (fn == "f3:isq")
        return [i](double y) { return pa::f3_factor(y, pa::f3_delta(pa::DeltaRule::Quadratic, i)); };
    if (fn == "sine")
        return [](double y) {
            const double s = std::sin(16.0 / 15.0 * y - 0.7);
            return 0.3 + s + s * s;
        };
    throw pa::ConfigError("best-n-term supports f1, f3, f3:i, f3:isq and sine, not '" + fn + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial approximation experiments: adaptive least squares and compressed sensing"};
    app.require_subcommand(1);

    SharedOptions als_o;
    auto* als = app.add_subcommand("als", "Adaptive weighted least squares");
    add_shared(als, als_o);
    std::size_t als_max_m = 1000;
    double beta = 0.5;
    als->add_option("--max-m", als_max_m, "Stop once m would exceed this")->check(CLI::PositiveNumber);
    als->add_option("--beta", beta, "Bulk-chasing fraction");

    SharedOptions cs_o;
    auto* cs = app.add_subcommand("cs", "Compressed sensing via the restarted primal-dual solver");
    add_shared(cs, cs_o);
    std::vector<std::size_t> cs_m;
    std::size_t budget = 10000;
    std::size_t restarts = 0;
    bool christoffel = false;
    cs->add_option("--m-list", cs_m, "Sample counts")->required()->delimiter(',');
    cs->add_option("--budget", budget, "Largest truncation set size");
    cs->add_option("--max-restarts", restarts, "Override the restart limit (0: default)");
    cs->add_flag("--christoffel", christoffel, "Sample from the Christoffel density of the truncation space");

    SharedOptions kap_o;
    auto* kap = app.add_subcommand("kappa-scan", "kappa of line sets and exhaustive maxima over lower sets");
    add_shared(kap, kap_o);
    std::size_t kap_n = 10;
    kap->add_option("--max-n", kap_n, "Largest set size")->check(CLI::PositiveNumber);

    SharedOptions bnt_o;
    auto* bnt = app.add_subcommand("best-n-term", "Best n-term errors of product and additive targets");
    add_shared(bnt, bnt_o);
    std::vector<std::size_t> bnt_n{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
    std::size_t max_degree = 60;
    bnt->add_option("--n-list", bnt_n, "Values of n")->delimiter(',');
    bnt->add_option("--max-degree", max_degree, "Univariate truncation degree");

    SharedOptions cmp_o;
    auto* cmp = app.add_subcommand("compare", "Monte Carlo against near-optimal sampling for adaptive least squares");
    add_shared(cmp, cmp_o);
    std::size_t cmp_max_m = 1000;
    std::vector<std::size_t> cmp_m;
    cmp->add_option("--max-m", cmp_max_m, "Largest m")->check(CLI::PositiveNumber);
    cmp->add_option("--m-list", cmp_m, "Summary abscissae (default: geometric grid)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*als) {
            pa::ExperimentConfig c = to_config(als_o, *als);
            c.method = pa::Method::ALS;
            if (als_o.config_file.empty() || als->count("--max-m")) c.max_m = als_max_m;
            if (als_o.config_file.empty() || als->count("--beta")) c.beta = beta;
            return emit_result(pa::run_experiment(c), als_o);
        }
        if (*cs) {
            pa::ExperimentConfig c = to_config(cs_o, *cs);
            c.method = christoffel ? pa::Method::CSChristoffel : pa::Method::CS;
            c.m_schedule = cs_m;
            c.cs_budget = budget;
            if (restarts > 0) c.cs_max_restarts = restarts;
            return emit_result(pa::run_experiment(c), cs_o);
        }
        if (*kap) {
            const pa::BasisFamily fam = pa::parse_family(kap_o.family);
            emit_text(kap_o.out, [&](std::ostream& os) {
                os << "n,kappa_line,kappa_max_lower\n";
                for (std::size_t n = 1; n <= kap_n; ++n) {
                    const pa::IndexSet line = pa::tensor_set(static_cast<std::uint32_t>(n - 1), 1);
                    os << n << ',' << pa::kappa(fam, line) << ',';
                    if (kap_o.dim <= 3 && n <= 10) os << pa::kappa_max_lower(fam, kap_o.dim, n);
                    os << '\n';
                }
            });
            return 0;
        }
        if (*bnt) {
            const pa::BasisFamily fam = pa::parse_family(bnt_o.family);
            std::vector<std::vector<double>> per_dim;
            bool converged = true;
            for (std::size_t i = 1; i <= bnt_o.dim; ++i) {
                const auto ex = pa::univariate_coeffs(univariate_factor(bnt_o.fn, i), fam, max_degree);
                converged = converged && ex.converged;
                per_dim.push_back(ex.coefficients);
            }
            if (!converged) std::cerr << "warning: univariate quadrature did not converge\n";
            const bool additive = bnt_o.fn == "sine";
            emit_text(bnt_o.out, [&](std::ostream& os) {
                os << "n,error\n";
                for (std::size_t n : bnt_n) {
                    const pa::BestNTerm b =
                        additive ? pa::best_n_term_additive(per_dim, n) : pa::best_n_term_product(per_dim, n);
                    os << n << ',' << fmt(b.error) << '\n';
                }
            });
            return 0;
        }
        if (*cmp) {
            pa::ExperimentConfig c = to_config(cmp_o, *cmp);
            c.method = pa::Method::ALS;
            c.max_m = cmp_max_m;
            pa::ExperimentConfig mc = c, opt = c;
            mc.sampling = pa::SamplingStrategy::MonteCarlo;
            opt.sampling = pa::SamplingStrategy::NearOptimal;
            const auto rm = pa::run_experiment(mc);
            const auto ro = pa::run_experiment(opt);
            const auto grid = cmp_m.empty() ? default_m_grid(cmp_max_m) : cmp_m;
            const pa::Column col = c.error_norm == pa::ErrorNorm::L2 ? pa::Column::ErrorL2 : pa::Column::ErrorLinf;
            const auto em = pa::summarize(rm.rows, grid, col), eo = pa::summarize(ro.rows, grid, col);
            const auto cm = pa::summarize(rm.rows, grid, pa::Column::Cond), co = pa::summarize(ro.rows, grid, pa::Column::Cond);
            emit_text(cmp_o.out, [&](std::ostream& os) {
                os << "m,mc_error,mc_error_lower,mc_error_upper,opt_error,opt_error_lower,opt_error_upper,mc_cond,opt_cond\n";
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    if (em[k].count == 0 || eo[k].count == 0) continue;
                    os << grid[k] << ',' << fmt(em[k].stats.mean) << ',' << fmt(em[k].stats.lower) << ','
                       << fmt(em[k].stats.upper) << ',' << fmt(eo[k].stats.mean) << ',' << fmt(eo[k].stats.lower) << ','
                       << fmt(eo[k].stats.upper) << ',' << fmt(cm[k].stats.mean) << ',' << fmt(co[k].stats.mean) << '\n';
                }
            });
            for (const auto& f : rm.failures) std::cerr << "mc trial " << f.trial << " failed: " << f.message << '\n';
            for (const auto& f : ro.failures) std::cerr << "optimal trial " << f.trial << " failed: " << f.message << '\n';
            return std::max(rm.exit_code(), ro.exit_code());
        }
    } catch (const pa::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const pa::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

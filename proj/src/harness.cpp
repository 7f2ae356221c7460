#include "polyapprox/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "polyapprox/errors.hpp"
#include "polyapprox/rng.hpp"
#include "polyapprox/sr_lasso.hpp"

namespace polyapprox {

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::ALS: return "als";
        case Method::CS: return "cs";
        case Method::CSChristoffel: return "cs-christoffel";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "als") return Method::ALS;
    if (name == "cs") return Method::CS;
    if (name == "cs-christoffel") return Method::CSChristoffel;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(SamplingStrategy strategy) noexcept {
    return strategy == SamplingStrategy::MonteCarlo ? "mc" : "optimal";
}

SamplingStrategy parse_sampling(std::string_view name) {
    if (name == "mc") return SamplingStrategy::MonteCarlo;
    if (name == "optimal") return SamplingStrategy::NearOptimal;
    throw ConfigError("unknown sampling strategy '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    if (dim == 0) throw ConfigError("dimension must be at least 1");
    if (trials == 0) throw ConfigError("trials must be at least 1");
    if (grid_size == 0) throw ConfigError("grid size must be at least 1");
    if (threads == 0) throw ConfigError("threads must be at least 1");
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("bulk parameter must lie in (0, 1]");
    if (noise_level < 0.0) throw ConfigError("noise level must be nonnegative");
    if (method == Method::ALS) {
        if (max_m == 0) throw ConfigError("max_m must be positive");
        if (grid_size < max_m) throw ConfigError("grid size must be at least max_m");
    } else {
        if (m_schedule.empty()) throw ConfigError("compressed sensing needs a sample-count schedule");
        for (std::size_t m : m_schedule) {
            if (m == 0) throw ConfigError("sample counts must be positive");
            if (m > grid_size) throw ConfigError("grid size must be at least every scheduled m");
        }
        if (cs_budget == 0) throw ConfigError("truncation budget must be positive");
    }
    (void)make_target(function_id, dim);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j = {
        {"function", function_id},
        {"dim", dim},
        {"family", std::string(polyapprox::to_string(family))},
        {"sampling", std::string(polyapprox::to_string(sampling))},
        {"method", std::string(polyapprox::to_string(method))},
        {"scaling", std::string(polyapprox::to_string(scaling))},
        {"max_m", max_m},
        {"max_steps", max_steps},
        {"m_schedule", m_schedule},
        {"cs_budget", cs_budget},
        {"beta", beta},
        {"noise_level", noise_level},
        {"trials", trials},
        {"grid_size", grid_size},
        {"error_norm", std::string(polyapprox::to_string(error_norm))},
        {"seed", seed},
        {"timing", timing},
    };
    j["cs_max_restarts"] = cs_max_restarts ? nlohmann::json(*cs_max_restarts) : nlohmann::json(nullptr);
    j["error_grid_seed"] = error_grid_seed ? nlohmann::json(*error_grid_seed) : nlohmann::json(nullptr);
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        c.function_id = j.value("function", c.function_id);
        c.dim = j.value("dim", c.dim);
        if (j.contains("family")) c.family = parse_family(j.at("family").get<std::string>());
        if (j.contains("sampling")) c.sampling = parse_sampling(j.at("sampling").get<std::string>());
        if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
        if (j.contains("scaling")) c.scaling = parse_scaling(j.at("scaling").get<std::string>());
        c.max_m = j.value("max_m", c.max_m);
        c.max_steps = j.value("max_steps", c.max_steps);
        c.m_schedule = j.value("m_schedule", c.m_schedule);
        c.cs_budget = j.value("cs_budget", c.cs_budget);
        if (j.contains("cs_max_restarts") && !j.at("cs_max_restarts").is_null())
            c.cs_max_restarts = j.at("cs_max_restarts").get<std::size_t>();
        c.beta = j.value("beta", c.beta);
        c.noise_level = j.value("noise_level", c.noise_level);
        c.trials = j.value("trials", c.trials);
        c.grid_size = j.value("grid_size", c.grid_size);
        if (j.contains("error_norm")) c.error_norm = parse_norm(j.at("error_norm").get<std::string>());
        c.seed = j.value("seed", c.seed);
        if (j.contains("error_grid_seed") && !j.at("error_grid_seed").is_null())
            c.error_grid_seed = j.at("error_grid_seed").get<std::uint64_t>();
        c.timing = j.value("timing", c.timing);
        c.threads = j.value("threads", c.threads);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
}

int ExperimentResult::exit_code() const { return failures.size() >= config.trials ? 3 : 0; }

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
    return h;
}

constexpr std::uint64_t kCacheMagic = 0x3148434143545048ULL;  // "HPTCACH1"

}  // namespace

std::vector<double> target_on_grid(const TargetFunction& target, const Grid& grid,
                                   const std::optional<std::filesystem::path>& cache_dir) {
    if (!cache_dir) return target.on_grid(grid);
    std::ostringstream key;
    key << "v1|" << target.id << '|' << target.dim << '|' << grid.size() << '|' << grid.seed << '|'
        << to_string(grid.measure);
    char name[40];
    std::snprintf(name, sizeof name, "target-%016llx.bin", static_cast<unsigned long long>(fnv1a(key.str())));
    const std::filesystem::path path = *cache_dir / name;

    if (std::ifstream in{path, std::ios::binary}) {
        std::uint64_t magic = 0, count = 0;
        in.read(reinterpret_cast<char*>(&magic), sizeof magic);
        in.read(reinterpret_cast<char*>(&count), sizeof count);
        if (in && magic == kCacheMagic && count == grid.size()) {
            std::vector<double> values(count);
            in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
            if (in) return values;
        }
    }
    std::vector<double> values = target.on_grid(grid);
    std::filesystem::create_directories(*cache_dir);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
        const std::uint64_t count = values.size();
        out.write(reinterpret_cast<const char*>(&kCacheMagic), sizeof kCacheMagic);
        out.write(reinterpret_cast<const char*>(&count), sizeof count);
        out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
        if (!out) throw std::runtime_error("cannot write target cache " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
    return values;
}

namespace {

struct TrialOutput {
    std::vector<RecordRow> rows;
    std::optional<std::string> failure;
};

struct SharedData {
    const ExperimentConfig* config = nullptr;
    Grid grid;
    std::vector<double> values;
    std::optional<Grid> error_grid;
    std::vector<double> error_values;
};

TrialOutput run_als_trial(const SharedData& sd, std::size_t trial) {
    const ExperimentConfig& c = *sd.config;
    Rng rng(derive_seed(c.seed, "trial", trial));
    AlsConfig ac;
    ac.family = c.family;
    ac.strategy = c.sampling;
    ac.scaling = c.scaling;
    ac.beta = c.beta;
    ac.max_m = c.max_m;
    ac.max_steps = c.max_steps;
    ac.noise_level = c.noise_level;
    ac.keep_coefficients = false;
    std::optional<GridTarget> err;
    if (sd.error_grid) err = GridTarget{&*sd.error_grid, sd.error_values};
    const AlsTrace trace = als_run(GridTarget{&sd.grid, sd.values}, ac, rng, err);

    TrialOutput out;
    for (std::size_t l = 0; l < trace.steps.size(); ++l) {
        const AlsStep& s = trace.steps[l];
        out.rows.push_back({trial, l, s.m, s.n, s.error_l2, s.error_linf, s.result.condition_number, s.kappa,
                            c.timing ? s.wall_time_ms : 0.0});
    }
    out.failure = trace.failure;
    return out;
}

TrialOutput run_cs_trial(const SharedData& sd, std::size_t trial) {
    const ExperimentConfig& c = *sd.config;
    Rng rng(derive_seed(c.seed, "trial", trial));
    CsConfig cc;
    cc.family = c.family;
    cc.sampling = c.method == Method::CS ? CsSampling::MonteCarlo : CsSampling::ChristoffelLambda;
    cc.budget = c.cs_budget;
    cc.noise_level = c.noise_level;
    cc.max_restarts = c.cs_max_restarts;
    const IndexSet lambda = cs_truncation_set(c.dim, c.cs_budget);
    const double kap = cc.sampling == CsSampling::MonteCarlo ? kappa(c.family, lambda) : static_cast<double>(lambda.size());
    const Grid& eval_grid = sd.error_grid ? *sd.error_grid : sd.grid;
    const std::vector<double>& eval_values = sd.error_grid ? sd.error_values : sd.values;

    TrialOutput out;
    try {
        for (std::size_t step = 0; step < c.m_schedule.size(); ++step) {
            const auto start = std::chrono::steady_clock::now();
            const std::size_t m = c.m_schedule[step];
            const CsResult r = cs_approximate(GridTarget{&sd.grid, sd.values}, m, cc, rng);
            const Vector approx = r.coefficients.evaluate(c.family, eval_grid.points);
            const std::span<const double> a(approx.data(), static_cast<std::size_t>(approx.size()));
            RecordRow row{trial, step, m, lambda.size(), relative_error(a, eval_values, ErrorNorm::L2),
                          relative_error(a, eval_values, ErrorNorm::Linf), r.support_condition, kap, 0.0};
            if (c.timing)
                row.wall_time_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            out.rows.push_back(row);
        }
    } catch (const std::exception& e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    SharedData sd;
    sd.config = &config;
    const TargetFunction target = make_target(config.function_id, config.dim);
    sd.grid = draw_grid(config.dim, config.grid_size, config.family, derive_seed(config.seed, "grid"));
    sd.values = target_on_grid(target, sd.grid, config.cache_dir);
    if (config.error_grid_seed) {
        sd.error_grid = draw_grid(config.dim, config.grid_size, config.family, *config.error_grid_seed);
        sd.error_values = target_on_grid(target, *sd.error_grid, config.cache_dir);
    }

    std::vector<TrialOutput> outputs(config.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            try {
                outputs[t] = config.method == Method::ALS ? run_als_trial(sd, t) : run_cs_trial(sd, t);
            } catch (const std::exception& e) {
                outputs[t].failure = e.what();
            }
        }
    };
    const std::size_t workers = std::min(config.threads, config.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    ExperimentResult result;
    result.config = config;
    for (std::size_t t = 0; t < outputs.size(); ++t) {
        result.rows.insert(result.rows.end(), outputs[t].rows.begin(), outputs[t].rows.end());
        if (outputs[t].failure) result.failures.push_back({t, *outputs[t].failure});
    }
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
T parse_field(std::string_view s, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("malformed CSV field '" + std::string(s) + "' on line " + std::to_string(line));
    return v;
}

double parse_double_field(std::string_view s, std::size_t line) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    return parse_field<double>(s, line);
}

}  // namespace

void write_csv(std::ostream& out, std::span<const RecordRow> rows) {
    out << kCsvHeader << '\n';
    for (const RecordRow& r : rows) {
        out << r.trial << ',' << r.step << ',' << r.m << ',' << r.n << ',' << format_double(r.error_l2) << ','
            << format_double(r.error_linf) << ',' << format_double(r.cond) << ',' << format_double(r.kappa) << ','
            << format_double(r.wall_time_ms) << '\n';
    }
}

std::vector<RecordRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("missing or unexpected CSV header");
    std::vector<RecordRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            f.push_back(rest.substr(0, pos));
        f.push_back(rest);
        if (f.size() != 9) throw std::runtime_error("expected 9 CSV fields on line " + std::to_string(lineno));
        RecordRow r;
        r.trial = parse_field<std::size_t>(f[0], lineno);
        r.step = parse_field<std::size_t>(f[1], lineno);
        r.m = parse_field<std::size_t>(f[2], lineno);
        r.n = parse_field<std::size_t>(f[3], lineno);
        r.error_l2 = parse_double_field(f[4], lineno);
        r.error_linf = parse_double_field(f[5], lineno);
        r.cond = parse_double_field(f[6], lineno);
        r.kappa = parse_double_field(f[7], lineno);
        r.wall_time_ms = parse_double_field(f[8], lineno);
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json to_json(const ExperimentResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const RecordRow& r : result.rows) {
        rows.push_back({{"trial", r.trial},
                        {"step", r.step},
                        {"m", r.m},
                        {"n", r.n},
                        {"error_l2", r.error_l2},
                        {"error_linf", r.error_linf},
                        {"cond", std::isfinite(r.cond) ? nlohmann::json(r.cond) : nlohmann::json("inf")},
                        {"kappa", r.kappa},
                        {"wall_time_ms", r.wall_time_ms}});
    }
    nlohmann::json failures = nlohmann::json::array();
    for (const TrialFailure& f : result.failures) failures.push_back({{"trial", f.trial}, {"message", f.message}});
    return {{"config", result.config.to_json()}, {"rows", rows}, {"failures", failures}};
}

std::vector<RecordRow> rows_from_json(const nlohmann::json& j) {
    std::vector<RecordRow> rows;
    for (const auto& r : j.at("rows")) {
        RecordRow row;
        row.trial = r.at("trial").get<std::size_t>();
        row.step = r.at("step").get<std::size_t>();
        row.m = r.at("m").get<std::size_t>();
        row.n = r.at("n").get<std::size_t>();
        row.error_l2 = r.at("error_l2").get<double>();
        row.error_linf = r.at("error_linf").get<double>();
        row.cond = r.at("cond").is_string() ? std::numeric_limits<double>::infinity() : r.at("cond").get<double>();
        row.kappa = r.at("kappa").get<double>();
        row.wall_time_ms = r.at("wall_time_ms").get<double>();
        rows.push_back(row);
    }
    return rows;
}

std::vector<CurvePoint> summarize(std::span<const RecordRow> rows, std::span<const std::size_t> m_targets,
                                  Column column) {
    std::size_t trials = 0;
    for (const RecordRow& r : rows) trials = std::max(trials, r.trial + 1);
    std::vector<CurvePoint> out;
    for (std::size_t target : m_targets) {
        std::vector<const RecordRow*> last(trials, nullptr);
        for (const RecordRow& r : rows)
            if (r.m <= target && (last[r.trial] == nullptr || r.step > last[r.trial]->step)) last[r.trial] = &r;
        std::vector<double> vals;
        for (const RecordRow* r : last) {
            if (r == nullptr) continue;
            switch (column) {
                case Column::ErrorL2: vals.push_back(r->error_l2); break;
                case Column::ErrorLinf: vals.push_back(r->error_linf); break;
                case Column::Cond: vals.push_back(r->cond); break;
                case Column::Kappa: vals.push_back(r->kappa); break;
            }
        }
        CurvePoint p;
        p.m = target;
        p.count = vals.size();
        if (!vals.empty()) p.stats = geometric_stats(vals);
        out.push_back(p);
    }
    return out;
}

}  // namespace polyapprox

#include "gsr/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gsr/benchmarks.hpp"
#include "gsr/transform.hpp"

namespace gsr::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("invalid value for " + key + ": '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    const double v = parse_number<double>(key, value);
    if (!std::isfinite(v)) {
        throw ConfigError("invalid value for " + key + ": '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "0" || value == "false" || value == "no" || value == "off") {
        return false;
    }
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
}

int positive_int(const std::string& key, const std::string& value) {
    const int v = parse_number<int>(key, value);
    if (v < 1) {
        throw ConfigError(key + " must be at least 1");
    }
    return v;
}

void validate(const RunConfig& cfg) {
    if (cfg.runs < 1) {
        throw ConfigError("runs must be at least 1");
    }
    if (cfg.workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
    const GpConfig& g = cfg.gp;
    if (g.survivors < 2 || g.survivors >= g.population) {
        throw ConfigError("survivors must be in [2, population)");
    }
    if (g.m_phi < 1 || g.m_psi < 1 || g.mutate_count < 1) {
        throw ConfigError("m_phi, m_psi and mutate_count must be at least 1");
    }
    if (g.max_generations < 0 || g.budget_seconds <= 0.0) {
        throw ConfigError("max_generations must be >= 0 and budget_seconds > 0");
    }
    if (g.admm.rho <= 0.0 || g.admm.lambda < 0.0 || g.admm.tol <= 0.0 || g.admm.max_iters < 1) {
        throw ConfigError("invalid ADMM settings");
    }
}

std::vector<std::string> requested_benchmarks(const RunConfig& cfg) {
    std::vector<std::string> names = cfg.benchmarks;
    if (cfg.suite) {
        try {
            const std::vector<std::string> members = suite_members(*cfg.suite);
            names.insert(names.end(), members.begin(), members.end());
        } catch (const std::out_of_range&) {
            throw ConfigError("unknown suite: " + *cfg.suite);
        }
    }
    for (const std::string& n : names) {
        try {
            find_benchmark(n);
        } catch (const std::out_of_range&) {
            throw ConfigError("unknown benchmark: " + n);
        }
    }
    return names;
}

std::string run_stem(const RunRecord& r) {
    return file_stem(r.benchmark) + "_seed" + std::to_string(r.seed) + (r.sgsr ? "_sgsr" : "");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << text;
}

void write_outputs(const std::filesystem::path& dir, const std::vector<RunOutput>& runs) {
    std::string lines;
    for (const RunOutput& r : runs) {
        lines += record_to_json(r.record).dump() + "\n";
        write_file(dir / "expressions" / (run_stem(r.record) + ".txt"), r.record.expression + "\n");
        write_file(dir / "traces" / (run_stem(r.record) + ".jsonl"), r.trace_jsonl);
    }
    write_file(dir / "runs.jsonl", lines);
}

struct Job {
    std::string benchmark;
    std::uint64_t seed = 0;
    bool sgsr = false;
};

std::vector<RunOutput> execute_jobs(const std::vector<Job>& jobs, const GpConfig& gp, int workers) {
    std::vector<RunOutput> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            results[i] = execute_run(jobs[i].benchmark, jobs[i].seed, gp, jobs[i].sgsr);
        }
    };
    const int n = std::min<int>(workers, static_cast<int>(jobs.size()));
    if (n <= 1) {
        worker();
        return results;
    }
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    return results;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(f, line)) {
        ++number;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": empty key");
        }
        out[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    GpConfig& g = cfg.gp;
    static const std::map<std::string, std::function<void(RunConfig&, const std::string&)>> setters = {
        {"benchmark", [](RunConfig& c, const std::string& v) { c.benchmarks = {v}; }},
        {"suite", [](RunConfig& c, const std::string& v) { c.suite = v; }},
        {"runs", [](RunConfig& c, const std::string& v) { c.runs = parse_number<int>("runs", v); }},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>("seed", v); }},
        {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
        {"workers", [](RunConfig& c, const std::string& v) { c.workers = positive_int("workers", v); }},
        {"ablation", [](RunConfig& c, const std::string& v) { c.ablation = parse_bool("ablation", v); }},
    };
    if (const auto it = setters.find(key); it != setters.end()) {
        it->second(cfg, value);
        return;
    }
    if (key == "population") {
        g.population = positive_int(key, value);
    } else if (key == "survivors") {
        g.survivors = positive_int(key, value);
    } else if (key == "m_phi") {
        g.m_phi = positive_int(key, value);
    } else if (key == "m_psi") {
        g.m_psi = positive_int(key, value);
    } else if (key == "mutate_count") {
        g.mutate_count = positive_int(key, value);
    } else if (key == "rmse_tol0") {
        g.rmse_tol0 = parse_real(key, value);
    } else if (key == "relax_factor") {
        g.relax_factor = parse_real(key, value);
    } else if (key == "relax_period") {
        g.relax_period = parse_number<long>(key, value);
    } else if (key == "max_generations") {
        g.max_generations = parse_number<long>(key, value);
    } else if (key == "budget_seconds") {
        g.budget_seconds = parse_real(key, value);
    } else if (key == "sgsr") {
        g.sgsr = parse_bool(key, value);
    } else if (key == "regen_attempts") {
        g.regen_attempts = parse_number<int>(key, value);
    } else if (key == "beta_guard") {
        g.beta_guard = parse_real(key, value);
    } else if (key == "lambda") {
        g.admm.lambda = parse_real(key, value);
    } else if (key == "rho") {
        g.admm.rho = parse_real(key, value);
    } else if (key == "admm_tol") {
        g.admm.tol = parse_real(key, value);
    } else if (key == "admm_max_iters") {
        g.admm.max_iters = positive_int(key, value);
    } else if (key == "support_floor") {
        g.fit.support_floor = parse_real(key, value);
    } else {
        throw ConfigError("unknown setting: " + key);
    }
}

std::vector<std::uint64_t> run_seeds(const RunConfig& cfg) {
    const std::uint64_t first = cfg.seed.value_or(0);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.runs));
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        seeds[i] = first + i;
    }
    return seeds;
}

nlohmann::json record_to_json(const RunRecord& r) {
    auto real = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) {
            return v;
        }
        return nullptr;
    };
    return {
        {"benchmark", r.benchmark},
        {"seed", r.seed},
        {"sgsr", r.sgsr},
        {"exact", r.exact},
        {"converged", r.converged},
        {"best_fitness", real(r.best_fitness)},
        {"train_rmse", real(r.train_rmse)},
        {"test_rmse", real(r.test_rmse)},
        {"max_rel_error", real(r.max_rel_error)},
        {"generations", r.generations},
        {"runtime_seconds", r.runtime_seconds},
        {"expression", r.expression},
    };
}

std::string suite_csv_header(bool ablation) {
    std::string h = "benchmark,recovery_rate,mean_rmse,median_rmse,mean_runtime_s";
    if (ablation) {
        h += ",sgsr_recovery_rate,sgsr_mean_rmse,sgsr_median_rmse,sgsr_mean_runtime_s";
    }
    return h;
}

std::string suite_csv_row(const SuiteReport& gsr, const SuiteReport* sgsr) {
    std::string row = gsr.benchmark;
    for (const SuiteReport* r : {&gsr, sgsr}) {
        if (!r) {
            continue;
        }
        row += "," + format_real(r->recovery_rate) + "," + format_real(r->mean_rmse) + "," +
               format_real(r->median_rmse) + "," + format_real(r->mean_runtime_seconds);
    }
    return row;
}

RunOutput execute_run(const std::string& benchmark, std::uint64_t seed, const GpConfig& gp, bool sgsr) {
    GpConfig cfg = gp;
    cfg.seed = seed;
    cfg.sgsr = sgsr;
    BenchmarkRun run;
    RunOutput out;
    out.record = evaluate_run(find_benchmark(benchmark), cfg, &run);
    out.trace_jsonl = trace_to_jsonl(run.result.trace);
    return out;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        const std::vector<std::string> names = requested_benchmarks(cfg);
        if (names.size() != 1) {
            throw ConfigError("run needs exactly one benchmark");
        }
        RunOutput r = execute_run(names.front(), cfg.seed.value_or(0), cfg.gp, cfg.gp.sgsr);
        write_outputs(cfg.out, {r});
        out << record_to_json(r.record).dump() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_suite(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        const std::vector<std::string> names = requested_benchmarks(cfg);
        if (names.empty()) {
            throw ConfigError("suite needs --suite or --benchmark");
        }
        const std::vector<std::uint64_t> seeds = run_seeds(cfg);
        std::vector<Job> jobs;
        for (const std::string& n : names) {
            for (std::uint64_t s : seeds) {
                jobs.push_back({n, s, cfg.ablation ? false : cfg.gp.sgsr});
                if (cfg.ablation) {
                    jobs.push_back({n, s, true});
                }
            }
        }
        const std::vector<RunOutput> results = execute_jobs(jobs, cfg.gp, cfg.workers);
        write_outputs(cfg.out, results);

        std::string csv = suite_csv_header(cfg.ablation) + "\n";
        const std::size_t per = seeds.size() * (cfg.ablation ? 2 : 1);
        for (std::size_t b = 0; b < names.size(); ++b) {
            std::vector<RunRecord> main_runs;
            std::vector<RunRecord> ablated;
            for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
                (results[i].record.sgsr && cfg.ablation ? ablated : main_runs).push_back(results[i].record);
            }
            const SuiteReport main_report = aggregate(main_runs);
            if (cfg.ablation) {
                const SuiteReport ablated_report = aggregate(ablated);
                csv += suite_csv_row(main_report, &ablated_report) + "\n";
            } else {
                csv += suite_csv_row(main_report, nullptr) + "\n";
            }
        }
        write_file(cfg.out / "summary.csv", csv);
        out << csv;
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

EquivalenceReport verify_relation(const std::string& text, const std::string& benchmark, std::uint64_t seed) {
    const Benchmark& b = find_benchmark(benchmark);
    const Relation rel = parse_relation(text, b.d);
    const auto nonzero = [](std::span<const double> v) {
        return std::any_of(v.begin(), v.end(), [](double c) { return c != 0.0; });
    };
    const std::span<const double> w(rel.w);
    if (!nonzero(w.first(rel.phis.size())) || !nonzero(w.subspan(rel.phis.size()))) {
        throw std::invalid_argument("degenerate relation: both sides need a nonzero term");
    }
    for (const PsiMatrix& p : rel.psis) {
        if (is_constant(p, rel.table_y)) {
            throw std::invalid_argument("degenerate relation: constant term on the y side");
        }
    }
    RecoveredModel m{rel.table_x, rel.table_y, rel.phis, rel.psis, rel.w, 0.0, 0.0, 0.0};
    set_training_range(m, sample_dataset(b, Role::Train, seed).y);
    return equivalence_check(m, b, seed);
}

int cmd_verify(const std::filesystem::path& file, const std::string& benchmark, std::ostream& out, std::ostream& err) {
    std::ifstream f(file);
    if (!f) {
        err << "error: cannot read " << file.string() << "\n";
        return 2;
    }
    std::stringstream text;
    text << f.rdbuf();
    try {
        find_benchmark(benchmark);
    } catch (const std::out_of_range&) {
        err << "error: unknown benchmark: " << benchmark << "\n";
        return 2;
    }
    try {
        const EquivalenceReport r = verify_relation(trim(text.str()), benchmark);
        const nlohmann::json j = {
            {"benchmark", benchmark},
            {"exact", r.exact},
            {"max_rel_error", std::isfinite(r.max_rel_error) ? nlohmann::json(r.max_rel_error) : nlohmann::json()},
            {"points_checked", r.points_checked},
            {"widened_points", r.widened_points},
            {"failures", r.failures},
        };
        out << j.dump() << "\n";
        return r.exact ? 0 : 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

nlohmann::json registry_json() {
    auto sampler = [](const Sampler& s) {
        return nlohmann::json{{"kind", s.kind == SamplerKind::Uniform ? "U" : "E"},
                              {"lo", s.lo},
                              {"hi", s.hi},
                              {"count", s.count},
                              {"text", s.describe()}};
    };
    auto names = [](const std::vector<Transform>& kinds) {
        std::vector<std::string> out;
        for (Transform t : kinds) {
            out.emplace_back(transform_name(t));
        }
        return out;
    };
    nlohmann::json out = nlohmann::json::array();
    for (const Benchmark& b : benchmark_registry()) {
        out.push_back({{"name", b.name},
                       {"suite", b.suite},
                       {"expression", b.expression},
                       {"d", b.d},
                       {"train", sampler(b.train)},
                       {"test", sampler(b.test)},
                       {"library_x", names(b.x_kinds)},
                       {"library_y", names(b.y_kinds)},
                       {"m_psi", b.m_psi}});
    }
    return out;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized symbolic regression g(y) = f(x)"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;
    std::string benchmark;
    std::string suite;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<long> max_generations;
    std::optional<double> budget;
    std::optional<int> workers;
    std::string out_dir;
    bool sgsr = false;
    bool ablation = false;
    std::vector<std::string> settings;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "key = value settings file");
        sub->add_option("--seed", seed, "Seed (first seed for suites)");
        sub->add_option("--max-generations", max_generations, "Generation cap");
        sub->add_option("--budget-seconds", budget, "Wall-clock budget per run");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_flag("--sgsr", sgsr, "Restrict g(y) to y");
        sub->add_option("--set", settings, "Extra key=value setting")->take_all();
    };

    CLI::App* run = app.add_subcommand("run", "Run one benchmark with one seed");
    run->add_option("--benchmark", benchmark, "Benchmark name")->required();
    common(run);

    CLI::App* suite_cmd = app.add_subcommand("suite", "Run seeds over benchmarks and aggregate");
    suite_cmd->add_option("--suite", suite, "nguyen, jin, neat, livermore, symset or all");
    suite_cmd->add_option("--benchmark", benchmark, "Single benchmark instead of a suite");
    suite_cmd->add_option("--runs", runs, "Runs per benchmark");
    suite_cmd->add_option("--workers", workers, "Parallel runs");
    suite_cmd->add_flag("--ablation", ablation, "Also run s-GSR on the same seeds");
    common(suite_cmd);

    std::string verify_file;
    CLI::App* verify = app.add_subcommand("verify", "Check a relation against a benchmark");
    verify->add_option("file", verify_file, "File holding g(y) = f(x)")->required();
    verify->add_option("--benchmark", benchmark, "Benchmark name")->required();

    CLI::App* registry = app.add_subcommand("registry", "Print the benchmark registry as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? 0 : 2;
    }

    if (registry->parsed()) {
        out << registry_json().dump(2) << "\n";
        return 0;
    }
    if (verify->parsed()) {
        return cmd_verify(verify_file, benchmark, out, err);
    }

    try {
        if (!config_file.empty()) {
            for (const auto& [k, v] : read_config_file(config_file)) {
                apply_setting(cfg, k, v);
            }
        }
        for (const std::string& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("--set expects key=value, got '" + s + "'");
            }
            apply_setting(cfg, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)));
        }
        if (!benchmark.empty()) {
            cfg.benchmarks = {benchmark};
            cfg.suite.reset();
        }
        if (!suite.empty()) {
            cfg.suite = suite;
            cfg.benchmarks.clear();
        }
        if (runs) {
            cfg.runs = *runs;
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (max_generations) {
            cfg.gp.max_generations = *max_generations;
        }
        if (budget) {
            cfg.gp.budget_seconds = *budget;
        }
        if (workers) {
            cfg.workers = *workers;
        }
        if (!out_dir.empty()) {
            cfg.out = out_dir;
        }
        if (sgsr) {
            cfg.gp.sgsr = true;
        }
        if (ablation) {
            cfg.ablation = true;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return run->parsed() ? cmd_run(cfg, out, err) : cmd_suite(cfg, out, err);
}

} // namespace gsr::cli

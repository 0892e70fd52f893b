#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gsr/admm.hpp"
#include "gsr/basis.hpp"
#include "gsr/benchmarks.hpp"
#include "gsr/eval.hpp"
#include "gsr/rng.hpp"

namespace gsr {

struct GpConfig {
    int population = 30;
    int survivors = 10;
    int m_phi = 15;
    int m_psi = 1;
    int mutate_count = 3;
    double rmse_tol0 = 1e-6;
    double relax_factor = 3.1622776601683795; // sqrt(10)
    long relax_period = 1500;
    long max_generations = 20000;
    double budget_seconds = 900.0;
    std::uint64_t seed = 0;
    bool sgsr = false;
    int regen_attempts = 10;
    double beta_guard = 1e-6;
    AdmmConfig admm;
    FitOptions fit;
};

struct Individual {
    std::vector<PhiMatrix> phis;
    std::vector<PsiMatrix> psis;
    double fitness = std::numeric_limits<double>::infinity();
    std::optional<FitResult> fit;
    long birth = 0;
    bool evaluated = false;
};

enum class Stage { Full, Poly, Trig };

std::string stage_name(Stage s);

// Allowed codes for one generation, indices into the benchmark tables.
struct Sublibraries {
    std::vector<int> x_codes;
    std::vector<int> y_codes;
    Stage x_stage = Stage::Full;
    Stage y_stage = Stage::Full;
};

// Poly: One, Identity and the power transforms present. Trig adds Cos and Sin.
std::vector<int> poly_codes(const MappingTable& table);
std::vector<int> trig_codes(const MappingTable& table);

// x side: a 70-generation cycle (15 full, 25 poly, 30 trig) up to generation
// 1500, then a 1500-generation cycle of three 500-generation stages. y side: a
// 20-generation cycle of 10 poly then 10 full. Generation 0 uses the full
// libraries.
Sublibraries schedule_sublibrary(long k, const MappingTable& table_x, const MappingTable& table_y);

double threshold_at(long k, const GpConfig& cfg);

struct SearchContext {
    MappingTable table_x;
    MappingTable table_y;
    Dataset data;
    GpConfig cfg;
};

PhiMatrix one_phi(const MappingTable& table);
PsiMatrix identity_psi(const MappingTable& table);

Individual random_individual(const SearchContext& ctx, const Sublibraries& sub, Rng& rng);

// Regenerates non-finite columns in place, fits the relation and caches the
// result. Degenerate relations get +inf.
double fitness(Individual& ind, const SearchContext& ctx, const Sublibraries& sub, Rng& rng);

Individual crossover(const Individual& a, const Individual& b, const SearchContext& ctx, Rng& rng);
Individual mutate(const Individual& parent, const SearchContext& ctx, const Sublibraries& sub, Rng& rng);

// Orders by fitness, then birth generation, then position. Stable.
void rank_population(std::vector<Individual>& pop);

enum class Offspring { Crossover, Mutation, Random };

// u uniform in {1, 2, 3, 4}: 1 crossover, 2 mutation, 3 or 4 a fresh individual.
Offspring draw_offspring(Rng& rng);

// Keeps the best `survivors` and refills the population with evaluated offspring.
void step_generation(std::vector<Individual>& pop, const SearchContext& ctx, long k, Rng& rng);

struct TraceRecord {
    long k = 0;
    double best = 0.0;
    double threshold = 0.0;
    Stage x_stage = Stage::Full;
    Stage y_stage = Stage::Full;
};

struct RunResult {
    Individual best;
    std::vector<TraceRecord> trace;
    bool converged = false;
    long generations = 0;
    double runtime_seconds = 0.0;
    std::string stop_reason;
};

std::uint64_t search_seed(std::string_view name, std::uint64_t seed);

RunResult run_search(const SearchContext& ctx, std::uint64_t rng_seed);

struct BenchmarkRun {
    SearchContext ctx;
    RunResult result;
};

// Samples the training set, applies the benchmark's psi count (one Identity
// basis in s-GSR mode) and runs the search.
BenchmarkRun run_benchmark(const Benchmark& b, GpConfig cfg);

std::string trace_to_jsonl(const std::vector<TraceRecord>& trace);

} // namespace gsr

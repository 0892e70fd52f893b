#include "gsr/gp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace gsr {

std::string stage_name(Stage s) {
    switch (s) {
    case Stage::Full: return "full";
    case Stage::Poly: return "poly";
    case Stage::Trig: return "trig";
    }
    return "?";
}

std::vector<int> poly_codes(const MappingTable& table) {
    static const std::vector<Transform> kinds{Transform::One,    Transform::Identity, Transform::Reciprocal,
                                              Transform::Square, Transform::Cube,     Transform::Sqrt};
    return table.codes_of(kinds);
}

std::vector<int> trig_codes(const MappingTable& table) {
    static const std::vector<Transform> kinds{Transform::One,  Transform::Identity, Transform::Reciprocal,
                                              Transform::Square, Transform::Cube,   Transform::Sqrt,
                                              Transform::Cos,  Transform::Sin};
    return table.codes_of(kinds);
}

Sublibraries schedule_sublibrary(long k, const MappingTable& table_x, const MappingTable& table_y) {
    Sublibraries sub;
    if (k >= 1) {
        if (k <= 1500) {
            const long pos = (k - 1) % 70;
            sub.x_stage = pos < 15 ? Stage::Full : (pos < 40 ? Stage::Poly : Stage::Trig);
        } else {
            const long pos = (k - 1501) % 1500;
            sub.x_stage = pos < 500 ? Stage::Full : (pos < 1000 ? Stage::Poly : Stage::Trig);
        }
        sub.y_stage = (k - 1) % 20 < 10 ? Stage::Poly : Stage::Full;
    }
    switch (sub.x_stage) {
    case Stage::Full: sub.x_codes = table_x.all_codes(); break;
    case Stage::Poly: sub.x_codes = poly_codes(table_x); break;
    case Stage::Trig: sub.x_codes = trig_codes(table_x); break;
    }
    sub.y_codes = sub.y_stage == Stage::Poly ? poly_codes(table_y) : table_y.all_codes();
    return sub;
}

double threshold_at(long k, const GpConfig& cfg) {
    return cfg.rmse_tol0 * std::pow(cfg.relax_factor, static_cast<double>(k / cfg.relax_period));
}

PhiMatrix one_phi(const MappingTable& table) {
    PhiMatrix m(1, table.nv_min());
    m.at(0, 0) = 0;
    return m;
}

PsiMatrix identity_psi(const MappingTable&) { return PsiMatrix({1}); }

namespace {

bool psi_others_nonconstant(const std::vector<PsiMatrix>& psis, std::size_t skip, const MappingTable& table) {
    for (std::size_t i = 0; i < psis.size(); ++i) {
        if (i != skip && !is_constant(psis[i], table)) {
            return true;
        }
    }
    return false;
}

PsiMatrix draw_psi(const std::vector<PsiMatrix>& psis, std::size_t slot, const SearchContext& ctx,
                   const Sublibraries& sub, Rng& rng) {
    const bool allow_one = psi_others_nonconstant(psis, slot, ctx.table_y);
    return random_psi(ctx.table_y, sub.y_codes, rng, allow_one);
}

bool column_finite(const std::vector<double>& col) {
    return std::all_of(col.begin(), col.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

Individual random_individual(const SearchContext& ctx, const Sublibraries& sub, Rng& rng) {
    Individual ind;
    ind.phis.reserve(static_cast<std::size_t>(ctx.cfg.m_phi));
    for (int i = 0; i < ctx.cfg.m_phi; ++i) {
        ind.phis.push_back(random_phi(ctx.table_x, sub.x_codes, rng));
    }
    if (ctx.cfg.sgsr) {
        ind.psis.push_back(identity_psi(ctx.table_y));
        return ind;
    }
    ind.psis.resize(static_cast<std::size_t>(ctx.cfg.m_psi));
    for (std::size_t i = 0; i < ind.psis.size(); ++i) {
        ind.psis[i] = draw_psi(ind.psis, i, ctx, sub, rng);
    }
    return ind;
}

double fitness(Individual& ind, const SearchContext& ctx, const Sublibraries& sub, Rng& rng) {
    if (ind.evaluated) {
        return ind.fitness;
    }
    const std::size_t n = ctx.data.size();
    const std::size_t mp = ind.phis.size();
    const std::size_t mq = ind.psis.size();
    Matrix a(n, mp + mq);

    for (std::size_t j = 0; j < mp; ++j) {
        std::vector<double> col = phi_column(ctx.data, ind.phis[j], ctx.table_x);
        for (int attempt = 0; attempt < ctx.cfg.regen_attempts && !column_finite(col); ++attempt) {
            ind.phis[j] = random_phi(ctx.table_x, sub.x_codes, rng);
            col = phi_column(ctx.data, ind.phis[j], ctx.table_x);
        }
        if (!column_finite(col)) {
            ind.phis[j] = one_phi(ctx.table_x);
            col.assign(n, 1.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            a(i, j) = col[i];
        }
    }
    for (std::size_t j = 0; j < mq; ++j) {
        std::vector<double> col = psi_column(ctx.data, ind.psis[j], ctx.table_y);
        for (int attempt = 0; attempt < ctx.cfg.regen_attempts && !column_finite(col); ++attempt) {
            ind.psis[j] = draw_psi(ind.psis, j, ctx, sub, rng);
            col = psi_column(ctx.data, ind.psis[j], ctx.table_y);
        }
        if (!column_finite(col)) {
            ind.psis[j] = identity_psi(ctx.table_y);
            col = ctx.data.y;
        }
        for (std::size_t i = 0; i < n; ++i) {
            a(i, mp + j) = -col[i];
        }
    }

    ind.fit = fit_relation(a, mp, ctx.cfg.admm, ctx.cfg.fit);
    const bool constant_psi = std::all_of(ind.psis.begin(), ind.psis.end(),
                                          [&](const PsiMatrix& p) { return is_constant(p, ctx.table_y); });
    if (constant_psi || ind.fit->max_abs_beta() < ctx.cfg.beta_guard || !std::isfinite(ind.fit->residual_rmse)) {
        ind.fitness = std::numeric_limits<double>::infinity();
    } else {
        ind.fitness = ind.fit->residual_rmse;
    }
    ind.evaluated = true;
    return ind.fitness;
}

Individual crossover(const Individual& a, const Individual& b, const SearchContext& ctx, Rng& rng) {
    Individual child;
    const std::size_t mp = a.phis.size();
    const std::size_t pool = a.phis.size() + b.phis.size();
    child.phis.reserve(mp);
    for (std::size_t i = 0; i < mp; ++i) {
        const std::size_t pick = rng.index(pool);
        child.phis.push_back(pick < a.phis.size() ? a.phis[pick] : b.phis[pick - a.phis.size()]);
    }
    if (ctx.cfg.sgsr) {
        child.psis.push_back(identity_psi(ctx.table_y));
        return child;
    }
    const std::size_t mq = a.psis.size();
    const std::size_t qpool = a.psis.size() + b.psis.size();
    for (std::size_t i = 0; i < mq; ++i) {
        const std::size_t pick = rng.index(qpool);
        child.psis.push_back(pick < a.psis.size() ? a.psis[pick] : b.psis[pick - a.psis.size()]);
    }
    if (std::all_of(child.psis.begin(), child.psis.end(),
                    [&](const PsiMatrix& p) { return is_constant(p, ctx.table_y); })) {
        child.psis[0] = a.psis[0];
    }
    return child;
}

Individual mutate(const Individual& parent, const SearchContext& ctx, const Sublibraries& sub, Rng& rng) {
    Individual child;
    child.phis = parent.phis;
    child.psis = parent.psis;
    const std::size_t mp = child.phis.size();
    const std::size_t slots = mp + (ctx.cfg.sgsr ? 0 : child.psis.size());
    std::vector<std::size_t> order(slots);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(ctx.cfg.mutate_count), slots);
    // Partial Fisher-Yates: the first `count` entries are distinct uniform slots.
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(order[i], order[i + rng.index(slots - i)]);
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t slot = order[i];
        if (slot < mp) {
            child.phis[slot] = random_phi(ctx.table_x, sub.x_codes, rng);
        } else {
            child.psis[slot - mp] = draw_psi(child.psis, slot - mp, ctx, sub, rng);
        }
    }
    return child;
}

void rank_population(std::vector<Individual>& pop) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (pop[i].fitness != pop[j].fitness) {
            return pop[i].fitness < pop[j].fitness;
        }
        if (pop[i].birth != pop[j].birth) {
            return pop[i].birth < pop[j].birth;
        }
        return i < j;
    });
    std::vector<Individual> sorted;
    sorted.reserve(pop.size());
    for (std::size_t i : order) {
        sorted.push_back(std::move(pop[i]));
    }
    pop = std::move(sorted);
}

Offspring draw_offspring(Rng& rng) {
    switch (rng.integer(1, 4)) {
    case 1: return Offspring::Crossover;
    case 2: return Offspring::Mutation;
    default: return Offspring::Random;
    }
}

void step_generation(std::vector<Individual>& pop, const SearchContext& ctx, long k, Rng& rng) {
    const std::size_t keep = static_cast<std::size_t>(ctx.cfg.survivors);
    const std::size_t total = static_cast<std::size_t>(ctx.cfg.population);
    if (keep < 2 || keep > total || pop.size() < keep) {
        throw std::invalid_argument("step_generation: need at least two survivors");
    }
    rank_population(pop);
    pop.resize(keep);
    const Sublibraries sub = schedule_sublibrary(k, ctx.table_x, ctx.table_y);
    while (pop.size() < total) {
        const Offspring kind = draw_offspring(rng);
        Individual child;
        if (kind == Offspring::Crossover) {
            const std::size_t i = rng.index(keep);
            std::size_t j = rng.index(keep - 1);
            if (j >= i) {
                ++j;
            }
            child = crossover(pop[i], pop[j], ctx, rng);
        } else if (kind == Offspring::Mutation) {
            child = mutate(pop[rng.index(keep)], ctx, sub, rng);
        } else {
            child = random_individual(ctx, sub, rng);
        }
        child.birth = k;
        fitness(child, ctx, sub, rng);
        pop.push_back(std::move(child));
    }
    rank_population(pop);
}

std::uint64_t search_seed(std::string_view name, std::uint64_t seed) {
    return mix_seed(mix_seed(seed, fnv1a(name)), 0x6770u);
}

RunResult run_search(const SearchContext& ctx, std::uint64_t rng_seed) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    Rng rng(rng_seed);
    RunResult result;
    const Sublibraries initial = schedule_sublibrary(0, ctx.table_x, ctx.table_y);
    std::vector<Individual> pop;
    pop.reserve(static_cast<std::size_t>(ctx.cfg.population));
    for (int i = 0; i < ctx.cfg.population; ++i) {
        Individual ind = random_individual(ctx, initial, rng);
        fitness(ind, ctx, initial, rng);
        pop.push_back(std::move(ind));
    }
    rank_population(pop);

    long k = 0;
    while (true) {
        const double threshold = threshold_at(k, ctx.cfg);
        const Sublibraries sub = schedule_sublibrary(k, ctx.table_x, ctx.table_y);
        result.trace.push_back({k, pop.front().fitness, threshold, sub.x_stage, sub.y_stage});
        if (pop.front().fitness < threshold) {
            result.converged = true;
            result.stop_reason = "threshold";
            break;
        }
        if (k + 1 >= ctx.cfg.max_generations) {
            result.stop_reason = "max_generations";
            break;
        }
        if (elapsed() >= ctx.cfg.budget_seconds) {
            result.stop_reason = "budget";
            break;
        }
        ++k;
        step_generation(pop, ctx, k, rng);
    }
    result.generations = k + 1;
    result.best = pop.front();
    result.runtime_seconds = elapsed();
    return result;
}

BenchmarkRun run_benchmark(const Benchmark& b, GpConfig cfg) {
    if (cfg.sgsr) {
        cfg.m_psi = 1;
    } else if (b.m_psi > cfg.m_psi) {
        cfg.m_psi = b.m_psi;
    }
    BenchmarkRun run{SearchContext{b.table_x(), b.table_y(), sample_dataset(b, Role::Train, cfg.seed), cfg}, {}};
    run.result = run_search(run.ctx, search_seed(b.name, cfg.seed));
    return run;
}

std::string trace_to_jsonl(const std::vector<TraceRecord>& trace) {
    std::string out;
    char buf[256];
    for (const TraceRecord& r : trace) {
        char best[40] = "null";
        if (std::isfinite(r.best)) {
            std::snprintf(best, sizeof best, "%.17g", r.best);
        }
        std::snprintf(buf, sizeof buf, "{\"k\":%ld,\"best\":%s,\"threshold\":%.17g,\"stage\":\"%s\",\"y_stage\":\"%s\"}\n",
                      r.k, best, r.threshold, stage_name(r.x_stage).c_str(), stage_name(r.y_stage).c_str());
        out += buf;
    }
    return out;
}

} // namespace gsr

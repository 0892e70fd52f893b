#include "gsr/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "gsr/expression.hpp"
#include "gsr/rng.hpp"

namespace gsr {

double RecoveredModel::f(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < phis.size(); ++j) {
        if (w[j] != 0.0) {
            s += w[j] * eval_phi(phis[j], table_x, x);
        }
    }
    return s;
}

double RecoveredModel::g(double y) const {
    double s = 0.0;
    for (std::size_t j = 0; j < psis.size(); ++j) {
        const double b = w[phis.size() + j];
        if (b != 0.0) {
            s += b * eval_psi(psis[j], table_y, y);
        }
    }
    return s;
}

void set_training_range(RecoveredModel& m, std::span<const double> y) {
    if (y.empty()) {
        throw std::invalid_argument("set_training_range: no targets");
    }
    std::vector<double> sorted(y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    m.y_min = sorted.front();
    m.y_max = sorted.back();
    const std::size_t n = sorted.size();
    m.y_median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

RecoveredModel model_from_fit(const SearchContext& ctx, const Individual& best) {
    if (!best.fit) {
        throw std::invalid_argument("model_from_fit: individual has not been evaluated");
    }
    RecoveredModel m{ctx.table_x, ctx.table_y, best.phis, best.psis, best.fit->w, 0.0, 0.0, 0.0};
    set_training_range(m, ctx.data.y);
    const DesignBundle design = build_design(ctx.data, best.phis, best.psis, ctx.table_x, ctx.table_y);
    if (design.all_finite()) {
        m.w = refit_reported(design.a, *best.fit).w;
    }
    return m;
}

namespace {

std::vector<double> closed_form_inverse(Transform t, double v) {
    switch (t) {
    case Transform::Identity: return {v};
    case Transform::Ln: return {std::exp(v)};
    case Transform::Exp: return v > 0.0 ? std::vector<double>{std::log(v)} : std::vector<double>{};
    case Transform::Reciprocal: return v != 0.0 ? std::vector<double>{1.0 / v} : std::vector<double>{};
    case Transform::Square:
        return v >= 0.0 ? std::vector<double>{std::sqrt(v), -std::sqrt(v)} : std::vector<double>{};
    case Transform::Cube: return {std::cbrt(v)};
    case Transform::Sqrt: return v >= 0.0 ? std::vector<double>{v * v} : std::vector<double>{};
    case Transform::NegExp: return v > 0.0 ? std::vector<double>{-std::log(v)} : std::vector<double>{};
    case Transform::Neg: return {-v};
    default: return {};
    }
}

bool invertible(Transform t) {
    switch (t) {
    case Transform::Identity:
    case Transform::Ln:
    case Transform::Exp:
    case Transform::Reciprocal:
    case Transform::Square:
    case Transform::Cube:
    case Transform::Sqrt:
    case Transform::NegExp:
    case Transform::Neg: return true;
    default: return false;
    }
}

std::optional<double> choose_root(const std::vector<double>& roots, const RecoveredModel& m) {
    std::optional<double> best;
    double best_key = std::numeric_limits<double>::infinity();
    bool best_inside = false;
    for (double r : roots) {
        if (!std::isfinite(r)) {
            continue;
        }
        const bool inside = r >= m.y_min && r <= m.y_max;
        const double key = inside ? std::abs(r - m.y_median) : std::max(m.y_min - r, r - m.y_max);
        if ((inside && !best_inside) || (inside == best_inside && key < best_key)) {
            best = r;
            best_key = key;
            best_inside = inside;
        }
    }
    return best;
}

} // namespace

double predict_y(const RecoveredModel& m, std::span<const double> x) {
    const double v = m.f(x);
    if (!std::isfinite(v)) {
        throw PredictionFailure("f(x) is not finite", std::nan(""), std::numeric_limits<double>::infinity());
    }

    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < m.psis.size(); ++j) {
        if (m.w[m.phis.size() + j] != 0.0) {
            active.push_back(j);
        }
    }
    if (active.size() == 1) {
        const std::size_t j = active[0];
        std::vector<Transform> rows;
        for (int code : m.psis[j].codes()) {
            if (m.table_y.at(code) != Transform::One) {
                rows.push_back(m.table_y.at(code));
            }
        }
        if (rows.size() == 1 && invertible(rows[0])) {
            const double target = v / m.w[m.phis.size() + j];
            if (auto y = choose_root(closed_form_inverse(rows[0], target), m)) {
                return *y;
            }
        }
    }

    double range = m.y_max - m.y_min;
    if (!(range > 0.0)) {
        range = std::max(1.0, std::abs(m.y_max));
    }
    const double lo = m.y_min - 0.5 * range;
    const double hi = m.y_max + 0.5 * range;
    constexpr int kGrid = 1000;
    auto h = [&](double y) { return m.g(y) - v; };

    std::vector<double> ys(kGrid);
    std::vector<double> hs(kGrid);
    double best_y = std::nan("");
    double best_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        ys[i] = lo + (hi - lo) * i / (kGrid - 1);
        hs[i] = h(ys[i]);
        if (std::isfinite(hs[i]) && std::abs(hs[i]) < best_abs) {
            best_abs = std::abs(hs[i]);
            best_y = ys[i];
        }
    }

    const double accept = 1e-6 * std::max(1.0, std::abs(v));
    std::vector<double> roots;
    for (int i = 0; i < kGrid; ++i) {
        if (hs[i] == 0.0) {
            roots.push_back(ys[i]);
            continue;
        }
        if (i + 1 >= kGrid || !std::isfinite(hs[i]) || !std::isfinite(hs[i + 1]) || hs[i + 1] == 0.0 ||
            (hs[i] > 0.0) == (hs[i + 1] > 0.0)) {
            continue;
        }
        double a = ys[i];
        double b = ys[i + 1];
        double ha = hs[i];
        for (int it = 0; it < 200 && b - a > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            const double hm = h(mid);
            if (!std::isfinite(hm)) {
                break;
            }
            if ((hm > 0.0) == (ha > 0.0)) {
                a = mid;
                ha = hm;
            } else {
                b = mid;
            }
        }
        double r = 0.5 * (a + b);
        double hr = h(r);
        for (int it = 0; it < 5 && std::isfinite(hr) && hr != 0.0; ++it) {
            const double step = 1e-7 * std::max(1.0, std::abs(r));
            const double slope = (h(r + step) - h(r - step)) / (2.0 * step);
            if (!std::isfinite(slope) || slope == 0.0) {
                break;
            }
            const double next = r - hr / slope;
            const double hn = h(next);
            if (!(std::abs(hn) < std::abs(hr)) || next < ys[i] || next > ys[i + 1]) {
                break;
            }
            r = next;
            hr = hn;
        }
        if (std::isfinite(hr) && std::abs(hr) <= accept) {
            roots.push_back(r);
        }
    }
    if (auto y = choose_root(roots, m)) {
        return *y;
    }
    throw PredictionFailure("no root of g(y) = f(x) in the search range", best_y, best_abs);
}

EquivalenceReport equivalence_check(const RecoveredModel& m, const Benchmark& b, std::uint64_t seed) {
    EquivalenceReport report;
    Rng rng(mix_seed(mix_seed(seed, fnv1a(b.name)), 0x6571u));
    const double lo = b.train.lo;
    const double hi = b.train.hi;
    const double centre = 0.5 * (lo + hi);
    const double half = 0.75 * (hi - lo);
    std::vector<double> x(static_cast<std::size_t>(b.d));

    auto check = [&](double a, double z, bool widened) {
        for (int i = 0; i < 1000; ++i) {
            for (double& v : x) {
                v = rng.uniform(a, z);
            }
            const double truth = b.truth(x);
            if (!std::isfinite(truth)) {
                continue;
            }
            if (widened && !std::isfinite(m.f(x))) {
                continue;
            }
            ++(widened ? report.widened_points : report.points_checked);
            try {
                const double y = predict_y(m, x);
                const double err = std::abs(y - truth) / std::max(1.0, std::abs(truth));
                report.max_rel_error = std::max(report.max_rel_error, std::isfinite(err) ? err : std::numeric_limits<double>::infinity());
            } catch (const PredictionFailure&) {
                ++report.failures;
            }
        }
    };
    check(lo, hi, false);
    // The widened domain keeps the sign of a one-signed training domain.
    const double wlo = lo >= 0.0 ? std::max(0.0, centre - half) : centre - half;
    const double whi = hi <= 0.0 ? std::min(0.0, centre + half) : centre + half;
    check(wlo, whi, true);
    report.exact = report.points_checked > 0 && report.failures == 0 && report.max_rel_error < 1e-6;
    return report;
}

double prediction_rmse(const RecoveredModel& m, const Dataset& data, int* failures) {
    if (data.size() == 0) {
        throw std::invalid_argument("prediction_rmse: empty dataset");
    }
    int failed = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double err = kFailurePenalty;
        try {
            err = predict_y(m, data.x.row(i)) - data.y[i];
            if (!std::isfinite(err)) {
                err = kFailurePenalty;
                ++failed;
            }
        } catch (const PredictionFailure&) {
            ++failed;
        }
        sum += err * err;
    }
    if (failures) {
        *failures = failed;
    }
    return std::sqrt(sum / static_cast<double>(data.size()));
}

SuiteReport aggregate(std::span<const RunRecord> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate: no runs");
    }
    SuiteReport r;
    r.benchmark = runs.front().benchmark;
    r.runs = runs.size();
    std::vector<double> rmse;
    double exact = 0.0;
    double runtime = 0.0;
    for (const RunRecord& run : runs) {
        exact += run.exact ? 1.0 : 0.0;
        runtime += run.runtime_seconds;
        rmse.push_back(run.test_rmse);
    }
    const double n = static_cast<double>(runs.size());
    r.recovery_rate = 100.0 * exact / n;
    r.mean_rmse = std::accumulate(rmse.begin(), rmse.end(), 0.0) / n;
    std::sort(rmse.begin(), rmse.end());
    const std::size_t k = rmse.size();
    r.median_rmse = k % 2 ? rmse[k / 2] : 0.5 * (rmse[k / 2 - 1] + rmse[k / 2]);
    r.mean_runtime_seconds = runtime / n;
    return r;
}

RunRecord evaluate_run(const Benchmark& b, const GpConfig& cfg, BenchmarkRun* out) {
    BenchmarkRun run = run_benchmark(b, cfg);
    RunRecord rec;
    rec.benchmark = b.name;
    rec.seed = cfg.seed;
    rec.sgsr = cfg.sgsr;
    rec.converged = run.result.converged;
    rec.best_fitness = run.result.best.fitness;
    rec.generations = run.result.generations;
    rec.runtime_seconds = run.result.runtime_seconds;
    const Individual& best = run.result.best;
    if (best.fit) {
        const RecoveredModel model = model_from_fit(run.ctx, best);
        rec.expression = to_infix_string(best.phis, best.psis, model.w, run.ctx.table_x, run.ctx.table_y);
        rec.train_rmse = prediction_rmse(model, run.ctx.data);
        rec.test_rmse = prediction_rmse(model, sample_dataset(b, Role::Test, cfg.seed));
        if (std::isfinite(best.fitness)) {
            const EquivalenceReport eq = equivalence_check(model, b, cfg.seed);
            rec.exact = eq.exact;
            rec.max_rel_error = eq.max_rel_error;
        } else {
            rec.max_rel_error = std::numeric_limits<double>::infinity();
        }
    } else {
        rec.train_rmse = rec.test_rmse = kFailurePenalty;
        rec.max_rel_error = std::numeric_limits<double>::infinity();
    }
    if (out) {
        *out = std::move(run);
    }
    return rec;
}

} // namespace gsr

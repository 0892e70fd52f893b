#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsr/basis.hpp"
#include "gsr/benchmarks.hpp"
#include "gsr/eval.hpp"
#include "gsr/gp.hpp"

namespace gsr {

// A fitted relation g(y) = f(x) together with the training range of y.
struct RecoveredModel {
    MappingTable table_x;
    MappingTable table_y;
    std::vector<PhiMatrix> phis;
    std::vector<PsiMatrix> psis;
    std::vector<double> w;
    double y_min = 0.0;
    double y_max = 0.0;
    double y_median = 0.0;

    double f(std::span<const double> x) const;
    double g(double y) const;
};

class PredictionFailure : public std::runtime_error {
public:
    PredictionFailure(const std::string& what, double best_y, double best_residual)
        : std::runtime_error(what), best_y_(best_y), best_residual_(best_residual) {}

    double best_y() const noexcept { return best_y_; }
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_y_;
    double best_residual_;
};

// Training range and median of y.
void set_training_range(RecoveredModel& m, std::span<const double> y);

RecoveredModel model_from_fit(const SearchContext& ctx, const Individual& best);

// Solves g(y) = f(x*). A single invertible psi transform is inverted in closed
// form. Otherwise g - f is scanned on 1000 points over the training range
// widened by half its width on both sides, brackets are bisected to 1e-12 and
// polished by Newton steps. Among several roots the one inside the training
// range nearest the median wins.
double predict_y(const RecoveredModel& m, std::span<const double> x);

struct EquivalenceReport {
    bool exact = false;
    double max_rel_error = 0.0;
    int points_checked = 0;
    int widened_points = 0;
    int failures = 0;
};

// Exact when max |y_hat - y| / max(1, |y|) < 1e-6 over 1000 fresh points of the
// training domain and every point of a domain widened by 50% about its centre
// where both the ground truth and f are finite, with no prediction failures.
// The widened domain does not cross zero when the training domain is one-signed.
EquivalenceReport equivalence_check(const RecoveredModel& m, const Benchmark& b, std::uint64_t seed = 0);

inline constexpr double kFailurePenalty = 1e6;

// Failed predictions contribute an error of kFailurePenalty.
double prediction_rmse(const RecoveredModel& m, const Dataset& data, int* failures = nullptr);

struct RunRecord {
    std::string benchmark;
    std::uint64_t seed = 0;
    bool sgsr = false;
    bool exact = false;
    bool converged = false;
    double best_fitness = 0.0;
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    double max_rel_error = 0.0;
    long generations = 0;
    double runtime_seconds = 0.0;
    std::string expression;
};

struct SuiteReport {
    std::string benchmark;
    std::size_t runs = 0;
    double recovery_rate = 0.0; // percent
    double mean_rmse = 0.0;
    double median_rmse = 0.0;
    double mean_runtime_seconds = 0.0;
};

// Throws std::invalid_argument on an empty list.
SuiteReport aggregate(std::span<const RunRecord> runs);

// Runs the search on a benchmark and scores the best relation.
RunRecord evaluate_run(const Benchmark& b, const GpConfig& cfg, BenchmarkRun* out = nullptr);

} // namespace gsr

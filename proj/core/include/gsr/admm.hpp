#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gsr/dense.hpp"

namespace gsr {

struct AdmmConfig {
    double lambda = 0.4;
    double rho = 0.1;
    double tol = 1e-5;
    int max_iters = 1000;
};

enum class AdmmStatus { Converged, MaxIterations, Degenerate };

struct AdmmState {
    std::vector<double> w;
    std::vector<double> z;
    std::vector<double> u;
};

struct AdmmResult {
    AdmmState state;
    int iters = 0;
    AdmmStatus status = AdmmStatus::MaxIterations;
};

double soft_threshold(double a, double kappa) noexcept;
std::vector<double> soft_threshold(std::span<const double> a, double kappa);

// w-step: w = normalize((2 A^T A + rho I)^{-1} rho (z - u)). The factorisation
// is done once at construction. Returns nullopt when the unnormalised step is
// zero.
class WUpdate {
public:
    WUpdate(const Matrix& a, double rho);

    bool factored() const noexcept { return factored_; }
    std::optional<std::vector<double>> operator()(std::span<const double> z, std::span<const double> u) const;

private:
    Matrix step_; // rho (2 A^T A + rho I)^{-1}
    bool factored_ = false;
};

std::optional<std::vector<double>> w_update(const Matrix& a, std::span<const double> z, std::span<const double> u,
                                            double rho);

// w0 = normalise(1/2, ..., 1/2), z0 = 1, u0 = 0.
AdmmState default_admm_start(std::size_t m);

AdmmResult solve_admm(const Matrix& a, const AdmmConfig& cfg);
AdmmResult solve_admm(const Matrix& a, const AdmmConfig& cfg, AdmmState start);

double residual_rmse(const Matrix& a, std::span<const double> w);

// Flips w so that its largest-magnitude entry among indices >= m_phi is
// positive. If that block is all zero the largest entry overall is used.
void canonical_sign(std::span<double> w, std::size_t m_phi) noexcept;

struct Refit {
    std::vector<double> w;
    double residual_rmse = 0.0;
};

// Unit-norm minimiser of ||A_S w|| on the support S, embedded in full length.
// Directions that involve only phi columns or only psi columns and lie in
// their null space are excluded when both blocks are present.
Refit refit_support(const Matrix& a, std::size_t m_phi, std::span<const std::size_t> support);

struct FitResult {
    std::vector<double> w;
    std::size_t m_phi = 0;
    std::vector<std::size_t> support; // |w_i| > FitOptions::support_floor
    double residual_rmse = 0.0;
    double admm_residual_rmse = 0.0;
    bool converged = false;
    int iters = 0;
    bool refit_applied = false;
    // The iterate lay entirely in the phi-only or psi-only null space.
    bool degenerate = false;

    std::span<const double> alpha() const noexcept { return std::span<const double>(w).first(m_phi); }
    std::span<const double> beta() const noexcept { return std::span<const double>(w).subspan(m_phi); }
    double max_abs_beta() const noexcept;
};

// Removes the components of w that lie in the null space of the phi block
// alone or of the psi block alone, then renormalises. nullopt when nothing is
// left.
std::optional<std::vector<double>> project_admissible(const Matrix& a, std::size_t m_phi, std::span<const double> w);

struct FitOptions {
    // |w_i| above this counts as part of the reported support.
    double support_floor = 1e-8;
};

// Runs ADMM and projects the iterate onto the admissible space. When z
// selects a support, the refit on it replaces w if its residual is lower.
FitResult fit_relation(const Matrix& a, std::size_t m_phi, const AdmmConfig& cfg, const FitOptions& opts = {});

// Refit on the reported support. Keeps the fit's w when the refit is not better.
Refit refit_reported(const Matrix& a, const FitResult& fit);

} // namespace gsr

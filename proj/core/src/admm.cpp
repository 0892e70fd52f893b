#include "gsr/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gsr {

double soft_threshold(double a, double kappa) noexcept {
    if (a > kappa) {
        return a - kappa;
    }
    if (a < -kappa) {
        return a + kappa;
    }
    return 0.0;
}

std::vector<double> soft_threshold(std::span<const double> a, double kappa) {
    std::vector<double> out(a.size());
    std::transform(a.begin(), a.end(), out.begin(), [kappa](double v) { return soft_threshold(v, kappa); });
    return out;
}

WUpdate::WUpdate(const Matrix& a, double rho) {
    if (!(rho > 0.0)) {
        throw std::invalid_argument("WUpdate: rho must be positive");
    }
    Matrix h = gram(a);
    const std::size_t m = h.rows();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            h(i, j) *= 2.0;
        }
        h(i, i) += rho;
    }
    factored_ = cholesky(h);
    if (factored_) {
        step_ = cholesky_inverse(h);
        for (double& v : step_.data()) {
            v *= rho;
        }
    }
}

std::optional<std::vector<double>> WUpdate::operator()(std::span<const double> z, std::span<const double> u) const {
    if (!factored_) {
        return std::nullopt;
    }
    const std::size_t m = step_.rows();
    std::vector<double> diff(m);
    for (std::size_t i = 0; i < m; ++i) {
        diff[i] = z[i] - u[i];
    }
    std::vector<double> w = multiply(step_, diff);
    const double n = norm2(w);
    if (!(n > 0.0) || !std::isfinite(n)) {
        return std::nullopt;
    }
    for (double& v : w) {
        v /= n;
    }
    return w;
}

std::optional<std::vector<double>> w_update(const Matrix& a, std::span<const double> z, std::span<const double> u,
                                            double rho) {
    return WUpdate(a, rho)(z, u);
}

AdmmState default_admm_start(std::size_t m) {
    AdmmState s;
    s.w.assign(m, 0.5);
    const double n = norm2(s.w);
    for (double& v : s.w) {
        v /= n;
    }
    s.z.assign(m, 1.0);
    s.u.assign(m, 0.0);
    return s;
}

AdmmResult solve_admm(const Matrix& a, const AdmmConfig& cfg) { return solve_admm(a, cfg, default_admm_start(a.cols())); }

AdmmResult solve_admm(const Matrix& a, const AdmmConfig& cfg, AdmmState start) {
    const std::size_t m = a.cols();
    if (start.w.size() != m || start.z.size() != m || start.u.size() != m) {
        throw std::invalid_argument("solve_admm: start state has the wrong length");
    }
    AdmmResult result;
    result.state = std::move(start);
    const WUpdate update(a, cfg.rho);
    if (!update.factored()) {
        result.status = AdmmStatus::Degenerate;
        return result;
    }
    const double kappa = cfg.lambda / cfg.rho;
    auto& [w, z, u] = result.state;
    bool degenerate = false;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        result.iters = k;
        std::optional<std::vector<double>> next = update(z, u);
        double change = 0.0;
        if (next) {
            for (std::size_t i = 0; i < m; ++i) {
                const double d = (*next)[i] - w[i];
                change += d * d;
            }
            change = std::sqrt(change);
            w = std::move(*next);
        } else {
            degenerate = true;
        }
        for (std::size_t i = 0; i < m; ++i) {
            z[i] = soft_threshold(w[i] + u[i], kappa);
            u[i] += w[i] - z[i];
        }
        if (next && change < cfg.tol) {
            result.status = AdmmStatus::Converged;
            return result;
        }
    }
    result.status = degenerate ? AdmmStatus::Degenerate : AdmmStatus::MaxIterations;
    return result;
}

double residual_rmse(const Matrix& a, std::span<const double> w) {
    if (a.rows() == 0) {
        return 0.0;
    }
    return norm2(multiply(a, w)) / std::sqrt(static_cast<double>(a.rows()));
}

void canonical_sign(std::span<double> w, std::size_t m_phi) noexcept {
    std::size_t lo = std::min(m_phi, w.size());
    auto pick = [&](std::size_t from) {
        std::size_t best = w.size();
        double best_abs = 0.0;
        for (std::size_t i = from; i < w.size(); ++i) {
            if (std::abs(w[i]) > best_abs) {
                best_abs = std::abs(w[i]);
                best = i;
            }
        }
        return best;
    };
    std::size_t k = pick(lo);
    if (k == w.size()) {
        k = pick(0);
    }
    if (k < w.size() && w[k] < 0.0) {
        for (double& v : w) {
            v = -v;
        }
    }
}

namespace {

Matrix sub_gram(const Matrix& g, std::span<const std::size_t> idx) {
    Matrix out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            out(i, j) = g(idx[i], idx[j]);
        }
    }
    return out;
}

constexpr double kNullTol = 1e-12;
constexpr double kClusterTol = 1e-12;
constexpr double kProjectionFloor = 1e-12;

// Orthonormal basis of the range of a Gram block, as columns.
Matrix range_basis(const Matrix& g) {
    const SymmetricEigen e = jacobi_eigen(g);
    const double top = e.values.empty() ? 0.0 : e.values.back();
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        if (top > 0.0 && e.values[k] > kNullTol * top) {
            keep.push_back(k);
        }
    }
    return e.vectors.select_columns(keep);
}

// Rows of `full` restricted to [from, to).
Matrix row_block(const Matrix& full, std::size_t from, std::size_t to) {
    Matrix out(to - from, full.cols());
    for (std::size_t i = from; i < to; ++i) {
        for (std::size_t j = 0; j < full.cols(); ++j) {
            out(i - from, j) = full(i, j);
        }
    }
    return out;
}

// Block-diagonal basis of the admissible coefficient space on the index set
// sp followed by sq, as columns. phi_dims receives the number of phi columns.
Matrix admissible_basis(const Matrix& g, std::span<const std::size_t> sp, std::span<const std::size_t> sq,
                        std::size_t& phi_dims) {
    const std::size_t n = sp.size() + sq.size();
    if (sp.empty() || sq.empty()) {
        phi_dims = sq.empty() ? n : 0;
        return Matrix::identity(n);
    }
    const Matrix rp = range_basis(sub_gram(g, sp));
    const Matrix rq = range_basis(sub_gram(g, sq));
    phi_dims = rp.cols();
    Matrix r(n, rp.cols() + rq.cols());
    for (std::size_t i = 0; i < sp.size(); ++i) {
        for (std::size_t j = 0; j < rp.cols(); ++j) {
            r(i, j) = rp(i, j);
        }
    }
    for (std::size_t i = 0; i < sq.size(); ++i) {
        for (std::size_t j = 0; j < rq.cols(); ++j) {
            r(sp.size() + i, phi_dims + j) = rq(i, j);
        }
    }
    return r;
}

Matrix transpose(const Matrix& r) {
    Matrix rt(r.cols(), r.rows());
    for (std::size_t i = 0; i < r.rows(); ++i) {
        for (std::size_t j = 0; j < r.cols(); ++j) {
            rt(j, i) = r(i, j);
        }
    }
    return rt;
}

Refit refit_from_gram(const Matrix& a, const Matrix& g, std::size_t m_phi, std::span<const std::size_t> support) {
    const std::size_t m = a.cols();
    Refit out;
    out.w.assign(m, 0.0);
    if (support.empty()) {
        throw std::invalid_argument("refit_support: empty support");
    }
    std::vector<std::size_t> sp;
    std::vector<std::size_t> sq;
    for (std::size_t i : support) {
        if (i >= m) {
            throw std::out_of_range("refit_support: support index out of range");
        }
        (i < m_phi ? sp : sq).push_back(i);
    }
    std::vector<std::size_t> s = sp;
    s.insert(s.end(), sq.begin(), sq.end());
    const Matrix gs = sub_gram(g, s);

    std::size_t phi_dims = 0;
    const Matrix r = admissible_basis(g, sp, sq, phi_dims);

    std::vector<double> ws(s.size(), 0.0);
    if (r.cols() == 0) {
        ws[0] = 1.0;
    } else {
        const Matrix reduced = multiply(transpose(r), multiply(gs, r));
        const SymmetricEigen e = jacobi_eigen(reduced);
        const double top = std::max(std::abs(e.values.back()), 0.0);
        std::size_t cluster = 1;
        while (cluster < e.values.size() && e.values[cluster] <= e.values[0] + kClusterTol * top) {
            ++cluster;
        }
        std::vector<double> c(r.cols());
        if (cluster == 1 || phi_dims == r.cols()) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                c[i] = e.vectors(i, 0);
            }
        } else {
            // Within a degenerate minimum, take the direction with the largest psi weight.
            std::vector<std::size_t> first(cluster);
            std::iota(first.begin(), first.end(), 0);
            const Matrix vc = e.vectors.select_columns(first);
            const Matrix pq = row_block(vc, phi_dims, vc.rows());
            const SymmetricEigen inner = jacobi_eigen(gram(pq));
            const std::size_t last = inner.values.size() - 1;
            for (std::size_t i = 0; i < c.size(); ++i) {
                double v = 0.0;
                for (std::size_t k = 0; k < cluster; ++k) {
                    v += vc(i, k) * inner.vectors(k, last);
                }
                c[i] = v;
            }
        }
        ws = multiply(r, c);
    }
    const double n = norm2(ws);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.w[s[i]] = ws[i] / n;
    }
    canonical_sign(out.w, m_phi);
    out.residual_rmse = residual_rmse(a, out.w);
    return out;
}

} // namespace

Refit refit_support(const Matrix& a, std::size_t m_phi, std::span<const std::size_t> support) {
    return refit_from_gram(a, gram(a), m_phi, support);
}

double FitResult::max_abs_beta() const noexcept {
    double best = 0.0;
    for (double b : beta()) {
        best = std::max(best, std::abs(b));
    }
    return best;
}

std::optional<std::vector<double>> project_admissible(const Matrix& a, std::size_t m_phi, std::span<const double> w) {
    const std::size_t m = a.cols();
    if (w.size() != m || m_phi > m) {
        throw std::invalid_argument("project_admissible: size mismatch");
    }
    std::vector<std::size_t> sp(m_phi);
    std::vector<std::size_t> sq(m - m_phi);
    std::iota(sp.begin(), sp.end(), 0);
    std::iota(sq.begin(), sq.end(), m_phi);
    std::size_t phi_dims = 0;
    const Matrix r = admissible_basis(gram(a), sp, sq, phi_dims);
    std::vector<double> out = multiply(r, multiply(transpose(r), std::vector<double>(w.begin(), w.end())));
    const double n = norm2(out);
    if (!(n > kProjectionFloor)) {
        return std::nullopt;
    }
    for (double& v : out) {
        v /= n;
    }
    return out;
}

FitResult fit_relation(const Matrix& a, std::size_t m_phi, const AdmmConfig& cfg, const FitOptions& opts) {
    for (double v : a.data()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("fit_relation: design matrix is not finite");
        }
    }
    const std::size_t m = a.cols();
    const AdmmResult admm = solve_admm(a, cfg);

    FitResult fit;
    fit.m_phi = m_phi;
    fit.iters = admm.iters;
    fit.converged = admm.status == AdmmStatus::Converged;
    fit.w = admm.state.w;
    canonical_sign(fit.w, m_phi);
    fit.admm_residual_rmse = residual_rmse(a, fit.w);

    if (auto projected = project_admissible(a, m_phi, fit.w)) {
        fit.w = std::move(*projected);
        canonical_sign(fit.w, m_phi);
        fit.residual_rmse = residual_rmse(a, fit.w);
    } else {
        fit.degenerate = true;
        fit.residual_rmse = std::numeric_limits<double>::infinity();
    }

    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < m; ++i) {
        if (admm.state.z[i] != 0.0) {
            selected.push_back(i);
        }
    }
    if (!selected.empty()) {
        const Refit refit = refit_from_gram(a, gram(a), m_phi, selected);
        if (refit.residual_rmse <= fit.residual_rmse) {
            fit.w = refit.w;
            fit.residual_rmse = refit.residual_rmse;
            fit.refit_applied = true;
            fit.degenerate = false;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(fit.w[i]) > opts.support_floor) {
            fit.support.push_back(i);
        }
    }
    return fit;
}

Refit refit_reported(const Matrix& a, const FitResult& fit) {
    if (fit.w.size() != a.cols()) {
        throw std::invalid_argument("refit_reported: size mismatch");
    }
    Refit kept{fit.w, fit.residual_rmse};
    if (fit.support.empty()) {
        return kept;
    }
    Refit refit = refit_support(a, fit.m_phi, fit.support);
    return refit.residual_rmse <= fit.residual_rmse ? refit : kept;
}

} // namespace gsr

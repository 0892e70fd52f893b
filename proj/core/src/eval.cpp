#include "gsr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsr {

namespace {

bool finite_column(const std::vector<double>& col) {
    return std::all_of(col.begin(), col.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

double eval_phi(const PhiMatrix& m, const MappingTable& table, std::span<const double> x) noexcept {
    double value = 1.0;
    for (int r = 0; r < m.rows(); ++r) {
        const Transform t = table.transforms()[static_cast<std::size_t>(m.code(r))];
        if (t == Transform::One) {
            continue;
        }
        double arg = 0.0;
        switch (static_cast<ArgType>(m.arg_type(r))) {
        case ArgType::Single:
            arg = x[static_cast<std::size_t>(m.var(r, 0) - 1)];
            break;
        case ArgType::Sum:
            for (int j = 0; j < m.nv(); ++j) {
                if (const int v = m.var(r, j); v != kSkip) {
                    arg += x[static_cast<std::size_t>(v - 1)];
                }
            }
            break;
        case ArgType::Product:
            arg = 1.0;
            for (int j = 0; j < m.nv(); ++j) {
                if (const int v = m.var(r, j); v != kSkip) {
                    arg *= x[static_cast<std::size_t>(v - 1)];
                }
            }
            break;
        }
        value *= apply_transform(t, arg);
    }
    return value;
}

double eval_psi(const PsiMatrix& m, const MappingTable& table, double y) noexcept {
    double value = 1.0;
    for (int code : m.codes()) {
        value *= apply_transform(table.transforms()[static_cast<std::size_t>(code)], y);
    }
    return value;
}

bool DesignBundle::all_finite() const noexcept {
    return std::all_of(phi_finite.begin(), phi_finite.end(), [](bool b) { return b; }) &&
           std::all_of(psi_finite.begin(), psi_finite.end(), [](bool b) { return b; });
}

std::vector<double> phi_column(const Dataset& data, const PhiMatrix& m, const MappingTable& table) {
    std::vector<double> col(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        col[i] = eval_phi(m, table, data.x.row(i));
    }
    return col;
}

std::vector<double> psi_column(const Dataset& data, const PsiMatrix& m, const MappingTable& table) {
    std::vector<double> col(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        col[i] = eval_psi(m, table, data.y[i]);
    }
    return col;
}

DesignBundle build_design(const Dataset& data, std::span<const PhiMatrix> phis, std::span<const PsiMatrix> psis,
                          const MappingTable& table_x, const MappingTable& table_y) {
    if (data.x.rows() != data.y.size()) {
        throw std::invalid_argument("build_design: feature and target counts differ");
    }
    if (data.dims() != static_cast<std::size_t>(table_x.d())) {
        throw std::invalid_argument("build_design: dataset dimension does not match the table");
    }
    const std::size_t n = data.size();
    const std::size_t mp = phis.size();
    const std::size_t mq = psis.size();
    DesignBundle b{Matrix(n, mp), Matrix(n, mq), Matrix(n, mp + mq), {}, {}};
    b.phi_finite.resize(mp);
    b.psi_finite.resize(mq);
    for (std::size_t j = 0; j < mp; ++j) {
        const std::vector<double> col = phi_column(data, phis[j], table_x);
        b.phi_finite[j] = finite_column(col);
        for (std::size_t i = 0; i < n; ++i) {
            b.x(i, j) = col[i];
            b.a(i, j) = col[i];
        }
    }
    for (std::size_t j = 0; j < mq; ++j) {
        const std::vector<double> col = psi_column(data, psis[j], table_y);
        b.psi_finite[j] = finite_column(col);
        for (std::size_t i = 0; i < n; ++i) {
            b.y(i, j) = col[i];
            b.a(i, mp + j) = -col[i];
        }
    }
    return b;
}

} // namespace gsr

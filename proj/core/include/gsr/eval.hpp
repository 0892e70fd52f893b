#pragma once

#include <span>
#include <vector>

#include "gsr/basis.hpp"
#include "gsr/dense.hpp"

namespace gsr {

struct Dataset {
    Matrix x; // N x d
    std::vector<double> y;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t dims() const noexcept { return x.cols(); }
};

// The matrix is assumed valid for the table. Out-of-domain values propagate as
// inf or NaN.
double eval_phi(const PhiMatrix& m, const MappingTable& table, std::span<const double> x) noexcept;
double eval_psi(const PsiMatrix& m, const MappingTable& table, double y) noexcept;

// X holds phi columns, Y psi columns and A = [X | -Y].
struct DesignBundle {
    Matrix x;
    Matrix y;
    Matrix a;
    std::vector<bool> phi_finite;
    std::vector<bool> psi_finite;

    std::size_t m_phi() const noexcept { return x.cols(); }
    std::size_t m_psi() const noexcept { return y.cols(); }
    bool all_finite() const noexcept;
};

std::vector<double> phi_column(const Dataset& data, const PhiMatrix& m, const MappingTable& table);
std::vector<double> psi_column(const Dataset& data, const PsiMatrix& m, const MappingTable& table);

DesignBundle build_design(const Dataset& data, std::span<const PhiMatrix> phis, std::span<const PsiMatrix> psis,
                          const MappingTable& table_x, const MappingTable& table_y);

} // namespace gsr

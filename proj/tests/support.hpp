#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gsr/basis.hpp"
#include "gsr/dense.hpp"
#include "gsr/mapping_table.hpp"

namespace gsr::testing {

// 1, id, cos, sin, exp, ln.
inline MappingTable base_table(int d) {
    return MappingTable({Transform::One, Transform::Identity, Transform::Cos, Transform::Sin, Transform::Exp,
                         Transform::Ln},
                        d, 1, 5);
}

// 1, id, inv, sq, cube, cos, sin, exp, ln, sqrt.
inline MappingTable wide_table(int d) {
    return MappingTable({Transform::One, Transform::Identity, Transform::Reciprocal, Transform::Square, Transform::Cube,
                         Transform::Cos, Transform::Sin, Transform::Exp, Transform::Ln, Transform::Sqrt},
                        d, 1, 5);
}

inline constexpr int X = kDontCare;

// Generators for property tests. std::mt19937_64 with std distributions is
// fine here; the engine under test uses its own portable distributions.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    std::uint64_t seed() { return eng_(); }

    Matrix matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (double& v : m.data()) {
            v = normal();
        }
        return m;
    }

    std::vector<double> vector(std::size_t n) {
        std::vector<double> v(n);
        for (double& x : v) {
            x = normal();
        }
        return v;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        std::shuffle(v.begin(), v.end(), eng_);
    }

private:
    std::mt19937_64 eng_;
};

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return out;
}

inline Matrix from_eigen(const Eigen::MatrixXd& m) {
    Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
        }
    }
    return out;
}

inline double naive_transform(Transform t, double a) {
    switch (t) {
    case Transform::One: return 1.0;
    case Transform::Identity: return a;
    case Transform::Reciprocal: return 1.0 / a;
    case Transform::Square: return a * a;
    case Transform::Cube: return a * a * a;
    case Transform::Cos: return std::cos(a);
    case Transform::Sin: return std::sin(a);
    case Transform::Exp: return std::exp(a);
    case Transform::Ln: return std::log(a);
    case Transform::Sqrt: return std::sqrt(a);
    case Transform::NegExp: return std::exp(-a);
    case Transform::Neg: return -a;
    case Transform::Tan: return std::tan(a);
    case Transform::Tanh: return std::tanh(a);
    }
    return NAN;
}

// Reads the matrix entries directly, without the library decoder.
inline double naive_phi(const PhiMatrix& m, const MappingTable& t, const std::vector<double>& x) {
    double out = 1.0;
    for (int r = 0; r < m.rows(); ++r) {
        const Transform tr = t.transforms()[static_cast<std::size_t>(m.at(r, 0))];
        if (tr == Transform::One) {
            continue;
        }
        double arg = 0.0;
        switch (m.at(r, 1)) {
        case 0: arg = x[static_cast<std::size_t>(m.at(r, 2) - 1)]; break;
        case 1:
            for (int j = 0; j < m.nv(); ++j) {
                arg += m.at(r, 2 + j) == 0 ? 0.0 : x[static_cast<std::size_t>(m.at(r, 2 + j) - 1)];
            }
            break;
        default:
            arg = 1.0;
            for (int j = 0; j < m.nv(); ++j) {
                arg *= m.at(r, 2 + j) == 0 ? 1.0 : x[static_cast<std::size_t>(m.at(r, 2 + j) - 1)];
            }
        }
        out *= naive_transform(tr, arg);
    }
    return out;
}

} // namespace gsr::testing

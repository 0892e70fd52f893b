#include "gsr/basis.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gsr {

PhiMatrix::PhiMatrix(int rows, int nv) : rows_(rows), nv_(nv) {
    if (rows < 0 || nv < 0) {
        throw std::invalid_argument("PhiMatrix: negative dimensions");
    }
    data_.assign(static_cast<std::size_t>(rows * (nv + 2)), kDontCare);
}

PhiMatrix::PhiMatrix(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("PhiMatrix: no rows");
    }
    const std::size_t width = rows.front().size();
    if (width < 3) {
        throw std::invalid_argument("PhiMatrix: rows need at least three columns");
    }
    rows_ = static_cast<int>(rows.size());
    nv_ = static_cast<int>(width) - 2;
    data_.reserve(rows.size() * width);
    for (const auto& row : rows) {
        if (row.size() != width) {
            throw std::invalid_argument("PhiMatrix: ragged rows");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

PhiMatrix PhiMatrix::normalized() const {
    PhiMatrix out = *this;
    for (int r = 0; r < rows_; ++r) {
        if (out.code(r) == 0) {
            for (int c = 1; c < cols(); ++c) {
                out.at(r, c) = kDontCare;
            }
        } else if (out.arg_type(r) == static_cast<int>(ArgType::Single)) {
            for (int j = 1; j < nv_; ++j) {
                out.at(r, 2 + j) = kDontCare;
            }
        }
    }
    return out;
}

namespace {

std::string row_prefix(int r) { return "row " + std::to_string(r) + ": "; }

void check_structure(const PhiMatrix& m, const MappingTable& table) {
    if (m.rows() < 1) {
        throw std::invalid_argument("phi matrix has no rows");
    }
    if (m.nv() < table.nv_min() || m.nv() > table.nv_max()) {
        throw std::invalid_argument("phi matrix has " + std::to_string(m.nv()) + " variable columns, table allows " +
                                    std::to_string(table.nv_min()) + ".." + std::to_string(table.nv_max()));
    }
}

} // namespace

Verdict validate_phi(const PhiMatrix& m, const MappingTable& table) {
    check_structure(m, table);
    const int d = table.d();
    for (int r = 0; r < m.rows(); ++r) {
        const int code = m.code(r);
        if (code < 0 || code >= table.size()) {
            return {false, row_prefix(r) + "transform code " + std::to_string(code) + " out of range"};
        }
        if (table.at(code) == Transform::One) {
            continue;
        }
        const int type = m.arg_type(r);
        if (type < 0 || type > 2) {
            return {false, row_prefix(r) + "argument type " + std::to_string(type) + " out of range"};
        }
        if (type == static_cast<int>(ArgType::Single)) {
            const int v = m.var(r, 0);
            if (v < 1 || v > d) {
                return {false, row_prefix(r) + "single argument needs a variable in 1.." + std::to_string(d)};
            }
            continue;
        }
        bool any = false;
        for (int j = 0; j < m.nv(); ++j) {
            const int v = m.var(r, j);
            if (v < 0 || v > d) {
                return {false, row_prefix(r) + "variable code " + std::to_string(v) + " out of range"};
            }
            any = any || v != kSkip;
        }
        if (!any) {
            return {false, row_prefix(r) + "every variable is skipped"};
        }
    }
    return {};
}

Verdict validate_psi(const PsiMatrix& m, const MappingTable& table) {
    if (m.rows() < 1) {
        throw std::invalid_argument("psi matrix has no rows");
    }
    for (int r = 0; r < m.rows(); ++r) {
        if (m.code(r) < 0 || m.code(r) >= table.size()) {
            return {false, row_prefix(r) + "transform code " + std::to_string(m.code(r)) + " out of range"};
        }
    }
    return {};
}

std::vector<Factor> decode_phi(const PhiMatrix& m, const MappingTable& table) {
    if (Verdict v = validate_phi(m, table); !v) {
        throw std::invalid_argument("invalid phi matrix: " + v.reason);
    }
    std::vector<Factor> factors;
    factors.reserve(static_cast<std::size_t>(m.rows()));
    for (int r = 0; r < m.rows(); ++r) {
        Factor f;
        f.transform = table.at(m.code(r));
        if (f.transform != Transform::One) {
            f.arg = static_cast<ArgType>(m.arg_type(r));
            if (f.arg == ArgType::Single) {
                f.vars.push_back(m.var(r, 0));
            } else {
                for (int j = 0; j < m.nv(); ++j) {
                    if (m.var(r, j) != kSkip) {
                        f.vars.push_back(m.var(r, j));
                    }
                }
            }
        }
        factors.push_back(std::move(f));
    }
    return factors;
}

std::vector<Transform> decode_psi(const PsiMatrix& m, const MappingTable& table) {
    if (Verdict v = validate_psi(m, table); !v) {
        throw std::invalid_argument("invalid psi matrix: " + v.reason);
    }
    std::vector<Transform> out;
    for (int code : m.codes()) {
        out.push_back(table.at(code));
    }
    return out;
}

PhiMatrix random_phi(const MappingTable& table, std::span<const int> codes, Rng& rng) {
    if (codes.empty()) {
        throw std::invalid_argument("random_phi: empty code set");
    }
    const int rows = rng.integer(1, 3);
    const int nv = rng.integer(table.nv_min(), table.nv_max());
    const int d = table.d();
    PhiMatrix m(rows, nv);
    for (int r = 0; r < rows; ++r) {
        const int code = codes[rng.index(codes.size())];
        m.at(r, 0) = code;
        if (table.at(code) == Transform::One) {
            continue;
        }
        const int type = rng.integer(0, 2);
        m.at(r, 1) = type;
        if (type == static_cast<int>(ArgType::Single)) {
            m.at(r, 2) = rng.integer(1, d);
            continue;
        }
        bool any = false;
        while (!any) {
            for (int j = 0; j < nv; ++j) {
                const int v = rng.integer(0, d);
                m.at(r, 2 + j) = v;
                any = any || v != kSkip;
            }
        }
    }
    return m;
}

PhiMatrix random_phi(const MappingTable& table, Rng& rng) {
    const std::vector<int> codes = table.all_codes();
    return random_phi(table, codes, rng);
}

PsiMatrix random_psi(const MappingTable& table, std::span<const int> codes, Rng& rng, bool allow_one) {
    std::vector<int> pool;
    for (int c : codes) {
        if (allow_one || table.at(c) != Transform::One) {
            pool.push_back(c);
        }
    }
    if (pool.empty()) {
        throw std::invalid_argument("random_psi: no admissible codes");
    }
    return PsiMatrix({pool[rng.index(pool.size())]});
}

PsiMatrix random_psi(const MappingTable& table, Rng& rng, bool allow_one) {
    const std::vector<int> codes = table.all_codes();
    return random_psi(table, codes, rng, allow_one);
}

std::string to_text(const PhiMatrix& m, int d) {
    std::ostringstream out;
    out << "phi " << m.rows() << ' ' << m.nv() << ' ' << d << '\n';
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            out << (c ? " " : "") << m.at(r, c);
        }
        out << '\n';
    }
    return out.str();
}

std::string to_text(const PsiMatrix& m) {
    std::ostringstream out;
    out << "psi " << m.rows() << '\n';
    for (int code : m.codes()) {
        out << code << '\n';
    }
    return out.str();
}

ParsedPhi phi_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    int rows = 0;
    int nv = 0;
    int d = 0;
    if (!(in >> tag >> rows >> nv >> d) || tag != "phi" || rows < 1 || nv < 1 || d < 1) {
        throw std::invalid_argument("phi_from_text: bad header");
    }
    PhiMatrix m(rows, nv);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < nv + 2; ++c) {
            if (!(in >> m.at(r, c))) {
                throw std::invalid_argument("phi_from_text: truncated matrix");
            }
        }
    }
    return {std::move(m), d};
}

PsiMatrix psi_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    int rows = 0;
    if (!(in >> tag >> rows) || tag != "psi" || rows < 1) {
        throw std::invalid_argument("psi_from_text: bad header");
    }
    std::vector<int> codes(static_cast<std::size_t>(rows));
    for (int& c : codes) {
        if (!(in >> c)) {
            throw std::invalid_argument("psi_from_text: truncated matrix");
        }
    }
    return PsiMatrix(std::move(codes));
}

bool is_constant(const PsiMatrix& m, const MappingTable& table) {
    return std::all_of(m.codes().begin(), m.codes().end(), [&](int c) { return table.at(c) == Transform::One; });
}

} // namespace gsr

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsr/mapping_table.hpp"
#include "gsr/rng.hpp"

namespace gsr {

inline constexpr int kDontCare = -1;
inline constexpr int kSkip = 0;

enum class ArgType : int { Single = 0, Sum = 1, Product = 2 };

// One basis function phi(x) as a product of transformed arguments. Each row is
// [transform code, argument type, v_1 .. v_nv]. Variable codes are 0 (skip) or
// 1..d. Entries that do not affect the function hold kDontCare.
class PhiMatrix {
public:
    PhiMatrix() = default;
    PhiMatrix(int rows, int nv);
    explicit PhiMatrix(const std::vector<std::vector<int>>& rows);

    int rows() const noexcept { return rows_; }
    int nv() const noexcept { return nv_; }
    int cols() const noexcept { return nv_ + 2; }

    int& at(int r, int c) { return data_[static_cast<std::size_t>(r * cols() + c)]; }
    int at(int r, int c) const { return data_[static_cast<std::size_t>(r * cols() + c)]; }

    int code(int r) const { return at(r, 0); }
    int arg_type(int r) const { return at(r, 1); }
    int var(int r, int j) const { return at(r, 2 + j); }

    // Copy with every don't-care entry set to kDontCare. Code 0 is One in
    // every table, so no table is needed.
    PhiMatrix normalized() const;

    bool operator==(const PhiMatrix&) const = default;

private:
    int rows_ = 0;
    int nv_ = 0;
    std::vector<int> data_;
};

// g(y) basis: a column of transform codes applied to y and multiplied.
class PsiMatrix {
public:
    PsiMatrix() = default;
    explicit PsiMatrix(std::vector<int> codes) : codes_(std::move(codes)) {}

    int rows() const noexcept { return static_cast<int>(codes_.size()); }
    int code(int r) const { return codes_[static_cast<std::size_t>(r)]; }
    const std::vector<int>& codes() const noexcept { return codes_; }

    bool operator==(const PsiMatrix&) const = default;

private:
    std::vector<int> codes_;
};

struct Verdict {
    bool ok = true;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

// Structural problems (no rows, variable columns outside the table range) throw
// std::invalid_argument. Content problems are reported in the verdict.
Verdict validate_phi(const PhiMatrix& m, const MappingTable& table);
Verdict validate_psi(const PsiMatrix& m, const MappingTable& table);

struct Factor {
    Transform transform = Transform::One;
    ArgType arg = ArgType::Single;
    std::vector<int> vars; // 1-based, skips removed, column order kept

    bool operator==(const Factor&) const = default;
};

// Throws std::invalid_argument on invalid matrices.
std::vector<Factor> decode_phi(const PhiMatrix& m, const MappingTable& table);
std::vector<Transform> decode_psi(const PsiMatrix& m, const MappingTable& table);

// Random generation over the listed codes of a table.
PhiMatrix random_phi(const MappingTable& table, std::span<const int> codes, Rng& rng);
PhiMatrix random_phi(const MappingTable& table, Rng& rng);
// When allow_one is false the One code is removed from the candidates.
PsiMatrix random_psi(const MappingTable& table, std::span<const int> codes, Rng& rng, bool allow_one = true);
PsiMatrix random_psi(const MappingTable& table, Rng& rng, bool allow_one = true);

// Text form. Header "phi n_B n_v d" or "psi n_B", then one row per line with
// kDontCare written as -1.
std::string to_text(const PhiMatrix& m, int d);
std::string to_text(const PsiMatrix& m);

struct ParsedPhi {
    PhiMatrix matrix;
    int d = 0;
};
ParsedPhi phi_from_text(const std::string& text);
PsiMatrix psi_from_text(const std::string& text);

// True when every row has transform One.
bool is_constant(const PsiMatrix& m, const MappingTable& table);

} // namespace gsr

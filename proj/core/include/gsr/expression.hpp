#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsr/basis.hpp"

namespace gsr {

// Parsed infix expression over x1..xd (x is an alias of x1) and y.
class Expr {
public:
    enum class Kind { Number, Variable, Call, Negate, Add, Sub, Mul, Div, Pow };

    Kind kind = Kind::Number;
    double value = 0.0;   // Number
    std::string name;     // Variable or Call
    int var = 0;          // Variable: 1..d for x, 0 for y
    std::vector<std::shared_ptr<const Expr>> args;

    double evaluate(std::span<const double> x, double y) const;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Throws std::invalid_argument on malformed text.
ExprPtr parse_expression(std::string_view text);

struct RelationText {
    ExprPtr lhs;
    ExprPtr rhs;
};
RelationText parse_relation_text(std::string_view text);

// A relation sum_j beta_j psi_j(y) = sum_j alpha_j phi_j(x) in matrix form,
// with w = (alpha, beta).
struct Relation {
    MappingTable table_x;
    MappingTable table_y;
    std::vector<PhiMatrix> phis;
    std::vector<PsiMatrix> psis;
    std::vector<double> w;

    // g(y) - f(x).
    double residual(std::span<const double> x, double y) const;
};

// Table over every transform, used for relations read from text.
MappingTable catalog_table(int d);

// Converts "g(y) = f(x)" text into basis matrices. Every additive term must be
// a coefficient times transforms of a variable, a sum of variables or a
// product of variables. Terms may not mix x and y. w is normalised to unit length.
Relation parse_relation(std::string_view text, int d);

std::string render_phi(const PhiMatrix& m, const MappingTable& table);
std::string render_psi(const PsiMatrix& m, const MappingTable& table);

// "b1*g1 + ... = a1*f1 + ..." with zero coefficients omitted and %.<precision>g numbers.
std::string to_infix_string(std::span<const PhiMatrix> phis, std::span<const PsiMatrix> psis, std::span<const double> w,
                            const MappingTable& table_x, const MappingTable& table_y, int precision = 6);

} // namespace gsr

#include "gsr/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>

#include "gsr/dense.hpp"
#include "gsr/eval.hpp"

namespace gsr {

namespace {

std::optional<Transform> function_transform(std::string_view name) {
    if (name == "sin") return Transform::Sin;
    if (name == "cos") return Transform::Cos;
    if (name == "tan") return Transform::Tan;
    if (name == "tanh") return Transform::Tanh;
    if (name == "exp") return Transform::Exp;
    if (name == "ln" || name == "log") return Transform::Ln;
    if (name == "sqrt") return Transform::Sqrt;
    return std::nullopt;
}

struct Token {
    enum class Type { Number, Ident, Op, End } type = Type::End;
    double number = 0.0;
    std::string text;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) { advance(); }

    ExprPtr relation_side() { return expr(); }

    bool at_end() const { return tok_.type == Token::Type::End; }
    bool accept(char op) {
        if (tok_.type == Token::Type::Op && tok_.text[0] == op) {
            advance();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + ": " + what);
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        tok_ = Token{};
        if (pos_ >= text_.size()) {
            return;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(text_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) {
                fail("bad number");
            }
            tok_.type = Token::Type::Number;
            tok_.number = v;
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
                ++end;
            }
            tok_.type = Token::Type::Ident;
            tok_.text = std::string(text_.substr(pos_, end - pos_));
            pos_ = end;
            return;
        }
        if (std::string_view("+-*/^()=").find(c) != std::string_view::npos) {
            tok_.type = Token::Type::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    static ExprPtr node(Expr::Kind kind, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = kind;
        e->args = std::move(args);
        return e;
    }

    ExprPtr expr() {
        ExprPtr left = term();
        while (true) {
            if (accept('+')) {
                left = node(Expr::Kind::Add, {left, term()});
            } else if (accept('-')) {
                left = node(Expr::Kind::Sub, {left, term()});
            } else {
                return left;
            }
        }
    }

    ExprPtr term() {
        ExprPtr left = unary();
        while (true) {
            if (accept('*')) {
                left = node(Expr::Kind::Mul, {left, unary()});
            } else if (accept('/')) {
                left = node(Expr::Kind::Div, {left, unary()});
            } else {
                return left;
            }
        }
    }

    ExprPtr unary() {
        if (accept('-')) {
            return node(Expr::Kind::Negate, {unary()});
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept('^')) {
            return node(Expr::Kind::Pow, {base, unary()});
        }
        return base;
    }

    ExprPtr primary() {
        if (tok_.type == Token::Type::Number) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Number;
            e->value = tok_.number;
            advance();
            return e;
        }
        if (tok_.type == Token::Type::Ident) {
            const std::string name = tok_.text;
            advance();
            if (function_transform(name)) {
                if (!accept('(')) {
                    fail("expected '(' after " + name);
                }
                ExprPtr inner = expr();
                if (!accept(')')) {
                    fail("expected ')'");
                }
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Call;
                e->name = name == "log" ? "ln" : name;
                e->args = {inner};
                return e;
            }
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Variable;
            e->name = name;
            if (name == "y") {
                e->var = 0;
            } else if (name == "x") {
                e->var = 1;
            } else if (name.size() > 1 && name[0] == 'x' &&
                       std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) &&
                       name[1] != '0') {
                e->var = std::stoi(name.substr(1));
            } else {
                fail("unknown identifier '" + name + "'");
            }
            return e;
        }
        if (accept('(')) {
            ExprPtr inner = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        fail(at_end() ? "unexpected end of input" : "unexpected token '" + tok_.text + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token tok_;
};

ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->value = v;
    return e;
}

struct RawTerm {
    double coef = 1.0;
    std::vector<ExprPtr> factors;
};

void collect_product(const ExprPtr& e, RawTerm& term) {
    switch (e->kind) {
    case Expr::Kind::Number: term.coef *= e->value; return;
    case Expr::Kind::Negate:
        term.coef = -term.coef;
        collect_product(e->args[0], term);
        return;
    case Expr::Kind::Mul:
        collect_product(e->args[0], term);
        collect_product(e->args[1], term);
        return;
    case Expr::Kind::Div:
        collect_product(e->args[0], term);
        if (e->args[1]->kind == Expr::Kind::Number) {
            term.coef /= e->args[1]->value;
        } else {
            auto inv = std::make_shared<Expr>();
            inv->kind = Expr::Kind::Pow;
            inv->args = {e->args[1], make_number(-1.0)};
            term.factors.push_back(inv);
        }
        return;
    default: term.factors.push_back(e); return;
    }
}

void collect_sum(const ExprPtr& e, double sign, std::vector<RawTerm>& out) {
    switch (e->kind) {
    case Expr::Kind::Add:
        collect_sum(e->args[0], sign, out);
        collect_sum(e->args[1], sign, out);
        return;
    case Expr::Kind::Sub:
        collect_sum(e->args[0], sign, out);
        collect_sum(e->args[1], -sign, out);
        return;
    case Expr::Kind::Negate: collect_sum(e->args[0], -sign, out); return;
    default: {
        RawTerm t;
        t.coef = sign;
        collect_product(e, t);
        out.push_back(std::move(t));
    }
    }
}

bool is_x(const ExprPtr& e) { return e->kind == Expr::Kind::Variable && e->var > 0; }
bool is_y(const ExprPtr& e) { return e->kind == Expr::Kind::Variable && e->var == 0; }

std::optional<int> small_integer(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Number && e->value == std::floor(e->value) && e->value >= 1 && e->value <= 16) {
        return static_cast<int>(e->value);
    }
    return std::nullopt;
}

void gather(const ExprPtr& e, Expr::Kind op, std::vector<int>& vars) {
    if (is_x(e)) {
        vars.push_back(e->var);
        return;
    }
    if (e->kind == op) {
        gather(e->args[0], op, vars);
        gather(e->args[1], op, vars);
        return;
    }
    if (op == Expr::Kind::Mul && e->kind == Expr::Kind::Pow && is_x(e->args[0])) {
        if (auto k = small_integer(e->args[1])) {
            vars.insert(vars.end(), static_cast<std::size_t>(*k), e->args[0]->var);
            return;
        }
    }
    throw std::invalid_argument("argument is not a variable, a sum of variables or a product of variables");
}

Factor argument(Transform t, const ExprPtr& inner) {
    Factor f;
    f.transform = t;
    if (is_x(inner)) {
        f.arg = ArgType::Single;
        f.vars = {inner->var};
    } else if (inner->kind == Expr::Kind::Add) {
        f.arg = ArgType::Sum;
        gather(inner, Expr::Kind::Add, f.vars);
    } else {
        f.arg = ArgType::Product;
        gather(inner, Expr::Kind::Mul, f.vars);
    }
    return f;
}

std::optional<Transform> power_transform(const ExprPtr& exponent) {
    const double v = exponent->kind == Expr::Kind::Number ? exponent->value
                     : (exponent->kind == Expr::Kind::Negate && exponent->args[0]->kind == Expr::Kind::Number)
                         ? -exponent->args[0]->value
                         : std::nan("");
    if (v == -1.0) return Transform::Reciprocal;
    if (v == 2.0) return Transform::Square;
    if (v == 3.0) return Transform::Cube;
    if (v == 0.5) return Transform::Sqrt;
    return std::nullopt;
}

struct Classified {
    bool on_y = false;
    Factor phi;
    Transform psi = Transform::Identity;
};

Classified classify(const ExprPtr& e) {
    Classified c;
    switch (e->kind) {
    case Expr::Kind::Variable:
        if (is_y(e)) {
            c.on_y = true;
            c.psi = Transform::Identity;
        } else {
            c.phi = argument(Transform::Identity, e);
        }
        return c;
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
        c.phi = argument(Transform::Identity, e);
        return c;
    case Expr::Kind::Call: {
        Transform t = *function_transform(e->name);
        ExprPtr inner = e->args[0];
        if (t == Transform::Exp && inner->kind == Expr::Kind::Negate) {
            t = Transform::NegExp;
            inner = inner->args[0];
        }
        if (is_y(inner)) {
            c.on_y = true;
            c.psi = t;
        } else {
            c.phi = argument(t, inner);
        }
        return c;
    }
    case Expr::Kind::Pow: {
        const ExprPtr& base = e->args[0];
        if (auto t = power_transform(e->args[1])) {
            if (is_y(base)) {
                c.on_y = true;
                c.psi = *t;
            } else {
                c.phi = argument(*t, base);
            }
            return c;
        }
        if (auto k = small_integer(e->args[1]); k && is_x(base)) {
            c.phi.transform = Transform::Identity;
            c.phi.arg = ArgType::Product;
            c.phi.vars.assign(static_cast<std::size_t>(*k), base->var);
            return c;
        }
        throw std::invalid_argument("unsupported power");
    }
    default: throw std::invalid_argument("term factor is not representable as a basis");
    }
}

PhiMatrix phi_from_factors(const std::vector<Factor>& factors, const MappingTable& table) {
    if (factors.empty()) {
        PhiMatrix m(1, table.nv_min());
        m.at(0, 0) = 0;
        return m;
    }
    int nv = table.nv_min();
    for (const Factor& f : factors) {
        nv = std::max(nv, static_cast<int>(f.vars.size()));
    }
    if (nv > table.nv_max()) {
        throw std::invalid_argument("argument uses too many variables");
    }
    PhiMatrix m(static_cast<int>(factors.size()), nv);
    for (int r = 0; r < m.rows(); ++r) {
        const Factor& f = factors[static_cast<std::size_t>(r)];
        m.at(r, 0) = *table.code_of(f.transform);
        m.at(r, 1) = static_cast<int>(f.arg);
        for (int j = 0; j < nv; ++j) {
            if (f.arg == ArgType::Single) {
                m.at(r, 2 + j) = j == 0 ? f.vars[0] : kDontCare;
            } else {
                m.at(r, 2 + j) = j < static_cast<int>(f.vars.size()) ? f.vars[static_cast<std::size_t>(j)] : kSkip;
            }
        }
    }
    return m;
}

std::string join_vars(const std::vector<int>& vars, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        out += (i ? sep : "") + std::string("x") + std::to_string(vars[i]);
    }
    return out;
}

std::string apply_text(Transform t, const std::string& arg, bool atomic) {
    const std::string wrapped = atomic ? arg : "(" + arg + ")";
    switch (t) {
    case Transform::One: return "1";
    case Transform::Identity: return wrapped;
    case Transform::Reciprocal: return "(" + arg + ")^-1";
    case Transform::Square: return "(" + arg + ")^2";
    case Transform::Cube: return "(" + arg + ")^3";
    case Transform::Cos: return "cos(" + arg + ")";
    case Transform::Sin: return "sin(" + arg + ")";
    case Transform::Exp: return "exp(" + arg + ")";
    case Transform::Ln: return "ln(" + arg + ")";
    case Transform::Sqrt: return "sqrt(" + arg + ")";
    case Transform::NegExp: return "exp(-(" + arg + "))";
    case Transform::Neg: return "(-(" + arg + "))";
    case Transform::Tan: return "tan(" + arg + ")";
    case Transform::Tanh: return "tanh(" + arg + ")";
    }
    return "?";
}

std::string number_text(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

void append_term(std::string& out, double coef, const std::string& basis, int precision) {
    if (coef == 0.0) {
        return;
    }
    if (out.empty()) {
        out += coef < 0 ? "-" : "";
    } else {
        out += coef < 0 ? " - " : " + ";
    }
    out += number_text(std::abs(coef), precision);
    if (basis != "1") {
        out += "*" + basis;
    }
}

} // namespace

double Expr::evaluate(std::span<const double> x, double y) const {
    switch (kind) {
    case Kind::Number: return value;
    case Kind::Variable:
        if (var == 0) return y;
        return static_cast<std::size_t>(var) <= x.size() ? x[static_cast<std::size_t>(var - 1)] : std::nan("");
    case Kind::Call: return apply_transform(*function_transform(name), args[0]->evaluate(x, y));
    case Kind::Negate: return -args[0]->evaluate(x, y);
    case Kind::Add: return args[0]->evaluate(x, y) + args[1]->evaluate(x, y);
    case Kind::Sub: return args[0]->evaluate(x, y) - args[1]->evaluate(x, y);
    case Kind::Mul: return args[0]->evaluate(x, y) * args[1]->evaluate(x, y);
    case Kind::Div: return args[0]->evaluate(x, y) / args[1]->evaluate(x, y);
    case Kind::Pow: return std::pow(args[0]->evaluate(x, y), args[1]->evaluate(x, y));
    }
    return std::nan("");
}

ExprPtr parse_expression(std::string_view text) {
    Parser p(text);
    ExprPtr e = p.relation_side();
    if (!p.at_end()) {
        p.fail("trailing input");
    }
    return e;
}

RelationText parse_relation_text(std::string_view text) {
    Parser p(text);
    RelationText r;
    r.lhs = p.relation_side();
    if (!p.accept('=')) {
        p.fail("expected '='");
    }
    r.rhs = p.relation_side();
    if (!p.at_end()) {
        p.fail("trailing input");
    }
    return r;
}

MappingTable catalog_table(int d) { return MappingTable::canonical(kAllTransforms, d, 1, 16); }

double Relation::residual(std::span<const double> x, double y) const {
    double g = 0.0;
    for (std::size_t j = 0; j < psis.size(); ++j) {
        g += w[phis.size() + j] * eval_psi(psis[j], table_y, y);
    }
    double f = 0.0;
    for (std::size_t j = 0; j < phis.size(); ++j) {
        f += w[j] * eval_phi(phis[j], table_x, x);
    }
    return g - f;
}

Relation parse_relation(std::string_view text, int d) {
    const RelationText rt = parse_relation_text(text);
    std::vector<RawTerm> terms;
    collect_sum(rt.lhs, 1.0, terms);
    collect_sum(rt.rhs, -1.0, terms);

    Relation rel{catalog_table(d), catalog_table(1), {}, {}, {}};
    std::vector<double> alpha;
    std::vector<double> beta;
    for (const RawTerm& t : terms) {
        std::vector<Factor> xs;
        std::vector<int> ys;
        for (const ExprPtr& f : t.factors) {
            Classified c = classify(f);
            if (c.on_y) {
                ys.push_back(*rel.table_y.code_of(c.psi));
            } else {
                for (int v : c.phi.vars) {
                    if (v > d) {
                        throw std::invalid_argument("variable x" + std::to_string(v) + " exceeds dimension " + std::to_string(d));
                    }
                }
                xs.push_back(std::move(c.phi));
            }
        }
        if (!ys.empty() && !xs.empty()) {
            throw std::invalid_argument("a term mixes x and y");
        }
        if (!ys.empty()) {
            rel.psis.emplace_back(ys);
            beta.push_back(t.coef);
        } else {
            rel.phis.push_back(phi_from_factors(xs, rel.table_x));
            alpha.push_back(-t.coef);
        }
    }
    rel.w = alpha;
    rel.w.insert(rel.w.end(), beta.begin(), beta.end());
    const double n = norm2(rel.w);
    if (n > 0.0) {
        for (double& v : rel.w) {
            v /= n;
        }
    }
    return rel;
}

std::string render_phi(const PhiMatrix& m, const MappingTable& table) {
    const std::vector<Factor> factors = decode_phi(m, table);
    std::string out;
    for (const Factor& f : factors) {
        if (f.transform == Transform::One) {
            continue;
        }
        std::string arg;
        bool atomic = true;
        if (f.arg == ArgType::Single) {
            arg = "x" + std::to_string(f.vars[0]);
        } else {
            arg = join_vars(f.vars, f.arg == ArgType::Sum ? "+" : "*");
            atomic = f.vars.size() == 1;
        }
        out += (out.empty() ? "" : "*") + apply_text(f.transform, arg, atomic);
    }
    return out.empty() ? "1" : out;
}

std::string render_psi(const PsiMatrix& m, const MappingTable& table) {
    std::string out;
    for (Transform t : decode_psi(m, table)) {
        if (t == Transform::One) {
            continue;
        }
        out += (out.empty() ? "" : "*") + apply_text(t, "y", true);
    }
    return out.empty() ? "1" : out;
}

std::string to_infix_string(std::span<const PhiMatrix> phis, std::span<const PsiMatrix> psis, std::span<const double> w,
                            const MappingTable& table_x, const MappingTable& table_y, int precision) {
    if (w.size() != phis.size() + psis.size()) {
        throw std::invalid_argument("to_infix_string: coefficient count mismatch");
    }
    std::string lhs;
    for (std::size_t j = 0; j < psis.size(); ++j) {
        append_term(lhs, w[phis.size() + j], render_psi(psis[j], table_y), precision);
    }
    std::string rhs;
    for (std::size_t j = 0; j < phis.size(); ++j) {
        append_term(rhs, w[j], render_phi(phis[j], table_x), precision);
    }
    return (lhs.empty() ? "0" : lhs) + " = " + (rhs.empty() ? "0" : rhs);
}

} // namespace gsr

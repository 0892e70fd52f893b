#include "gsr/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gsr/rng.hpp"

namespace gsr {

namespace {

using T = Transform;

Sampler U(double lo, double hi, int n) { return {SamplerKind::Uniform, lo, hi, n}; }
Sampler E(double lo, double hi, int n) { return {SamplerKind::Even, lo, hi, n}; }

const std::vector<T> kBase{T::One, T::Identity, T::Cos, T::Sin, T::Exp, T::Ln};
const std::vector<T> kBaseY{T::One, T::Identity, T::Exp, T::Ln};

std::vector<T> with(std::vector<T> base, std::initializer_list<T> extra) {
    for (T t : extra) {
        if (std::find(base.begin(), base.end(), t) == base.end()) {
            base.push_back(t);
        }
    }
    return base;
}

std::vector<T> without(std::vector<T> base, std::initializer_list<T> drop) {
    for (T t : drop) {
        base.erase(std::remove(base.begin(), base.end(), t), base.end());
    }
    return base;
}

// y-side library: One, Identity, the exp/ln members of the library and its
// power transforms.
std::vector<T> y_side(const std::vector<T>& lib) {
    std::vector<T> out{T::One, T::Identity};
    for (T t : lib) {
        if (t == T::Exp || t == T::Ln || is_power_transform(t)) {
            out.push_back(t);
        }
    }
    return out;
}

double p(double b, double e) { return std::pow(b, e); }

Benchmark make(std::string name, std::string suite, std::string expr, int d, GroundTruth f, Sampler train,
               Sampler test, std::vector<T> lib) {
    Benchmark b;
    b.name = std::move(name);
    b.suite = std::move(suite);
    b.expression = std::move(expr);
    b.d = d;
    b.truth = f;
    b.train = train;
    b.test = test;
    b.y_kinds = y_side(lib);
    b.x_kinds = std::move(lib);
    return b;
}

std::vector<Benchmark> build_registry() {
    std::vector<Benchmark> r;
    auto add = [&](std::string name, std::string suite, std::string expr, int d, GroundTruth f, Sampler s,
                   std::vector<T> lib = kBase) {
        r.push_back(make(std::move(name), std::move(suite), std::move(expr), d, f, s, s, std::move(lib)));
    };

    // Nguyen
    add("Nguyen-1", "nguyen", "x^3 + x^2 + x", 1,
        [](std::span<const double> x) { return p(x[0], 3) + p(x[0], 2) + x[0]; }, U(-1, 1, 20));
    add("Nguyen-2", "nguyen", "x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) { return p(x[0], 4) + p(x[0], 3) + p(x[0], 2) + x[0]; }, U(-1, 1, 20));
    add("Nguyen-3", "nguyen", "x^5 + x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) { return p(x[0], 5) + p(x[0], 4) + p(x[0], 3) + p(x[0], 2) + x[0]; },
        U(-1, 1, 20));
    add("Nguyen-4", "nguyen", "x^6 + x^5 + x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) {
            return p(x[0], 6) + p(x[0], 5) + p(x[0], 4) + p(x[0], 3) + p(x[0], 2) + x[0];
        },
        U(-1, 1, 20));
    add("Nguyen-5", "nguyen", "sin(x^2)*cos(x) - 1", 1,
        [](std::span<const double> x) { return std::sin(x[0] * x[0]) * std::cos(x[0]) - 1.0; }, U(-1, 1, 20));
    add("Nguyen-6", "nguyen", "sin(x) + sin(x + x^2)", 1,
        [](std::span<const double> x) { return std::sin(x[0]) + std::sin(x[0] + x[0] * x[0]); }, U(-1, 1, 20));
    add("Nguyen-7", "nguyen", "ln(x + 1) + ln(x^2 + 1)", 1,
        [](std::span<const double> x) { return std::log(x[0] + 1.0) + std::log(x[0] * x[0] + 1.0); }, U(0, 2, 20));
    add("Nguyen-8", "nguyen", "sqrt(x)", 1, [](std::span<const double> x) { return std::sqrt(x[0]); }, U(0, 4, 20));
    add("Nguyen-9", "nguyen", "sin(x1) + sin(x2^2)", 2,
        [](std::span<const double> x) { return std::sin(x[0]) + std::sin(x[1] * x[1]); }, U(0, 1, 20));
    add("Nguyen-10", "nguyen", "2*sin(x1)*cos(x2)", 2,
        [](std::span<const double> x) { return 2.0 * std::sin(x[0]) * std::cos(x[1]); }, U(0, 1, 20));
    add("Nguyen-11", "nguyen", "x1^x2", 2, [](std::span<const double> x) { return std::pow(x[0], x[1]); },
        U(0, 1, 20));
    add("Nguyen-12", "nguyen", "x1^4 - x1^3 + 0.5*x2^2 - x2", 2,
        [](std::span<const double> x) { return p(x[0], 4) - p(x[0], 3) + 0.5 * x[1] * x[1] - x[1]; }, U(0, 1, 20));
    add("Nguyen-12*", "nguyen", "x1^4 - x1^3 + 0.5*x2^2 - x2", 2,
        [](std::span<const double> x) { return p(x[0], 4) - p(x[0], 3) + 0.5 * x[1] * x[1] - x[1]; },
        U(0, 10, 20));

    // Jin
    const std::vector<T> jin = with(without(kBase, {T::Ln}), {T::Square, T::Cube});
    auto add_jin = [&](std::string name, std::string expr, GroundTruth f) {
        r.push_back(make(std::move(name), "jin", std::move(expr), 2, f, U(-3, 3, 100), U(-3, 3, 30), jin));
    };
    add_jin("Jin-1", "2.5*x1^4 - 1.3*x1^3 + 0.5*x2^2 - 1.7*x2", [](std::span<const double> x) {
        return 2.5 * p(x[0], 4) - 1.3 * p(x[0], 3) + 0.5 * x[1] * x[1] - 1.7 * x[1];
    });
    add_jin("Jin-2", "8*x1^2 + 8*x2^3 - 15",
            [](std::span<const double> x) { return 8.0 * x[0] * x[0] + 8.0 * p(x[1], 3) - 15.0; });
    add_jin("Jin-3", "0.2*x1^3 + 0.5*x2^3 - 1.2*x2 - 0.5*x1", [](std::span<const double> x) {
        return 0.2 * p(x[0], 3) + 0.5 * p(x[1], 3) - 1.2 * x[1] - 0.5 * x[0];
    });
    add_jin("Jin-4", "1.5*exp(x1) + 5*cos(x2)",
            [](std::span<const double> x) { return 1.5 * std::exp(x[0]) + 5.0 * std::cos(x[1]); });
    add_jin("Jin-5", "6*sin(x1)*cos(x2)",
            [](std::span<const double> x) { return 6.0 * std::sin(x[0]) * std::cos(x[1]); });
    add_jin("Jin-6", "1.35*x1*x2 + 5.5*sin((x1 - 1)*(x2 - 1))", [](std::span<const double> x) {
        return 1.35 * x[0] * x[1] + 5.5 * std::sin((x[0] - 1.0) * (x[1] - 1.0));
    });

    // Neat
    add("Neat-1", "neat", "x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) { return p(x[0], 4) + p(x[0], 3) + p(x[0], 2) + x[0]; }, U(-1, 1, 20));
    add("Neat-2", "neat", "x^5 + x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) { return p(x[0], 5) + p(x[0], 4) + p(x[0], 3) + p(x[0], 2) + x[0]; },
        U(-1, 1, 20));
    add("Neat-3", "neat", "sin(x^2)*cos(x) - 1", 1,
        [](std::span<const double> x) { return std::sin(x[0] * x[0]) * std::cos(x[0]) - 1.0; }, U(-1, 1, 20));
    add("Neat-4", "neat", "ln(x + 1) + ln(x^2 + 1)", 1,
        [](std::span<const double> x) { return std::log(x[0] + 1.0) + std::log(x[0] * x[0] + 1.0); }, U(0, 2, 20));
    add("Neat-5", "neat", "2*sin(x1)*cos(x2)", 2,
        [](std::span<const double> x) { return 2.0 * std::sin(x[0]) * std::cos(x[1]); }, U(-1, 1, 100));
    r.push_back(make(
        "Neat-6", "neat", "sum_{k=1}^{x} 1/k", 1,
        [](std::span<const double> x) {
            double s = 0.0;
            const double top = std::floor(x[0]);
            for (double k = 1.0; k <= top; k += 1.0) {
                s += 1.0 / k;
            }
            return s;
        },
        E(1, 50, 50), E(1, 120, 120), {T::One, T::Identity, T::Reciprocal, T::Neg, T::Sqrt}));
    add("Neat-7", "neat", "2 - 2.1*cos(9.8*x1)*sin(1.3*x2)", 2,
        [](std::span<const double> x) { return 2.0 - 2.1 * std::cos(9.8 * x[0]) * std::sin(1.3 * x[1]); },
        E(-50, 50, 100000), with(kBase, {T::Tan, T::Tanh, T::Square, T::Cube, T::Sqrt}));
    add("Neat-8", "neat", "exp(-(x1 - 1)^2)/(1.2 + (x2 - 2.5)^2)", 2,
        [](std::span<const double> x) {
            return std::exp(-(x[0] - 1.0) * (x[0] - 1.0)) / (1.2 + (x[1] - 2.5) * (x[1] - 2.5));
        },
        U(0.3, 4, 100), {T::One, T::Identity, T::Exp, T::NegExp, T::Square});
    add("Neat-9", "neat", "1/(1 + x1^-4) + 1/(1 + x2^-4)", 2,
        [](std::span<const double> x) { return 1.0 / (1.0 + p(x[0], -4)) + 1.0 / (1.0 + p(x[1], -4)); },
        E(-5, 5, 21));

    // Livermore
    add("Livermore-1", "livermore", "1/3 + x + sin(x^2)", 1,
        [](std::span<const double> x) { return 1.0 / 3.0 + x[0] + std::sin(x[0] * x[0]); }, U(-10, 10, 1000),
        without(kBase, {T::Exp}));
    r.back().y_kinds = kBaseY;
    add("Livermore-2", "livermore", "sin(x^2)*cos(x) - 2", 1,
        [](std::span<const double> x) { return std::sin(x[0] * x[0]) * std::cos(x[0]) - 2.0; }, U(-1, 1, 20));
    add("Livermore-3", "livermore", "sin(x^3)*cos(x^2) - 1", 1,
        [](std::span<const double> x) { return std::sin(p(x[0], 3)) * std::cos(x[0] * x[0]) - 1.0; },
        U(-1, 1, 20));
    add("Livermore-4", "livermore", "ln(x + 1) + ln(x^2 + 1) + ln(x)", 1,
        [](std::span<const double> x) {
            return std::log(x[0] + 1.0) + std::log(x[0] * x[0] + 1.0) + std::log(x[0]);
        },
        U(0, 2, 20));
    add("Livermore-5", "livermore", "x1^4 - x1^3 + x1^2 - x2", 2,
        [](std::span<const double> x) { return p(x[0], 4) - p(x[0], 3) + p(x[0], 2) - x[1]; }, U(0, 1, 20));
    add("Livermore-6", "livermore", "4*x^4 + 3*x^3 + 2*x^2 + x", 1,
        [](std::span<const double> x) { return 4.0 * p(x[0], 4) + 3.0 * p(x[0], 3) + 2.0 * p(x[0], 2) + x[0]; },
        U(-1, 1, 20));
    add("Livermore-7", "livermore", "sinh(x)", 1, [](std::span<const double> x) { return std::sinh(x[0]); },
        U(-1, 1, 20));
    add("Livermore-8", "livermore", "cosh(x)", 1, [](std::span<const double> x) { return std::cosh(x[0]); },
        U(-1, 1, 20));
    add("Livermore-9", "livermore", "x^9 + x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) {
            double s = 0.0;
            for (int k = 1; k <= 9; ++k) {
                s += p(x[0], k);
            }
            return s;
        },
        U(-1, 1, 20));
    add("Livermore-10", "livermore", "6*sin(x1)*cos(x2)", 2,
        [](std::span<const double> x) { return 6.0 * std::sin(x[0]) * std::cos(x[1]); }, U(0, 1, 20));
    add("Livermore-11", "livermore", "x1^2*x1^2/(x1 + x2)", 2,
        [](std::span<const double> x) { return x[0] * x[0] * x[0] * x[0] / (x[0] + x[1]); }, U(-1, 1, 50));
    add("Livermore-12", "livermore", "x1^5/x2^3", 2,
        [](std::span<const double> x) { return p(x[0], 5) / p(x[1], 3); }, U(-1, 1, 50));
    add("Livermore-13", "livermore", "x^(1/3)", 1, [](std::span<const double> x) { return std::cbrt(x[0]); },
        U(0, 4, 20));
    add("Livermore-14", "livermore", "x^3 + x^2 + x + sin(x) + sin(x^2)", 1,
        [](std::span<const double> x) {
            return p(x[0], 3) + p(x[0], 2) + x[0] + std::sin(x[0]) + std::sin(x[0] * x[0]);
        },
        U(-1, 1, 20));
    add("Livermore-15", "livermore", "x^(1/5)", 1, [](std::span<const double> x) { return std::pow(x[0], 0.2); },
        U(0, 4, 20));
    add("Livermore-16", "livermore", "x^(2/5)", 1, [](std::span<const double> x) { return std::pow(x[0], 0.4); },
        U(0, 4, 20));
    add("Livermore-17", "livermore", "4*sin(x1)*cos(x2)", 2,
        [](std::span<const double> x) { return 4.0 * std::sin(x[0]) * std::cos(x[1]); }, U(0, 1, 20));
    add("Livermore-18", "livermore", "sin(x^2)*cos(x) - 5", 1,
        [](std::span<const double> x) { return std::sin(x[0] * x[0]) * std::cos(x[0]) - 5.0; }, U(-1, 1, 20));
    add("Livermore-19", "livermore", "x^5 + x^4 + x^2 + x", 1,
        [](std::span<const double> x) { return p(x[0], 5) + p(x[0], 4) + p(x[0], 2) + x[0]; }, U(-1, 1, 20));
    add("Livermore-20", "livermore", "exp(-x^2)", 1, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); },
        U(-1, 1, 20));
    add("Livermore-21", "livermore", "x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x", 1,
        [](std::span<const double> x) {
            double s = 0.0;
            for (int k = 1; k <= 8; ++k) {
                s += p(x[0], k);
            }
            return s;
        },
        U(-1, 1, 20));
    add("Livermore-22", "livermore", "exp(-0.5*x^2)", 1,
        [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); }, U(-1, 1, 20));

    // SymSet
    add("SymSet-1", "symset", "x*sinh(x) - 4/5", 1, [](std::span<const double> x) { return x[0] * std::sinh(x[0]) - 0.8; },
        U(-1, 1, 20), with(without(kBase, {T::Ln}), {T::NegExp}));
    add("SymSet-2", "symset", "(x^5 - 3*x^4 - 2.8*x + 5)^-1", 1,
        [](std::span<const double> x) { return 1.0 / (p(x[0], 5) - 3.0 * p(x[0], 4) - 2.8 * x[0] + 5.0); },
        U(-1, 1, 20), with(kBase, {T::Reciprocal}));
    add("SymSet-3", "symset", "(x^4 - 1.2*x^2 + 11.5)^(1/3)", 1,
        [](std::span<const double> x) { return std::cbrt(p(x[0], 4) - 1.2 * x[0] * x[0] + 11.5); }, U(-1, 1, 20),
        with(kBase, {T::Square, T::Cube}));
    add("SymSet-4", "symset", "0.8 - cos(x) + 4.2*exp(x)*sin(x^2)", 1,
        [](std::span<const double> x) { return 0.8 - std::cos(x[0]) + 4.2 * std::exp(x[0]) * std::sin(x[0] * x[0]); },
        U(-3, 3, 20));
    add("SymSet-5", "symset", "4.5*x1^2 + x1*x2^3 - 1.7*x2 - 3.1", 2,
        [](std::span<const double> x) { return 4.5 * x[0] * x[0] + x[0] * p(x[1], 3) - 1.7 * x[1] - 3.1; },
        U(-1, 1, 20));
    add("SymSet-6", "symset", "5/(3*x1 - x2^3)", 2,
        [](std::span<const double> x) { return 5.0 / (3.0 * x[0] - p(x[1], 3)); }, U(-1, 1, 20),
        with(kBase, {T::Reciprocal}));
    add("SymSet-7", "symset", "ln(x1^3 + 4*x1*x2)", 2,
        [](std::span<const double> x) { return std::log(p(x[0], 3) + 4.0 * x[0] * x[1]); }, U(0, 2, 20));
    add("SymSet-8", "symset", "sqrt(5*x1^5 + 14*x1^3*x2^4 - 2*x2 + 7)", 2,
        [](std::span<const double> x) {
            return std::sqrt(5.0 * p(x[0], 5) + 14.0 * p(x[0], 3) * p(x[1], 4) - 2.0 * x[1] + 7.0);
        },
        U(-1, 1, 20), with(kBase, {T::Square, T::Cube}));
    add("SymSet-9", "symset", "(2*x1 + x2)^(-2/3)", 2,
        [](std::span<const double> x) { return std::pow(2.0 * x[0] + x[1], -2.0 / 3.0); }, U(0, 2, 20));
    add("SymSet-10", "symset", "1.5*cos(x1)*ln(x1*x2) - 2.5", 2,
        [](std::span<const double> x) { return 1.5 * std::cos(x[0]) * std::log(x[0] * x[1]) - 2.5; }, U(0, 1, 20));
    add("SymSet-11", "symset", "sqrt(2*cos(x1) + 30*exp(x2)) + 4", 2,
        [](std::span<const double> x) { return std::sqrt(2.0 * std::cos(x[0]) + 30.0 * std::exp(x[1])) + 4.0; },
        U(-1, 1, 20), with(kBase, {T::Square}));
    r.back().m_psi = 2;
    add("SymSet-12", "symset", "0.4*x1^4 + 6.2*x2 - 3.5*x1*x3 - 4.5", 3,
        [](std::span<const double> x) { return 0.4 * p(x[0], 4) + 6.2 * x[1] - 3.5 * x[0] * x[2] - 4.5; },
        U(-1, 1, 20));
    add("SymSet-13", "symset", "2*x2/(x1 + x3)", 3,
        [](std::span<const double> x) { return 2.0 * x[1] / (x[0] + x[2]); }, U(0, 1, 20));
    add("SymSet-14", "symset", "x1*x2*x3/(x1 + x2 + x3)", 3,
        [](std::span<const double> x) { return x[0] * x[1] * x[2] / (x[0] + x[1] + x[2]); }, U(0, 2, 20));
    add("SymSet-15", "symset", "(x1 + x2)^x3", 3, [](std::span<const double> x) { return std::pow(x[0] + x[1], x[2]); },
        U(0, 1, 20));
    add("SymSet-16", "symset", "exp(2.6*x1 - ln(x2) + 9.8*cos(x3))", 3,
        [](std::span<const double> x) { return std::exp(2.6 * x[0] - std::log(x[1]) + 9.8 * std::cos(x[2])); },
        U(0, 1, 20));
    add("SymSet-17", "symset", "ln(0.2*exp(x1 + x2) + 0.5*cos(x3^2))", 3,
        [](std::span<const double> x) {
            return std::log(0.2 * std::exp(x[0] + x[1]) + 0.5 * std::cos(x[2] * x[2]));
        },
        U(0, 1, 20));
    return r;
}

} // namespace

std::string Sampler::describe() const {
    std::ostringstream out;
    out << (kind == SamplerKind::Uniform ? "U(" : "E(") << lo << ',' << hi << ',' << count << ')';
    return out.str();
}

MappingTable Benchmark::table_x() const { return MappingTable::canonical(x_kinds, d); }
MappingTable Benchmark::table_y() const { return MappingTable::canonical(y_kinds, 1); }

const std::vector<Benchmark>& benchmark_registry() {
    static const std::vector<Benchmark> registry = build_registry();
    return registry;
}

const Benchmark& find_benchmark(std::string_view name) {
    const std::string key = name == "Nguyen-12star" ? std::string("Nguyen-12*") : std::string(name);
    for (const Benchmark& b : benchmark_registry()) {
        if (b.name == key) {
            return b;
        }
    }
    throw std::out_of_range("unknown benchmark: " + std::string(name));
}

std::vector<std::string> suite_names() { return {"nguyen", "jin", "neat", "livermore", "symset"}; }

std::vector<std::string> suite_members(std::string_view suite) {
    std::vector<std::string> out;
    for (const Benchmark& b : benchmark_registry()) {
        if (suite == "all" || b.suite == suite) {
            out.push_back(b.name);
        }
    }
    if (out.empty()) {
        throw std::out_of_range("unknown suite: " + std::string(suite));
    }
    return out;
}

double ground_truth(std::string_view name, std::span<const double> x) {
    const Benchmark& b = find_benchmark(name);
    if (static_cast<int>(x.size()) != b.d) {
        throw std::invalid_argument("ground_truth: wrong input dimension for " + b.name);
    }
    return b.truth(x);
}

Matrix even_grid(const Sampler& s, int d) {
    std::size_t per_axis = static_cast<std::size_t>(s.count);
    if (d > 1 && std::pow(static_cast<double>(s.count), d) > 1e6) {
        per_axis = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(s.count), 1.0 / d) - 1e-9));
    }
    std::vector<double> axis(per_axis);
    for (std::size_t i = 0; i < per_axis; ++i) {
        axis[i] = per_axis == 1 ? s.lo : s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(per_axis - 1);
    }
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) {
        total *= per_axis;
    }
    Matrix grid(total, static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rest = i;
        for (int k = d - 1; k >= 0; --k) {
            grid(i, static_cast<std::size_t>(k)) = axis[rest % per_axis];
            rest /= per_axis;
        }
    }
    return grid;
}

std::uint64_t dataset_seed(std::string_view name, Role role, std::uint64_t seed) {
    return mix_seed(mix_seed(seed, fnv1a(name)), role == Role::Train ? 0x7472u : 0x7465u);
}

Dataset sample_dataset(const Benchmark& b, Role role, std::uint64_t seed) {
    const Sampler& s = role == Role::Train ? b.train : b.test;
    const std::size_t d = static_cast<std::size_t>(b.d);
    Dataset data;
    if (s.kind == SamplerKind::Even) {
        const Matrix grid = even_grid(s, b.d);
        std::vector<std::size_t> keep;
        std::vector<double> ys;
        for (std::size_t i = 0; i < grid.rows(); ++i) {
            const double y = b.truth(grid.row(i));
            if (std::isfinite(y)) {
                keep.push_back(i);
                ys.push_back(y);
            }
        }
        data.x = Matrix(keep.size(), d);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                data.x(i, k) = grid(keep[i], k);
            }
        }
        data.y = std::move(ys);
        return data;
    }
    Rng rng(dataset_seed(b.name, role, seed));
    const std::size_t n = static_cast<std::size_t>(s.count);
    data.x = Matrix(n, d);
    data.y.resize(n);
    std::vector<double> point(d);
    for (std::size_t i = 0; i < n; ++i) {
        double y = 0.0;
        do {
            for (double& v : point) {
                v = rng.uniform(s.lo, s.hi);
            }
            y = b.truth(point);
        } while (!std::isfinite(y));
        for (std::size_t k = 0; k < d; ++k) {
            data.x(i, k) = point[k];
        }
        data.y[i] = y;
    }
    return data;
}

std::string file_stem(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '*') {
            out += "star";
        } else {
            out += c;
        }
    }
    return out;
}

} // namespace gsr

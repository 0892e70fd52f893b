#include "gsr/transform.hpp"

#include <cmath>

namespace gsr {

double apply_transform(Transform t, double a) noexcept {
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
    return std::nan("");
}

std::string_view transform_name(Transform t) noexcept {
    switch (t) {
    case Transform::One: return "one";
    case Transform::Identity: return "id";
    case Transform::Reciprocal: return "inv";
    case Transform::Square: return "sq";
    case Transform::Cube: return "cube";
    case Transform::Cos: return "cos";
    case Transform::Sin: return "sin";
    case Transform::Exp: return "exp";
    case Transform::Ln: return "ln";
    case Transform::Sqrt: return "sqrt";
    case Transform::NegExp: return "nexp";
    case Transform::Neg: return "neg";
    case Transform::Tan: return "tan";
    case Transform::Tanh: return "tanh";
    }
    return "?";
}

std::optional<Transform> transform_from_name(std::string_view name) noexcept {
    for (Transform t : kAllTransforms) {
        if (transform_name(t) == name) {
            return t;
        }
    }
    return std::nullopt;
}

bool is_power_transform(Transform t) noexcept {
    return t == Transform::Reciprocal || t == Transform::Square || t == Transform::Cube || t == Transform::Sqrt;
}

} // namespace gsr

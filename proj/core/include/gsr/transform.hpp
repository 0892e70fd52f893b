#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gsr {

enum class Transform : std::uint8_t {
    One,
    Identity,
    Reciprocal,
    Square,
    Cube,
    Cos,
    Sin,
    Exp,
    Ln,
    Sqrt,
    NegExp,
    Neg,
    Tan,
    Tanh,
};

inline constexpr std::array<Transform, 14> kAllTransforms{
    Transform::One, Transform::Identity, Transform::Reciprocal, Transform::Square, Transform::Cube,
    Transform::Cos, Transform::Sin,      Transform::Exp,        Transform::Ln,     Transform::Sqrt,
    Transform::NegExp, Transform::Neg,   Transform::Tan,        Transform::Tanh,
};

// Never throws. Inputs outside the natural domain give inf or NaN.
double apply_transform(Transform t, double a) noexcept;

// Short stable identifier, e.g. "cos", "sq", "nexp".
std::string_view transform_name(Transform t) noexcept;
std::optional<Transform> transform_from_name(std::string_view name) noexcept;

bool is_power_transform(Transform t) noexcept;

} // namespace gsr

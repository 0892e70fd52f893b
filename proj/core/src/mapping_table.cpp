#include "gsr/mapping_table.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gsr {

MappingTable::MappingTable(std::vector<Transform> transforms, int d, int nv_min, int nv_max)
    : transforms_(std::move(transforms)), d_(d), nv_min_(nv_min), nv_max_(nv_max) {
    if (transforms_.size() < 2 || transforms_[0] != Transform::One || transforms_[1] != Transform::Identity) {
        throw std::invalid_argument("MappingTable: codes 0 and 1 must be One and Identity");
    }
    for (std::size_t i = 0; i < transforms_.size(); ++i) {
        for (std::size_t j = i + 1; j < transforms_.size(); ++j) {
            if (transforms_[i] == transforms_[j]) {
                throw std::invalid_argument("MappingTable: duplicate transform " + std::string(transform_name(transforms_[i])));
            }
        }
    }
    if (d_ < 1) {
        throw std::invalid_argument("MappingTable: d must be positive");
    }
    if (nv_min_ < 1 || nv_max_ < nv_min_) {
        throw std::invalid_argument("MappingTable: bad variable-column range");
    }
}

MappingTable MappingTable::canonical(std::span<const Transform> kinds, int d, int nv_min, int nv_max) {
    std::vector<Transform> ordered{Transform::One, Transform::Identity};
    for (Transform t : kAllTransforms) {
        if (t == Transform::One || t == Transform::Identity) {
            continue;
        }
        if (std::find(kinds.begin(), kinds.end(), t) != kinds.end()) {
            ordered.push_back(t);
        }
    }
    return MappingTable(std::move(ordered), d, nv_min, nv_max);
}

Transform MappingTable::at(int code) const {
    if (code < 0 || code >= size()) {
        throw std::out_of_range("MappingTable: code " + std::to_string(code) + " out of range");
    }
    return transforms_[static_cast<std::size_t>(code)];
}

std::optional<int> MappingTable::code_of(Transform t) const noexcept {
    for (std::size_t i = 0; i < transforms_.size(); ++i) {
        if (transforms_[i] == t) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

std::vector<int> MappingTable::all_codes() const {
    std::vector<int> codes(transforms_.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        codes[i] = static_cast<int>(i);
    }
    return codes;
}

std::vector<int> MappingTable::codes_of(std::span<const Transform> kinds) const {
    std::vector<int> codes;
    for (std::size_t i = 0; i < transforms_.size(); ++i) {
        if (std::find(kinds.begin(), kinds.end(), transforms_[i]) != kinds.end()) {
            codes.push_back(static_cast<int>(i));
        }
    }
    return codes;
}

} // namespace gsr

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gsr/transform.hpp"

namespace gsr {

// Maps integer codes to transforms. Code 0 is always One and code 1 is always
// Identity. Matrices store codes, so the same matrix reads identically under
// any subset of codes drawn from one table.
class MappingTable {
public:
    // {One, Identity} over one variable.
    MappingTable() : MappingTable({Transform::One, Transform::Identity}, 1) {}
    MappingTable(std::vector<Transform> transforms, int d, int nv_min = 2, int nv_max = 5);

    // Builds a table holding the given transforms in canonical catalog order.
    // One and Identity are always included.
    static MappingTable canonical(std::span<const Transform> kinds, int d, int nv_min = 2, int nv_max = 5);

    int size() const noexcept { return static_cast<int>(transforms_.size()); }
    int d() const noexcept { return d_; }
    int nv_min() const noexcept { return nv_min_; }
    int nv_max() const noexcept { return nv_max_; }

    Transform at(int code) const;
    std::optional<int> code_of(Transform t) const noexcept;
    bool contains(Transform t) const noexcept { return code_of(t).has_value(); }

    std::vector<int> all_codes() const;
    // Codes of the listed transforms that this table holds, in code order.
    std::vector<int> codes_of(std::span<const Transform> kinds) const;

    const std::vector<Transform>& transforms() const noexcept { return transforms_; }

    bool operator==(const MappingTable&) const = default;

private:
    std::vector<Transform> transforms_;
    int d_;
    int nv_min_;
    int nv_max_;
};

} // namespace gsr

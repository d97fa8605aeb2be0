#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace dbtrail {

/// Dense 32-bit surrogate for one row; assigned from 0 and never reused.
struct NodeId {
    std::uint32_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint32_t v) : value(v) {}

    constexpr std::size_t index() const { return value; }
    constexpr auto operator<=>(const NodeId&) const = default;
};

} // namespace dbtrail

template <>
struct std::hash<dbtrail::NodeId> {
    std::size_t operator()(dbtrail::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

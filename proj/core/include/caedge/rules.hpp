#pragma once

#include "caedge/grid.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace caedge {

/// The nine cells of the Moore neighbourhood, in rule-weight order: the centre
/// has weight 1, then weights double going clockwise from east.
enum class Neighbor : std::uint8_t {
    Center,     // 1
    East,       // 2
    SouthEast,  // 4
    South,      // 8
    SouthWest,  // 16
    West,       // 32
    NorthWest,  // 64
    North,      // 128
    NorthEast,  // 256
};

inline constexpr std::array<Neighbor, 9> kAllNeighbors{
    Neighbor::Center, Neighbor::East,     Neighbor::SouthEast,
    Neighbor::South,  Neighbor::SouthWest, Neighbor::West,
    Neighbor::NorthWest, Neighbor::North, Neighbor::NorthEast};

constexpr std::uint16_t weight_of(Neighbor n) {
    return static_cast<std::uint16_t>(1U << static_cast<unsigned>(n));
}

constexpr NeighborOffset offset_of(Neighbor n) {
    constexpr std::array<NeighborOffset, 9> table{{
        {0, 0}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1},
    }};
    return table[static_cast<std::size_t>(n)];
}

std::string_view short_name(Neighbor n);

inline constexpr unsigned kRuleCount = 512;

/// The four single-step edge rules: centre plus the three neighbours on one side.
inline constexpr std::array<unsigned, 4> kEdgeRules{29, 113, 263, 449};

/// A uniform linear rule: next state is the XOR of the tapped neighbours.
class LinearRule {
public:
    /// Throws InvalidRuleError unless 0 <= number <= 511.
    explicit LinearRule(long long number);

    unsigned number() const noexcept { return number_; }
    bool has_tap(Neighbor n) const noexcept { return (number_ & weight_of(n)) != 0; }
    std::size_t tap_count() const noexcept;
    std::vector<Neighbor> taps() const;
    std::vector<NeighborOffset> tap_offsets() const;

    auto operator<=>(const LinearRule&) const = default;

private:
    std::uint16_t number_;
};

LinearRule rule_from_number(long long n);

/// Sum of the weights of `taps`; duplicates count once. Throws InvalidRuleError
/// for an offset outside the 3x3 neighbourhood.
unsigned rule_number(std::span<const NeighborOffset> taps);

/// Rule whose taps are those of `rule` rotated 90 degrees clockwise, so that
/// rot90_cw(step(g, rule)) == step(rot90_cw(g), rotate_cw(rule)).
LinearRule rotate_cw(LinearRule rule);

struct StepOptions {
    /// Row-partitioned worker threads; output does not depend on this value.
    unsigned workers = 1;
};

/// One synchronous update, computed as XOR of word-shifted rows.
BinaryGrid step(const BinaryGrid& g, LinearRule rule, Boundary bc, StepOptions opts = {});

BinaryGrid evolve(const BinaryGrid& g, LinearRule rule, Boundary bc, std::size_t steps,
                  StepOptions opts = {});

/// Cell-by-cell reference of step(): a double loop over sample().
BinaryGrid naive_step(const BinaryGrid& g, LinearRule rule, Boundary bc);

}  // namespace caedge

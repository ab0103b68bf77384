#pragma once

// Word-level building blocks shared by shift() and the packed rule step.

#include "caedge/grid.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace caedge::detail {

using Word = BinaryGrid::Word;

/// Source index backing position `i` on an axis of length `n`, where `i` is in
/// [-1, n]. nullopt means the ghost is the constant 0 (Null boundary).
inline std::optional<std::size_t> resolve_axis(std::ptrdiff_t i, std::size_t n, Boundary bc) {
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
    if (i >= 0 && i <= last) {
        return static_cast<std::size_t>(i);
    }
    switch (bc) {
        case Boundary::Null:
            return std::nullopt;
        case Boundary::Adiabatic:
            return i < 0 ? 0 : static_cast<std::size_t>(last);
        case Boundary::Reflexive:
            if (n == 1) {
                return 0;
            }
            return i < 0 ? 1 : static_cast<std::size_t>(last - 1);
    }
    return std::nullopt;
}

inline bool bit_at(std::span<const Word> row, std::size_t c) {
    return (row[c / BinaryGrid::kWordBits] >> (c % BinaryGrid::kWordBits)) & 1U;
}

/// dst ^= (src shifted so that dst column c receives src column c + dc), with
/// the single column that falls off the edge filled according to `bc`.
/// `dc` must be -1, 0 or 1. Leaves dst padding bits zero.
inline void xor_column_shifted(std::span<const Word> src, int dc, Boundary bc, std::size_t width,
                               Word tail_mask, std::span<Word> dst) {
    constexpr std::size_t kTop = BinaryGrid::kWordBits - 1;
    const std::size_t words = src.size();
    if (dc == 0) {
        for (std::size_t i = 0; i < words; ++i) {
            dst[i] ^= src[i];
        }
        return;
    }
    if (dc > 0) {
        // Column c reads c + 1: move bits toward the least-significant end.
        for (std::size_t i = 0; i + 1 < words; ++i) {
            dst[i] ^= (src[i] >> 1) | (src[i + 1] << kTop);
        }
        dst[words - 1] ^= src[words - 1] >> 1;
        if (const auto ghost = resolve_axis(static_cast<std::ptrdiff_t>(width), width, bc);
            ghost && bit_at(src, *ghost)) {
            const std::size_t c = width - 1;
            dst[c / BinaryGrid::kWordBits] ^= Word{1} << (c % BinaryGrid::kWordBits);
        }
        return;
    }
    // Column c reads c - 1: move bits toward the most-significant end.
    for (std::size_t i = words - 1; i > 0; --i) {
        dst[i] ^= (src[i] << 1) | (src[i - 1] >> kTop);
    }
    dst[0] ^= src[0] << 1;
    dst[words - 1] &= tail_mask;
    if (const auto ghost = resolve_axis(-1, width, bc); ghost && bit_at(src, *ghost)) {
        dst[0] ^= Word{1};
    }
}

}  // namespace caedge::detail

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace caedge {

/// How the grid is extended by one ghost cell on every side.
enum class Boundary : std::uint8_t {
    Null,       ///< ghost cells read 0
    Adiabatic,  ///< ghost duplicates the nearest edge cell (per-axis clamp)
    Reflexive,  ///< ghost mirrors the cell one step inside (per-axis reflect-101)
};

inline constexpr std::array<Boundary, 3> kAllBoundaries{Boundary::Null, Boundary::Adiabatic,
                                                        Boundary::Reflexive};

std::string_view to_string(Boundary bc);
std::optional<Boundary> parse_boundary(std::string_view name);

/// Relative position of a neighbour inside the 3x3 Moore neighbourhood.
struct NeighborOffset {
    int dr = 0;
    int dc = 0;

    constexpr bool valid() const { return dr >= -1 && dr <= 1 && dc >= -1 && dc <= 1; }
    constexpr auto operator<=>(const NeighborOffset&) const = default;
};

/// Two-state rectangular grid, bit-packed row-major. Bit k of word j in a row
/// holds column 64*j + k, so the least-significant bit is the leftmost cell.
/// Bits past `width` in each row's last word are always zero.
///
/// Grids are values: every operation below returns a fresh grid.
class BinaryGrid {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BinaryGrid(std::size_t width, std::size_t height, bool fill = false);

    /// Adopts `words` (height * words_for(width) entries). Padding bits are cleared.
    static BinaryGrid from_words(std::size_t width, std::size_t height, std::vector<Word> words);

    static constexpr std::size_t words_for(std::size_t width) {
        return (width + kWordBits - 1) / kWordBits;
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t words_per_row() const noexcept { return words_per_row_; }
    std::size_t cell_count() const noexcept { return width_ * height_; }

    /// Mask of the valid bits in the last word of each row.
    Word tail_mask() const noexcept;

    bool at(std::size_t r, std::size_t c) const;
    bool operator()(std::size_t r, std::size_t c) const noexcept {
        return (words_[r * words_per_row_ + c / kWordBits] >> (c % kWordBits)) & 1U;
    }

    std::span<const Word> row(std::size_t r) const noexcept {
        return {words_.data() + r * words_per_row_, words_per_row_};
    }
    std::span<const Word> words() const noexcept { return words_; }

    std::size_t popcount() const noexcept;
    bool none() const noexcept;

    bool operator==(const BinaryGrid&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::size_t words_per_row_;
    std::vector<Word> words_;
};

/// Mutable staging area for assembling a BinaryGrid cell by cell.
class GridBuilder {
public:
    GridBuilder(std::size_t width, std::size_t height, bool fill = false);
    explicit GridBuilder(const BinaryGrid& start);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    void set(std::size_t r, std::size_t c, bool value);
    bool get(std::size_t r, std::size_t c) const;

    BinaryGrid build() &&;

private:
    std::size_t width_;
    std::size_t height_;
    std::size_t words_per_row_;
    std::vector<BinaryGrid::Word> words_;
};

BinaryGrid new_grid(std::size_t width, std::size_t height, bool fill);

/// Cell value at (r, c) where each index may sit on the ghost ring (-1 or n).
bool sample(const BinaryGrid& g, std::ptrdiff_t r, std::ptrdiff_t c, Boundary bc);

/// out(r, c) == sample(g, r + off.dr, c + off.dc, bc), computed with word shifts.
BinaryGrid shift(const BinaryGrid& g, NeighborOffset off, Boundary bc);

BinaryGrid xor_grids(const BinaryGrid& a, const BinaryGrid& b);
BinaryGrid or_grids(const BinaryGrid& a, const BinaryGrid& b);
BinaryGrid and_grids(const BinaryGrid& a, const BinaryGrid& b);
BinaryGrid complement(const BinaryGrid& g);

/// 90 degree clockwise rotation: out(c, height - 1 - r) == g(r, c).
BinaryGrid rot90_cw(const BinaryGrid& g);

using RowList = std::vector<std::vector<int>>;

BinaryGrid from_rows(const RowList& rows);
RowList to_rows(const BinaryGrid& g);

// Text fixtures: rows of '0'/'1' characters separated by newlines, grids
// separated by blank lines.
BinaryGrid parse_grid_text(std::string_view text);
std::vector<BinaryGrid> parse_grid_blocks(std::string_view text);
std::string format_grid_text(const BinaryGrid& g);

}  // namespace caedge

#include "caedge/grid.hpp"

#include "caedge/error.hpp"
#include "row_kernels.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

namespace caedge {

namespace {

constexpr std::size_t kBits = BinaryGrid::kWordBits;

void require_dims(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) {
        throw InvalidDimensionError("grid dimensions must be at least 1x1, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
}

BinaryGrid::Word mask_for(std::size_t width) {
    const std::size_t used = width % kBits;
    return used == 0 ? ~BinaryGrid::Word{0} : (BinaryGrid::Word{1} << used) - 1;
}

void require_same_shape(const BinaryGrid& a, const BinaryGrid& b, const char* op) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
    }
}

template <typename Op>
BinaryGrid combine_words(const BinaryGrid& a, const BinaryGrid& b, const char* name, Op op) {
    require_same_shape(a, b, name);
    std::vector<BinaryGrid::Word> out(a.words().size());
    std::ranges::transform(a.words(), b.words(), out.begin(), op);
    return BinaryGrid::from_words(a.width(), a.height(), std::move(out));
}

}  // namespace

std::string_view to_string(Boundary bc) {
    switch (bc) {
        case Boundary::Null:
            return "null";
        case Boundary::Adiabatic:
            return "adiabatic";
        case Boundary::Reflexive:
            return "reflexive";
    }
    return "unknown";
}

std::optional<Boundary> parse_boundary(std::string_view name) {
    for (const Boundary bc : kAllBoundaries) {
        if (name == to_string(bc)) {
            return bc;
        }
    }
    return std::nullopt;
}

// --- BinaryGrid ---------------------------------------------------------------

BinaryGrid::BinaryGrid(std::size_t width, std::size_t height, bool fill)
    : width_(width), height_(height), words_per_row_(words_for(width)) {
    require_dims(width, height);
    words_.assign(words_per_row_ * height_, fill ? ~Word{0} : Word{0});
    if (fill) {
        const Word tail = tail_mask();
        for (std::size_t r = 0; r < height_; ++r) {
            words_[r * words_per_row_ + words_per_row_ - 1] &= tail;
        }
    }
}

BinaryGrid BinaryGrid::from_words(std::size_t width, std::size_t height, std::vector<Word> words) {
    require_dims(width, height);
    const std::size_t per_row = words_for(width);
    if (words.size() != per_row * height) {
        throw ShapeError("from_words: expected " + std::to_string(per_row * height) +
                         " words, got " + std::to_string(words.size()));
    }
    BinaryGrid g(width, height, false);
    const Word tail = g.tail_mask();
    for (std::size_t r = 0; r < height; ++r) {
        words[r * per_row + per_row - 1] &= tail;
    }
    g.words_ = std::move(words);
    return g;
}

BinaryGrid::Word BinaryGrid::tail_mask() const noexcept { return mask_for(width_); }

bool BinaryGrid::at(std::size_t r, std::size_t c) const {
    if (r >= height_ || c >= width_) {
        throw OutOfRangeError("cell (" + std::to_string(r) + ", " + std::to_string(c) +
                              ") outside " + std::to_string(width_) + "x" +
                              std::to_string(height_) + " grid");
    }
    return (*this)(r, c);
}

std::size_t BinaryGrid::popcount() const noexcept {
    std::size_t n = 0;
    for (const Word w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

bool BinaryGrid::none() const noexcept {
    return std::ranges::all_of(words_, [](Word w) { return w == 0; });
}

// --- GridBuilder --------------------------------------------------------------

GridBuilder::GridBuilder(std::size_t width, std::size_t height, bool fill)
    : width_(width), height_(height), words_per_row_(BinaryGrid::words_for(width)) {
    require_dims(width, height);
    words_.assign(words_per_row_ * height_, fill ? ~BinaryGrid::Word{0} : BinaryGrid::Word{0});
}

GridBuilder::GridBuilder(const BinaryGrid& start)
    : width_(start.width()),
      height_(start.height()),
      words_per_row_(start.words_per_row()),
      words_(start.words().begin(), start.words().end()) {}

void GridBuilder::set(std::size_t r, std::size_t c, bool value) {
    if (r >= height_ || c >= width_) {
        throw OutOfRangeError("GridBuilder::set(" + std::to_string(r) + ", " + std::to_string(c) +
                              ") outside grid");
    }
    auto& w = words_[r * words_per_row_ + c / kBits];
    const BinaryGrid::Word bit = BinaryGrid::Word{1} << (c % kBits);
    w = value ? (w | bit) : (w & ~bit);
}

bool GridBuilder::get(std::size_t r, std::size_t c) const {
    if (r >= height_ || c >= width_) {
        throw OutOfRangeError("GridBuilder::get outside grid");
    }
    return (words_[r * words_per_row_ + c / kBits] >> (c % kBits)) & 1U;
}

BinaryGrid GridBuilder::build() && {
    return BinaryGrid::from_words(width_, height_, std::move(words_));
}

// --- operations ---------------------------------------------------------------

BinaryGrid new_grid(std::size_t width, std::size_t height, bool fill) {
    return BinaryGrid(width, height, fill);
}

bool sample(const BinaryGrid& g, std::ptrdiff_t r, std::ptrdiff_t c, Boundary bc) {
    const auto h = static_cast<std::ptrdiff_t>(g.height());
    const auto w = static_cast<std::ptrdiff_t>(g.width());
    if (r < -1 || r > h || c < -1 || c > w) {
        throw OutOfRangeError("sample(" + std::to_string(r) + ", " + std::to_string(c) +
                              ") beyond the one-cell ghost ring");
    }
    const bool r_ghost = r < 0 || r >= h;
    const bool c_ghost = c < 0 || c >= w;
    if (bc == Boundary::Null && (r_ghost || c_ghost)) {
        return false;
    }
    auto map_axis = [bc](std::ptrdiff_t i, std::ptrdiff_t n) {
        if (i >= 0 && i < n) {
            return i;
        }
        if (bc == Boundary::Adiabatic || n == 1) {
            return i < 0 ? std::ptrdiff_t{0} : n - 1;
        }
        return i < 0 ? std::ptrdiff_t{1} : n - 2;
    };
    return g(static_cast<std::size_t>(map_axis(r, h)), static_cast<std::size_t>(map_axis(c, w)));
}

BinaryGrid shift(const BinaryGrid& g, NeighborOffset off, Boundary bc) {
    if (!off.valid()) {
        throw OutOfRangeError("shift offset outside the 3x3 neighbourhood");
    }
    const std::size_t per_row = g.words_per_row();
    const BinaryGrid::Word tail = g.tail_mask();
    std::vector<BinaryGrid::Word> out(g.words().size(), 0);
    for (std::size_t r = 0; r < g.height(); ++r) {
        const auto src_row =
            detail::resolve_axis(static_cast<std::ptrdiff_t>(r) + off.dr, g.height(), bc);
        if (!src_row) {
            continue;
        }
        detail::xor_column_shifted(g.row(*src_row), off.dc, bc, g.width(), tail,
                                   std::span(out).subspan(r * per_row, per_row));
    }
    return BinaryGrid::from_words(g.width(), g.height(), std::move(out));
}

BinaryGrid xor_grids(const BinaryGrid& a, const BinaryGrid& b) {
    return combine_words(a, b, "xor_grids", [](auto x, auto y) { return x ^ y; });
}

BinaryGrid or_grids(const BinaryGrid& a, const BinaryGrid& b) {
    return combine_words(a, b, "or_grids", [](auto x, auto y) { return x | y; });
}

BinaryGrid and_grids(const BinaryGrid& a, const BinaryGrid& b) {
    return combine_words(a, b, "and_grids", [](auto x, auto y) { return x & y; });
}

BinaryGrid complement(const BinaryGrid& g) {
    std::vector<BinaryGrid::Word> out(g.words().begin(), g.words().end());
    for (auto& w : out) {
        w = ~w;
    }
    return BinaryGrid::from_words(g.width(), g.height(), std::move(out));
}

BinaryGrid rot90_cw(const BinaryGrid& g) {
    GridBuilder out(g.height(), g.width());
    for (std::size_t r = 0; r < g.height(); ++r) {
        for (std::size_t c = 0; c < g.width(); ++c) {
            if (g(r, c)) {
                out.set(c, g.height() - 1 - r, true);
            }
        }
    }
    return std::move(out).build();
}

BinaryGrid from_rows(const RowList& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw ParseError("from_rows: empty row list", 0);
    }
    const std::size_t width = rows.front().size();
    GridBuilder b(width, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != width) {
            throw ParseError("from_rows: ragged row " + std::to_string(r) + " has " +
                                 std::to_string(rows[r].size()) + " cells, expected " +
                                 std::to_string(width),
                             r);
        }
        for (std::size_t c = 0; c < width; ++c) {
            const int v = rows[r][c];
            if (v != 0 && v != 1) {
                throw ParseError("from_rows: non-binary value " + std::to_string(v), r);
            }
            b.set(r, c, v == 1);
        }
    }
    return std::move(b).build();
}

RowList to_rows(const BinaryGrid& g) {
    RowList rows(g.height(), std::vector<int>(g.width(), 0));
    for (std::size_t r = 0; r < g.height(); ++r) {
        for (std::size_t c = 0; c < g.width(); ++c) {
            rows[r][c] = g(r, c) ? 1 : 0;
        }
    }
    return rows;
}

std::vector<BinaryGrid> parse_grid_blocks(std::string_view text) {
    std::vector<BinaryGrid> grids;
    RowList current;
    std::size_t pos = 0;
    auto flush = [&] {
        if (!current.empty()) {
            grids.push_back(from_rows(current));
            current.clear();
        }
    };
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            flush();
        } else {
            std::vector<int> row;
            for (std::size_t i = 0; i < line.size(); ++i) {
                const char ch = line[i];
                if (ch == '0' || ch == '1') {
                    row.push_back(ch - '0');
                } else if (ch != ' ' && ch != '\t') {
                    throw ParseError(std::string("grid text: unexpected character '") + ch + "'",
                                     pos + i);
                }
            }
            if (!current.empty() && row.size() != current.front().size()) {
                throw ParseError("grid text: ragged row", pos);
            }
            current.push_back(std::move(row));
        }
        pos = eol + 1;
    }
    flush();
    return grids;
}

BinaryGrid parse_grid_text(std::string_view text) {
    auto grids = parse_grid_blocks(text);
    if (grids.size() != 1) {
        throw ParseError("grid text: expected exactly one grid, found " +
                             std::to_string(grids.size()),
                         0);
    }
    return std::move(grids.front());
}

std::string format_grid_text(const BinaryGrid& g) {
    std::string out;
    out.reserve((g.width() + 1) * g.height());
    for (std::size_t r = 0; r < g.height(); ++r) {
        for (std::size_t c = 0; c < g.width(); ++c) {
            out.push_back(g(r, c) ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace caedge

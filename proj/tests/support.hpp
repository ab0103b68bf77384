#pragma once

// Test-only helpers: seeded generators and reference implementations that do
// not touch the library's packed code paths.

#include <caedge/grid.hpp>
#include <caedge/imaging.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <utility>
#include <vector>

namespace caedge::testing {

inline RowList random_rows(std::mt19937_64& rng, std::size_t width, std::size_t height) {
    std::bernoulli_distribution bit(0.5);
    RowList rows(height, std::vector<int>(width));
    for (auto& row : rows) {
        for (auto& v : row) {
            v = bit(rng) ? 1 : 0;
        }
    }
    return rows;
}

inline BinaryGrid random_binary(std::mt19937_64& rng, std::size_t width, std::size_t height) {
    return from_rows(random_rows(rng, width, height));
}

inline GrayImage random_gray(std::mt19937_64& rng, std::size_t width, std::size_t height) {
    std::uniform_int_distribution<int> px(0, 255);
    std::vector<std::uint8_t> pixels(width * height);
    for (auto& p : pixels) {
        p = static_cast<std::uint8_t>(px(rng));
    }
    return GrayImage(width, height, std::move(pixels));
}

/// Ghost-ring index mapping written from the boundary definitions directly.
inline int oracle_axis(int i, int n, Boundary bc) {
    if (i >= 0 && i < n) {
        return i;
    }
    if (bc == Boundary::Null) {
        return -1;
    }
    if (bc == Boundary::Adiabatic || n == 1) {
        return i < 0 ? 0 : n - 1;
    }
    return i < 0 ? 1 : n - 2;
}

inline int oracle_cell(const RowList& g, int r, int c, Boundary bc) {
    const int rr = oracle_axis(r, static_cast<int>(g.size()), bc);
    const int cc = oracle_axis(c, static_cast<int>(g.front().size()), bc);
    if (rr < 0 || cc < 0) {
        return 0;
    }
    return g[static_cast<std::size_t>(rr)][static_cast<std::size_t>(cc)];
}

/// Brute-force single step over explicit (dr, dc) taps on plain row lists.
inline RowList oracle_step(const RowList& g, const std::vector<std::pair<int, int>>& taps,
                           Boundary bc) {
    RowList out(g.size(), std::vector<int>(g.front().size(), 0));
    for (int r = 0; r < static_cast<int>(g.size()); ++r) {
        for (int c = 0; c < static_cast<int>(g.front().size()); ++c) {
            int v = 0;
            for (const auto& [dr, dc] : taps) {
                v ^= oracle_cell(g, r + dr, c + dc, bc);
            }
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
        }
    }
    return out;
}

// Taps of the four edge rules, spelled out by compass position.
inline const std::vector<std::pair<int, int>> kTaps29{{0, 0}, {1, 1}, {1, 0}, {1, -1}};
inline const std::vector<std::pair<int, int>> kTaps113{{0, 0}, {1, -1}, {0, -1}, {-1, -1}};
inline const std::vector<std::pair<int, int>> kTaps263{{0, 0}, {0, 1}, {1, 1}, {-1, 1}};
inline const std::vector<std::pair<int, int>> kTaps449{{0, 0}, {-1, -1}, {-1, 0}, {-1, 1}};

/// 16x16 image: intensity 200 on the square rows/cols 5..10, 0 elsewhere.
inline GrayImage square_fixture() {
    GrayImage img(16, 16, 0);
    for (std::size_t r = 5; r <= 10; ++r) {
        for (std::size_t c = 5; c <= 10; ++c) {
            img(r, c) = 200;
        }
    }
    return img;
}

/// Cells on the outline of the square in square_fixture().
inline BinaryGrid square_boundary_reference() {
    GridBuilder b(16, 16);
    for (std::size_t r = 5; r <= 10; ++r) {
        for (std::size_t c = 5; c <= 10; ++c) {
            if (r == 5 || r == 10 || c == 5 || c == 10) {
                b.set(r, c, true);
            }
        }
    }
    return std::move(b).build();
}

/// Chebyshev distance from (r, c) to the nearest outline cell of the square.
inline int chebyshev_to_square_boundary(int r, int c) {
    int best = 1 << 20;
    for (int rr = 5; rr <= 10; ++rr) {
        for (int cc = 5; cc <= 10; ++cc) {
            if (rr == 5 || rr == 10 || cc == 5 || cc == 10) {
                best = std::min(best, std::max(std::abs(rr - r), std::abs(cc - c)));
            }
        }
    }
    return best;
}

/// 8x8 block image: rows/cols 2..6 set.
inline RowList example_block_rows() {
    return {
        {0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 1, 1, 1, 1, 0},
        {0, 0, 1, 1, 1, 1, 1, 0}, {0, 0, 1, 1, 1, 1, 1, 0}, {0, 0, 1, 1, 1, 1, 1, 0},
        {0, 0, 1, 1, 1, 1, 1, 0}, {0, 0, 0, 0, 0, 0, 0, 0},
    };
}

/// Vertical step: columns < width/2 are 0, the rest 255.
inline GrayImage vertical_step(std::size_t width, std::size_t height) {
    GrayImage img(width, height, 0);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = width / 2; c < width; ++c) {
            img(r, c) = 255;
        }
    }
    return img;
}

/// Exhaustive Otsu scan straight from pixel counts, using exact rationals
/// expressed as (numerator, denominator) of n0*n1*(mu0 - mu1)^2.
std::uint8_t oracle_otsu(const Histogram& hist);

/// Every set cell has at least two set 8-neighbours.
bool is_closed_contour(const BinaryGrid& g);

}  // namespace caedge::testing

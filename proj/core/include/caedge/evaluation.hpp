#pragma once

#include "caedge/grid.hpp"
#include "caedge/rules.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace caedge {

struct EdgeMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double fom = 0.0;
    std::size_t true_pos = 0;
    std::size_t false_pos = 0;
    std::size_t false_neg = 0;
};

inline constexpr double kDefaultFomAlpha = 1.0 / 9.0;

/// Cellwise confusion counts plus Pratt FOM. A ratio whose denominator is zero
/// is 1 when both edge sets involved are empty and 0 otherwise.
/// Throws ShapeError on dimension mismatch.
EdgeMetrics confusion_metrics(const BinaryGrid& detected, const BinaryGrid& reference,
                              double fom_alpha = kDefaultFomAlpha);

/// Exact squared Euclidean distance from every cell to the nearest set cell of
/// `features` (separable lower-envelope transform). Cells are +inf when
/// `features` is empty.
std::vector<double> squared_distance_transform(const BinaryGrid& features);

/// Pratt figure of merit: sum over detected cells of 1 / (1 + alpha d^2),
/// divided by max(|detected|, |reference|). Both empty gives 1.
double pratt_fom(const BinaryGrid& detected, const BinaryGrid& reference,
                 double alpha = kDefaultFomAlpha);

struct BenchReport {
    unsigned rule = 0;
    Boundary boundary = Boundary::Null;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t steps = 0;
    double packed_cells_per_second = 0.0;
    double naive_cells_per_second = 0.0;
    double speedup = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t input_digest = 0;  ///< FNV-1a of the generated input grid
};

/// Uniform random grid from a fixed-seed mt19937_64.
BinaryGrid random_grid(std::size_t width, std::size_t height, std::uint64_t seed);

std::uint64_t grid_digest(const BinaryGrid& g);

/// Times `iterations` packed steps and `iterations` naive steps on the same
/// seeded random input. Throws UsageError when iterations == 0.
BenchReport bench_step(std::size_t width, std::size_t height, LinearRule rule, Boundary bc,
                       std::size_t iterations, std::uint64_t seed = 1, StepOptions opts = {});

// Report serialization: one line per record, either key=value pairs or a JSON object.
std::string to_key_value(std::string_view method, const EdgeMetrics& m);
std::string to_json_line(std::string_view method, const EdgeMetrics& m);
std::string to_key_value(const BenchReport& r);
std::string to_json_line(const BenchReport& r);

}  // namespace caedge

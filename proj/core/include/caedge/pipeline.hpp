#pragma once

#include "caedge/grid.hpp"
#include "caedge/imaging.hpp"
#include "caedge/rules.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace caedge {

/// Binarize, then apply one uniform linear rule `steps` times.
struct PipelineConfig {
    LinearRule rule{449};
    Boundary boundary = Boundary::Adiabatic;
    ThresholdSpec threshold = OtsuThreshold{};
    std::size_t steps = 1;

    /// Throws UsageError when steps == 0.
    void validate() const;
};

enum class CombineMode { Union, Xor };

std::string_view to_string(CombineMode mode);
std::optional<CombineMode> parse_combine_mode(std::string_view name);

BinaryGrid detect_edges(const GrayImage& img, const PipelineConfig& cfg);

/// Rule stage alone, for inputs that are already binary. cfg.threshold is ignored.
BinaryGrid detect_edges(const BinaryGrid& binary, const PipelineConfig& cfg);

/// Runs each rule separately (single step) and folds the maps cellwise with OR
/// or XOR. Throws UsageError for an empty rule list.
BinaryGrid detect_edges_combined(const GrayImage& img, std::span<const LinearRule> rules,
                                 Boundary bc, const ThresholdSpec& threshold, CombineMode mode);
BinaryGrid detect_edges_combined(const BinaryGrid& binary, std::span<const LinearRule> rules,
                                 Boundary bc, CombineMode mode);

}  // namespace caedge

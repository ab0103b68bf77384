#include "caedge/pipeline.hpp"

#include "caedge/error.hpp"

namespace caedge {

void PipelineConfig::validate() const {
    if (steps == 0) {
        throw UsageError("edge pipeline needs at least one step");
    }
}

std::string_view to_string(CombineMode mode) { return mode == CombineMode::Union ? "union" : "xor"; }

std::optional<CombineMode> parse_combine_mode(std::string_view name) {
    if (name == "union") {
        return CombineMode::Union;
    }
    if (name == "xor") {
        return CombineMode::Xor;
    }
    return std::nullopt;
}

BinaryGrid detect_edges(const BinaryGrid& binary, const PipelineConfig& cfg) {
    cfg.validate();
    return evolve(binary, cfg.rule, cfg.boundary, cfg.steps);
}

BinaryGrid detect_edges(const GrayImage& img, const PipelineConfig& cfg) {
    cfg.validate();
    return detect_edges(threshold(img, cfg.threshold), cfg);
}

BinaryGrid detect_edges_combined(const BinaryGrid& binary, std::span<const LinearRule> rules,
                                 Boundary bc, CombineMode mode) {
    if (rules.empty()) {
        throw UsageError("rule combination needs at least one rule");
    }
    BinaryGrid acc = step(binary, rules.front(), bc);
    for (const LinearRule rule : rules.subspan(1)) {
        const BinaryGrid map = step(binary, rule, bc);
        acc = mode == CombineMode::Union ? or_grids(acc, map) : xor_grids(acc, map);
    }
    return acc;
}

BinaryGrid detect_edges_combined(const GrayImage& img, std::span<const LinearRule> rules,
                                 Boundary bc, const ThresholdSpec& threshold_spec,
                                 CombineMode mode) {
    if (rules.empty()) {
        throw UsageError("rule combination needs at least one rule");
    }
    return detect_edges_combined(threshold(img, threshold_spec), rules, bc, mode);
}

}  // namespace caedge

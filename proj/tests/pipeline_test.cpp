#include <caedge/error.hpp>
#include <caedge/pipeline.hpp>

#include <gtest/gtest.h>

#include "support.hpp"

namespace caedge {
namespace {

using testing::square_fixture;

std::vector<LinearRule> edge_rules() {
    std::vector<LinearRule> rules;
    for (const unsigned n : kEdgeRules) {
        rules.emplace_back(n);
    }
    return rules;
}

PipelineConfig square_config(unsigned rule, Boundary bc) {
    PipelineConfig cfg;
    cfg.rule = LinearRule(rule);
    cfg.boundary = bc;
    cfg.threshold = FixedThreshold{128};
    return cfg;
}

/// True when every cell of the 3x3 neighbourhood (ghosts per bc) equals the centre.
bool flat_neighbourhood(const BinaryGrid& g, std::size_t r, std::size_t c, Boundary bc) {
    const bool centre = g(r, c);
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (sample(g, static_cast<std::ptrdiff_t>(r) + dr, static_cast<std::ptrdiff_t>(c) + dc, bc) != centre) {
                return false;
            }
        }
    }
    return true;
}

TEST(PipelineConfig, Defaults) {
    const PipelineConfig cfg;
    EXPECT_EQ(cfg.rule.number(), 449U);
    EXPECT_EQ(cfg.boundary, Boundary::Adiabatic);
    EXPECT_TRUE(std::holds_alternative<OtsuThreshold>(cfg.threshold));
    EXPECT_EQ(cfg.steps, 1U);
}

TEST(DetectEdges, ZeroImage) {
    const GrayImage zero(9, 9, 0);
    for (const unsigned n : kEdgeRules) {
        for (const Boundary bc : kAllBoundaries) {
            PipelineConfig cfg;
            cfg.rule = LinearRule(n);
            cfg.boundary = bc;
            cfg.threshold = FixedThreshold{1};
            EXPECT_TRUE(detect_edges(zero, cfg).none());
            cfg.threshold = OtsuThreshold{};
            if (bc == Boundary::Null) {
                // Otsu picks t = 0, so every cell is 1 and the zero ghost ring leaves a frame.
                EXPECT_EQ(detect_edges(zero, cfg), step(new_grid(9, 9, true), cfg.rule, bc));
                EXPECT_FALSE(detect_edges(zero, cfg).none());
            } else {
                EXPECT_TRUE(detect_edges(zero, cfg).none());
            }
        }
    }
}

TEST(DetectEdges, ConstantBrightImage) {
    EXPECT_TRUE(detect_edges(GrayImage(12, 7, 255), square_config(449, Boundary::Adiabatic)).none());
}

TEST(DetectEdges, SquareTopEdgeAndHollowInterior) {
    const auto img = square_fixture();
    const auto cfg = square_config(449, Boundary::Null);
    const auto edges = detect_edges(img, cfg);

    const auto binary = threshold(img, FixedThreshold{128});
    const auto oracle = testing::oracle_step(to_rows(binary), testing::kTaps449, Boundary::Null);
    ASSERT_EQ(to_rows(edges), oracle);
    EXPECT_EQ(edges, naive_step(binary, LinearRule(449), Boundary::Null));

    for (std::size_t c = 5; c <= 10; ++c) {
        EXPECT_TRUE(edges(5, c)) << c;
    }
    for (std::size_t r = 7; r <= 9; ++r) {
        for (std::size_t c = 6; c <= 9; ++c) {
            EXPECT_FALSE(edges(r, c)) << r << "," << c;
        }
    }
}

TEST(DetectEdges, EqualsEvolveOfThreshold) {
    std::mt19937_64 rng(41);
    const auto img = testing::random_gray(rng, 33, 17);
    PipelineConfig cfg;
    cfg.rule = LinearRule(263);
    cfg.boundary = Boundary::Reflexive;
    cfg.steps = 3;
    EXPECT_EQ(detect_edges(img, cfg),
              evolve(threshold(img, OtsuThreshold{}), cfg.rule, cfg.boundary, 3));
}

TEST(DetectEdges, ZeroStepsRejected) {
    PipelineConfig cfg;
    cfg.steps = 0;
    EXPECT_THROW(detect_edges(GrayImage(3, 3), cfg), UsageError);
}

TEST(DetectEdges, FlatNeighbourhoodsGiveNoEdges) {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 10; ++i) {
        // Blocky random images so flat regions actually occur.
        GrayImage img(24, 24);
        for (std::size_t r = 0; r < 24; ++r) {
            for (std::size_t c = 0; c < 24; ++c) {
                img(r, c) = ((r / 4 + c / 5 + static_cast<std::size_t>(rng() % 2)) % 3 == 0) ? 220 : 30;
            }
        }
        const auto binary = threshold(img, FixedThreshold{128});
        for (const unsigned n : kEdgeRules) {
            for (const Boundary bc : kAllBoundaries) {
                const auto edges = detect_edges(img, square_config(n, bc));
                for (std::size_t r = 0; r < 24; ++r) {
                    for (std::size_t c = 0; c < 24; ++c) {
                        if (flat_neighbourhood(binary, r, c, bc)) {
                            ASSERT_FALSE(edges(r, c));
                        }
                    }
                }
            }
        }
    }
}

TEST(DetectEdges, RotationFollowsRuleCycle) {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 5; ++i) {
        const auto img = testing::random_gray(rng, 19, 11);
        GrayImage rotated(img.height(), img.width());
        for (std::size_t r = 0; r < img.height(); ++r) {
            for (std::size_t c = 0; c < img.width(); ++c) {
                rotated(c, img.height() - 1 - r) = img(r, c);
            }
        }
        for (const unsigned n : kEdgeRules) {
            for (const Boundary bc : kAllBoundaries) {
                const auto cfg = square_config(n, bc);
                auto rot_cfg = cfg;
                rot_cfg.rule = rotate_cw(cfg.rule);
                ASSERT_EQ(rot90_cw(detect_edges(img, cfg)), detect_edges(rotated, rot_cfg));
            }
        }
    }
}

TEST(Combined, SingleRuleEqualsDetect) {
    const auto img = square_fixture();
    const std::vector<LinearRule> one{LinearRule(113)};
    const auto expected = detect_edges(img, square_config(113, Boundary::Adiabatic));
    for (const auto mode : {CombineMode::Union, CombineMode::Xor}) {
        EXPECT_EQ(detect_edges_combined(img, one, Boundary::Adiabatic, FixedThreshold{128}, mode),
                  expected);
    }
}

TEST(Combined, UnionCoversSquareOutlineOnly) {
    const auto img = square_fixture();
    const auto rules = edge_rules();
    const auto combined =
        detect_edges_combined(img, rules, Boundary::Null, FixedThreshold{128}, CombineMode::Union);

    // Oracle: each rule by brute force, then cellwise OR.
    const auto binary = to_rows(threshold(img, FixedThreshold{128}));
    RowList oracle(16, std::vector<int>(16, 0));
    for (const auto* taps : {&testing::kTaps29, &testing::kTaps113, &testing::kTaps263, &testing::kTaps449}) {
        const auto part = testing::oracle_step(binary, *taps, Boundary::Null);
        for (std::size_t r = 0; r < 16; ++r) {
            for (std::size_t c = 0; c < 16; ++c) {
                oracle[r][c] |= part[r][c];
            }
        }
    }
    ASSERT_EQ(to_rows(combined), oracle);

    const auto outline = testing::square_boundary_reference();
    EXPECT_EQ(and_grids(combined, outline), outline);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            if (testing::chebyshev_to_square_boundary(r, c) >= 2) {
                EXPECT_FALSE(combined(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
            }
        }
    }
}

TEST(Combined, UnionContainsEachRule) {
    std::mt19937_64 rng(44);
    const auto img = testing::random_gray(rng, 20, 20);
    const auto rules = edge_rules();
    const auto combined =
        detect_edges_combined(img, rules, Boundary::Reflexive, OtsuThreshold{}, CombineMode::Union);
    for (const auto& rule : rules) {
        PipelineConfig cfg;
        cfg.rule = rule;
        cfg.boundary = Boundary::Reflexive;
        const auto single = detect_edges(img, cfg);
        EXPECT_EQ(and_grids(combined, single), single);
    }
}

TEST(Combined, XorOfRuleWithItselfVanishes) {
    const std::vector<LinearRule> twice{LinearRule(29), LinearRule(29)};
    EXPECT_TRUE(detect_edges_combined(square_fixture(), twice, Boundary::Adiabatic,
                                      FixedThreshold{128}, CombineMode::Xor)
                    .none());
}

TEST(Combined, EmptyRuleListRejected) {
    EXPECT_THROW(detect_edges_combined(square_fixture(), std::vector<LinearRule>{},
                                       Boundary::Null, OtsuThreshold{}, CombineMode::Union),
                 UsageError);
}

TEST(CombineMode, Names) {
    EXPECT_EQ(parse_combine_mode("union"), CombineMode::Union);
    EXPECT_EQ(parse_combine_mode("xor"), CombineMode::Xor);
    EXPECT_FALSE(parse_combine_mode("and"));
}

}  // namespace
}  // namespace caedge

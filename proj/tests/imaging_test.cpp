#include <caedge/error.hpp>
#include <caedge/imaging.hpp>

#include <gtest/gtest.h>

#include "support.hpp"

namespace caedge {
namespace {

using testing::random_binary;
using testing::random_gray;

TEST(ReadPnm, AsciiGraymap) {
    const auto img = std::get<GrayImage>(read_pnm(std::string_view("P2 2 2 255 0 255 128 64")));
    EXPECT_EQ(img, GrayImage(2, 2, std::vector<std::uint8_t>{0, 255, 128, 64}));
}

TEST(ReadPnm, AsciiBitmap) {
    const auto g = std::get<BinaryGrid>(read_pnm(std::string_view("P1 3 1 1 0 1")));
    EXPECT_EQ(to_rows(g), (RowList{{1, 0, 1}}));
    // Plain PBM also allows digits without separators.
    const auto packed = std::get<BinaryGrid>(read_pnm(std::string_view("P1\n3 1\n101\n")));
    EXPECT_EQ(packed, g);
}

TEST(ReadPnm, CommentsInHeader) {
    const auto img = std::get<GrayImage>(
        read_pnm(std::string_view("P2\n# made by hand\n2 1 # width height\n255\n7 9\n")));
    EXPECT_EQ(img(0, 1), 9);
}

TEST(ReadPnm, RawGraymapTruncated) {
    std::string bytes = "P5\n2 2\n255\n";
    bytes += std::string("\x01\x02\x03", 3);
    try {
        (void)read_pnm(bytes);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
        EXPECT_EQ(e.offset(), bytes.size());
    }
}

TEST(ReadPnm, Errors) {
    EXPECT_THROW(read_pnm(std::string_view("P7 1 1 255 0")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("P5 1 1 65535 ab")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("P2 2 1 255 7")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("P2 1 1 255 300")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("P1 2 1 1 2")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("P2 0 1 255")), ParseError);
    EXPECT_THROW(read_pnm(std::string_view("P4 9 1\n\xff")), ParseError);
}

TEST(ReadPnm, AsciiMaxvalRescaled) {
    const auto img = std::get<GrayImage>(read_pnm(std::string_view("P2 3 1 15 0 15 8")));
    EXPECT_EQ(img(0, 0), 0);
    EXPECT_EQ(img(0, 1), 255);
    EXPECT_EQ(img(0, 2), 136);  // (8 * 255 + 7) / 15
}

TEST(ReadPnm, PixmapLuma) {
    std::string raw = "P6 2 1 255\n";
    raw += std::string("\xff\x00\x00\x10\x20\x30", 6);
    const auto img = std::get<GrayImage>(read_pnm(raw));
    EXPECT_EQ(img(0, 0), 76);  // 299 * 255 / 1000
    EXPECT_EQ(img(0, 1), (299 * 16 + 587 * 32 + 114 * 48) / 1000);
    const auto ascii = std::get<GrayImage>(read_pnm(std::string_view("P3 1 1 255 255 0 0")));
    EXPECT_EQ(ascii(0, 0), 76);
}

TEST(WritePnm, ExactBytes) {
    const auto g = from_rows({{1, 0, 1}});
    EXPECT_EQ(write_pnm(g, PnmFormat::P1), "P1\n3 1\n1 0 1\n");
    EXPECT_EQ(write_pnm(g, PnmFormat::P4), std::string("P4\n3 1\n\xa0", 8));
    const GrayImage img(2, 1, std::vector<std::uint8_t>{0, 200});
    EXPECT_EQ(write_pnm(img, PnmFormat::P2), "P2\n2 1\n255\n0 200\n");
}

TEST(WritePnm, IncompatibleFormat) {
    EXPECT_THROW(write_pnm(new_grid(2, 2, false), PnmFormat::P2), UsageError);
    EXPECT_THROW(write_pnm(GrayImage(2, 2), PnmFormat::P4), UsageError);
    EXPECT_THROW(write_pnm(GrayImage(2, 2), PnmFormat::P6), UsageError);
}

TEST(WritePnm, RoundTripsAreBitExact) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 25; ++i) {
        const auto w = 1 + rng() % 40;
        const auto h = 1 + rng() % 40;
        const auto g = random_binary(rng, w, h);
        for (const auto f : {PnmFormat::P1, PnmFormat::P4}) {
            ASSERT_EQ(std::get<BinaryGrid>(read_pnm(write_pnm(g, f))), g);
        }
        const auto img = random_gray(rng, w, h);
        for (const auto f : {PnmFormat::P2, PnmFormat::P5}) {
            ASSERT_EQ(std::get<GrayImage>(read_pnm(write_pnm(img, f))), img);
        }
    }
}

TEST(Threshold, Examples) {
    EXPECT_EQ(threshold(GrayImage(3, 3, 100), FixedThreshold{100}).popcount(), 9U);
    EXPECT_TRUE(threshold(GrayImage(3, 3, 99), FixedThreshold{100}).none());
    const GrayImage img(4, 1, std::vector<std::uint8_t>{0, 255, 128, 64});
    EXPECT_EQ(to_rows(threshold(img, FixedThreshold{128})), (RowList{{0, 1, 1, 0}}));
    EXPECT_EQ(threshold(img, FixedThreshold{0}).popcount(), 4U);
}

TEST(Threshold, Monotone) {
    std::mt19937_64 rng(32);
    const auto img = random_gray(rng, 30, 30);
    for (int t = 1; t < 256; ++t) {
        const auto lower = threshold(img, static_cast<std::uint8_t>(t - 1));
        const auto higher = threshold(img, static_cast<std::uint8_t>(t));
        ASSERT_EQ(and_grids(higher, complement(lower)).popcount(), 0U);
    }
}

TEST(Otsu, ConstantImage) { EXPECT_EQ(otsu(GrayImage(5, 5, 100)), 100); }

TEST(Otsu, TwoEqualModes) {
    const GrayImage img(8, 1, std::vector<std::uint8_t>{0, 0, 0, 0, 200, 200, 200, 200});
    ASSERT_EQ(testing::oracle_otsu(histogram(img)), 1);
    EXPECT_EQ(otsu(img), 1);
}

TEST(Otsu, UnbalancedModes) {
    std::vector<std::uint8_t> px(100, 10);
    std::fill(px.begin() + 90, px.end(), 240);
    const GrayImage img(10, 10, px);
    ASSERT_EQ(testing::oracle_otsu(histogram(img)), 11);
    EXPECT_EQ(otsu(img), 11);
}

TEST(Otsu, MatchesExhaustiveScanAndStaysInRange) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 30; ++i) {
        Histogram h{};
        const int bins = 1 + static_cast<int>(rng() % 12);
        for (int b = 0; b < bins; ++b) {
            h[rng() % 256] += 1 + rng() % 1000;
        }
        const auto t = otsu(h);
        ASSERT_EQ(t, testing::oracle_otsu(h));
        const auto lo = static_cast<std::size_t>(std::find_if(h.begin(), h.end(), [](auto v) { return v; }) - h.begin());
        const auto hi = static_cast<std::size_t>(255 - (std::find_if(h.rbegin(), h.rend(), [](auto v) { return v; }) - h.rbegin()));
        EXPECT_GE(t, lo);
        EXPECT_LE(t, hi);
    }
}

TEST(ThresholdSpec, Parse) {
    EXPECT_EQ(parse_threshold_spec("otsu"), ThresholdSpec{OtsuThreshold{}});
    EXPECT_EQ(parse_threshold_spec("fixed:128"), ThresholdSpec{FixedThreshold{128}});
    EXPECT_THROW(parse_threshold_spec("fixed:256"), UsageError);
    EXPECT_THROW(parse_threshold_spec("fixed:"), UsageError);
    EXPECT_THROW(parse_threshold_spec("mean"), UsageError);
}

TEST(GrayImage, ShapeChecked) {
    EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>{1, 2, 3}), ShapeError);
    EXPECT_THROW(GrayImage(0, 2), InvalidDimensionError);
}

}  // namespace
}  // namespace caedge

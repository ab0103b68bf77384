#pragma once

#include "caedge/grid.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace caedge {

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    std::uint8_t operator()(std::size_t r, std::size_t c) const noexcept {
        return pixels_[r * width_ + c];
    }
    std::uint8_t& operator()(std::size_t r, std::size_t c) noexcept {
        return pixels_[r * width_ + c];
    }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> pixels_;
};

enum class PnmFormat { P1, P2, P3, P4, P5, P6 };

std::string_view to_string(PnmFormat f);

/// Bitmaps (P1/P4) decode to BinaryGrid with black = 1; everything else to GrayImage.
using PnmImage = std::variant<GrayImage, BinaryGrid>;

/// Throws ParseError carrying the byte offset where decoding failed.
PnmImage read_pnm(std::string_view bytes);
PnmImage read_pnm(std::span<const std::byte> bytes);

/// P1/P4 for BinaryGrid, P2/P5 for GrayImage; anything else throws UsageError.
std::string write_pnm(const PnmImage& img, PnmFormat format);

/// Reads a whole file into memory. Throws std::system_error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

struct FixedThreshold {
    std::uint8_t value = 128;
    bool operator==(const FixedThreshold&) const = default;
};
struct OtsuThreshold {
    bool operator==(const OtsuThreshold&) const = default;
};
using ThresholdSpec = std::variant<FixedThreshold, OtsuThreshold>;

/// "otsu" or "fixed:T" with 0 <= T <= 255. Throws UsageError.
ThresholdSpec parse_threshold_spec(std::string_view text);
std::string to_string(const ThresholdSpec& spec);

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram(const GrayImage& img);

/// Otsu threshold over a 256-bin histogram: the t in [min, max] maximising the
/// between-class variance of {i < t} vs {i >= t}; ties go to the smallest t.
/// Returns 0 for an empty histogram.
std::uint8_t otsu(const Histogram& hist);
std::uint8_t otsu(const GrayImage& img);

/// cell = 1 iff intensity >= t.
BinaryGrid threshold(const GrayImage& img, const ThresholdSpec& spec);
BinaryGrid threshold(const GrayImage& img, std::uint8_t t);

}  // namespace caedge

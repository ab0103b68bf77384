#pragma once

#include "caedge/grid.hpp"
#include "caedge/imaging.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace caedge {

/// Integer correlation kernels for an x/y gradient. 3x3 kernels are anchored at
/// their centre, 2x2 kernels at the top-left cell.
struct GradientKernelPair {
    std::string_view name;
    std::size_t size = 3;
    std::array<std::array<int, 3>, 3> kx{};
    std::array<std::array<int, 3>, 3> ky{};
};

const GradientKernelPair& sobel_kernels();
const GradientKernelPair& prewitt_kernels();
const GradientKernelPair& roberts_kernels();

/// Row-major floating raster used for intermediate responses.
struct Field {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    double operator()(std::size_t r, std::size_t c) const { return values[r * width + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values[r * width + c]; }
};

/// sqrt(Gx^2 + Gy^2), correlation with replicated borders.
Field gradient_magnitude(const GrayImage& img, const GradientKernelPair& kernels);

/// cell = 1 iff gradient magnitude >= t. Throws UsageError for t < 0.
BinaryGrid gradient_detect(const GrayImage& img, const GradientKernelPair& kernels, double t);

/// Separable normalized Gaussian, radius ceil(3 sigma), replicated borders.
Field gaussian_smooth(const GrayImage& img, double sigma);

/// 4-neighbour Laplacian of the Gaussian-smoothed image.
Field laplacian_of_gaussian(const GrayImage& img, double sigma);

/// Marks sign changes of the LoG response between 4-neighbours whose absolute
/// difference is >= t. Of each crossing pair the cell with the smaller |response|
/// is marked.
BinaryGrid log_detect(const GrayImage& img, double sigma, double t);

struct CannyParams {
    double sigma = 1.4;
    double low = 0.1;   ///< fraction of the maximum gradient magnitude
    double high = 0.3;  ///< fraction of the maximum gradient magnitude

    /// Throws UsageError unless sigma > 0 and 0 <= low <= high.
    void validate() const;
};

/// Canny stages before hysteresis: gradient magnitude surviving 4-bin
/// non-maximum suppression (0 elsewhere) and the pre-suppression maximum.
struct SuppressedGradient {
    Field magnitude;
    double max_magnitude = 0.0;
};

SuppressedGradient canny_suppressed(const GrayImage& img, double sigma);

/// Gaussian smoothing, Sobel gradients, 4-bin non-maximum suppression and
/// 8-connected double-threshold hysteresis. Thresholds are fractions of the
/// maximum gradient magnitude.
BinaryGrid canny(const GrayImage& img, const CannyParams& p = {});

enum class BaselineMethod { Sobel, Prewitt, Roberts, LoG, Canny };

inline constexpr std::array<BaselineMethod, 5> kAllBaselines{
    BaselineMethod::Sobel, BaselineMethod::Prewitt, BaselineMethod::Roberts, BaselineMethod::LoG,
    BaselineMethod::Canny};

std::string_view to_string(BaselineMethod m);
std::optional<BaselineMethod> parse_baseline_method(std::string_view name);

/// Settings for every baseline, used when a caller picks the method by name.
struct BaselineSettings {
    double gradient_threshold = 128.0;
    double log_sigma = 2.0;
    double log_threshold = 1.0;
    CannyParams canny;
};

BinaryGrid run_baseline(const GrayImage& img, BaselineMethod method,
                        const BaselineSettings& settings = {});

}  // namespace caedge

#include "caedge/baselines.hpp"

#include "caedge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace caedge {

namespace {

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

Field to_field(const GrayImage& img) {
    Field f{img.width(), img.height(), {}};
    f.values.assign(img.pixels().begin(), img.pixels().end());
    return f;
}

Field gaussian(const Field& in, double sigma) {
    if (!(sigma > 0.0)) {
        throw UsageError("gaussian sigma must be positive");
    }
    const auto radius = static_cast<std::ptrdiff_t>(std::max(1.0, std::ceil(3.0 * sigma)));
    std::vector<double> weights(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
        weights[static_cast<std::size_t>(k + radius)] = w;
        total += w;
    }
    for (double& w : weights) {
        w /= total;
    }

    Field tmp{in.width, in.height, std::vector<double>(in.values.size())};
    for (std::size_t r = 0; r < in.height; ++r) {
        for (std::size_t c = 0; c < in.width; ++c) {
            // Accumulate offsets from the centre so flat windows stay exactly flat.
            const double centre = in(r, c);
            double acc = 0.0;
            for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
                acc += weights[static_cast<std::size_t>(k + radius)] *
                       (in(r, clamp_index(static_cast<std::ptrdiff_t>(c) + k, in.width)) - centre);
            }
            tmp(r, c) = centre + acc;
        }
    }
    Field out{in.width, in.height, std::vector<double>(in.values.size())};
    for (std::size_t r = 0; r < in.height; ++r) {
        for (std::size_t c = 0; c < in.width; ++c) {
            const double centre = tmp(r, c);
            double acc = 0.0;
            for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
                acc += weights[static_cast<std::size_t>(k + radius)] *
                       (tmp(clamp_index(static_cast<std::ptrdiff_t>(r) + k, in.height), c) - centre);
            }
            out(r, c) = centre + acc;
        }
    }
    return out;
}

struct Gradients {
    Field gx;
    Field gy;
};

Gradients correlate(const Field& in, const GradientKernelPair& k) {
    const std::ptrdiff_t anchor = k.size == 3 ? 1 : 0;
    Gradients g{{in.width, in.height, std::vector<double>(in.values.size())},
                {in.width, in.height, std::vector<double>(in.values.size())}};
    for (std::size_t r = 0; r < in.height; ++r) {
        for (std::size_t c = 0; c < in.width; ++c) {
            double sx = 0.0;
            double sy = 0.0;
            for (std::size_t i = 0; i < k.size; ++i) {
                const auto rr = clamp_index(static_cast<std::ptrdiff_t>(r + i) - anchor, in.height);
                for (std::size_t j = 0; j < k.size; ++j) {
                    const auto cc =
                        clamp_index(static_cast<std::ptrdiff_t>(c + j) - anchor, in.width);
                    sx += k.kx[i][j] * in(rr, cc);
                    sy += k.ky[i][j] * in(rr, cc);
                }
            }
            g.gx(r, c) = sx;
            g.gy(r, c) = sy;
        }
    }
    return g;
}

Field magnitude(const Gradients& g) {
    Field m{g.gx.width, g.gx.height, std::vector<double>(g.gx.values.size())};
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        m.values[i] = std::hypot(g.gx.values[i], g.gy.values[i]);
    }
    return m;
}

}  // namespace

const GradientKernelPair& sobel_kernels() {
    static const GradientKernelPair k{
        "sobel", 3, {{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}}, {{{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}}}};
    return k;
}

const GradientKernelPair& prewitt_kernels() {
    static const GradientKernelPair k{
        "prewitt", 3, {{{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}}}, {{{-1, -1, -1}, {0, 0, 0}, {1, 1, 1}}}};
    return k;
}

const GradientKernelPair& roberts_kernels() {
    static const GradientKernelPair k{
        "roberts", 2, {{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}}, {{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}}};
    return k;
}

Field gradient_magnitude(const GrayImage& img, const GradientKernelPair& kernels) {
    return magnitude(correlate(to_field(img), kernels));
}

BinaryGrid gradient_detect(const GrayImage& img, const GradientKernelPair& kernels, double t) {
    if (!(t >= 0.0)) {
        throw UsageError("gradient threshold must be >= 0");
    }
    const Gradients g = correlate(to_field(img), kernels);
    GridBuilder out(img.width(), img.height());
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            const double gx = g.gx(r, c);
            const double gy = g.gy(r, c);
            // Squared comparison; exact for the integer responses.
            if (gx * gx + gy * gy >= t * t) {
                out.set(r, c, true);
            }
        }
    }
    return std::move(out).build();
}

Field gaussian_smooth(const GrayImage& img, double sigma) { return gaussian(to_field(img), sigma); }

Field laplacian_of_gaussian(const GrayImage& img, double sigma) {
    const Field s = gaussian(to_field(img), sigma);
    Field lap{s.width, s.height, std::vector<double>(s.values.size())};
    for (std::size_t r = 0; r < s.height; ++r) {
        const auto up = clamp_index(static_cast<std::ptrdiff_t>(r) - 1, s.height);
        const auto down = clamp_index(static_cast<std::ptrdiff_t>(r) + 1, s.height);
        for (std::size_t c = 0; c < s.width; ++c) {
            const auto left = clamp_index(static_cast<std::ptrdiff_t>(c) - 1, s.width);
            const auto right = clamp_index(static_cast<std::ptrdiff_t>(c) + 1, s.width);
            const double centre = s(r, c);
            lap(r, c) = (s(r, left) + s(r, right) - 2.0 * centre) +
                        (s(up, c) + s(down, c) - 2.0 * centre);
        }
    }
    return lap;
}

BinaryGrid log_detect(const GrayImage& img, double sigma, double t) {
    if (!(t >= 0.0)) {
        throw UsageError("zero-crossing threshold must be >= 0");
    }
    const Field lap = laplacian_of_gaussian(img, sigma);
    GridBuilder out(img.width(), img.height());
    auto check = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
        const double a = lap(r0, c0);
        const double b = lap(r1, c1);
        const bool crossing = (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0);
        if (!crossing || std::abs(a - b) < t) {
            return;
        }
        if (std::abs(a) <= std::abs(b)) {
            out.set(r0, c0, true);
        } else {
            out.set(r1, c1, true);
        }
    };
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            if (c + 1 < img.width()) {
                check(r, c, r, c + 1);
            }
            if (r + 1 < img.height()) {
                check(r, c, r + 1, c);
            }
        }
    }
    return std::move(out).build();
}

void CannyParams::validate() const {
    if (!(sigma > 0.0)) {
        throw UsageError("canny sigma must be positive");
    }
    if (!(low >= 0.0) || !(low <= high)) {
        throw UsageError("canny thresholds must satisfy 0 <= low <= high");
    }
}

SuppressedGradient canny_suppressed(const GrayImage& img, double sigma) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const Gradients g = correlate(gaussian(to_field(img), sigma), sobel_kernels());
    const Field mag = magnitude(g);

    auto mag_at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
        if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(h) ||
            c >= static_cast<std::ptrdiff_t>(w)) {
            return 0.0;
        }
        return mag(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };

    // Direction quantized to 0/45/90/135 degrees. Rows grow downward, so +gy
    // points south.
    SuppressedGradient out{{w, h, std::vector<double>(w * h, 0.0)}, 0.0};
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double m = mag(r, c);
            out.max_magnitude = std::max(out.max_magnitude, m);
            if (m <= 0.0) {
                continue;
            }
            double angle = std::atan2(g.gy(r, c), g.gx(r, c)) * 180.0 / std::numbers::pi;
            if (angle < 0.0) {
                angle += 180.0;
            }
            int dr = 0;
            int dc = 0;
            if (angle < 22.5 || angle >= 157.5) {
                dc = 1;
            } else if (angle < 67.5) {
                dr = 1;
                dc = 1;
            } else if (angle < 112.5) {
                dr = 1;
            } else {
                dr = 1;
                dc = -1;
            }
            const auto ri = static_cast<std::ptrdiff_t>(r);
            const auto ci = static_cast<std::ptrdiff_t>(c);
            // Strict on one side so a plateau pair keeps exactly one cell.
            if (m > mag_at(ri - dr, ci - dc) && m >= mag_at(ri + dr, ci + dc)) {
                out.magnitude(r, c) = m;
            }
        }
    }
    return out;
}

BinaryGrid canny(const GrayImage& img, const CannyParams& p) {
    p.validate();
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const SuppressedGradient sg = canny_suppressed(img, p.sigma);
    const std::vector<double>& thin = sg.magnitude.values;
    const double max_mag = sg.max_magnitude;

    GridBuilder out(w, h);
    if (max_mag <= 0.0) {
        return std::move(out).build();
    }
    const double low_t = p.low * max_mag;
    const double high_t = p.high * max_mag;
    std::vector<std::size_t> stack;
    std::vector<bool> seen(w * h, false);
    for (std::size_t i = 0; i < w * h; ++i) {
        if (thin[i] > 0.0 && thin[i] >= high_t) {
            stack.push_back(i);
            seen[i] = true;
        }
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const std::size_t r = i / w;
        const std::size_t c = i % w;
        out.set(r, c, true);
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const auto nr = static_cast<std::ptrdiff_t>(r) + dr;
                const auto nc = static_cast<std::ptrdiff_t>(c) + dc;
                if ((dr == 0 && dc == 0) || nr < 0 || nc < 0 ||
                    nr >= static_cast<std::ptrdiff_t>(h) || nc >= static_cast<std::ptrdiff_t>(w)) {
                    continue;
                }
                const std::size_t j = static_cast<std::size_t>(nr) * w + static_cast<std::size_t>(nc);
                if (!seen[j] && thin[j] > 0.0 && thin[j] >= low_t) {
                    seen[j] = true;
                    stack.push_back(j);
                }
            }
        }
    }
    return std::move(out).build();
}

std::string_view to_string(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::Sobel:
            return "sobel";
        case BaselineMethod::Prewitt:
            return "prewitt";
        case BaselineMethod::Roberts:
            return "roberts";
        case BaselineMethod::LoG:
            return "log";
        case BaselineMethod::Canny:
            return "canny";
    }
    return "unknown";
}

std::optional<BaselineMethod> parse_baseline_method(std::string_view name) {
    for (const BaselineMethod m : kAllBaselines) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

BinaryGrid run_baseline(const GrayImage& img, BaselineMethod method,
                        const BaselineSettings& settings) {
    switch (method) {
        case BaselineMethod::Sobel:
            return gradient_detect(img, sobel_kernels(), settings.gradient_threshold);
        case BaselineMethod::Prewitt:
            return gradient_detect(img, prewitt_kernels(), settings.gradient_threshold);
        case BaselineMethod::Roberts:
            return gradient_detect(img, roberts_kernels(), settings.gradient_threshold);
        case BaselineMethod::LoG:
            return log_detect(img, settings.log_sigma, settings.log_threshold);
        case BaselineMethod::Canny:
            return canny(img, settings.canny);
    }
    throw UsageError("unknown baseline method");
}

}  // namespace caedge

#include "support.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace caedge::testing {

std::uint8_t oracle_otsu(const Histogram& hist) {
    using boost::multiprecision::cpp_rational;
    int lo = 0;
    int hi = 255;
    while (lo < 256 && hist[static_cast<std::size_t>(lo)] == 0) {
        ++lo;
    }
    if (lo == 256) {
        return 0;
    }
    while (hist[static_cast<std::size_t>(hi)] == 0) {
        --hi;
    }
    int best_t = lo;
    cpp_rational best = -1;
    for (int t = lo; t <= hi; ++t) {
        cpp_rational n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (int i = 0; i < 256; ++i) {
            const auto count = hist[static_cast<std::size_t>(i)];
            if (i < t) {
                n0 += count;
                s0 += cpp_rational(count) * i;
            } else {
                n1 += count;
                s1 += cpp_rational(count) * i;
            }
        }
        cpp_rational variance = 0;
        if (n0 != 0 && n1 != 0) {
            const cpp_rational diff = s0 / n0 - s1 / n1;
            const cpp_rational total = n0 + n1;
            variance = (n0 / total) * (n1 / total) * diff * diff;
        }
        if (variance > best) {
            best = variance;
            best_t = t;
        }
    }
    return static_cast<std::uint8_t>(best_t);
}

bool is_closed_contour(const BinaryGrid& g) {
    if (g.none()) {
        return false;
    }
    for (std::size_t r = 0; r < g.height(); ++r) {
        for (std::size_t c = 0; c < g.width(); ++c) {
            if (!g(r, c)) {
                continue;
            }
            int neighbours = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
                    const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
                    if ((dr || dc) && rr >= 0 && cc >= 0 &&
                        rr < static_cast<std::ptrdiff_t>(g.height()) &&
                        cc < static_cast<std::ptrdiff_t>(g.width()) &&
                        g(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc))) {
                        ++neighbours;
                    }
                }
            }
            if (neighbours < 2) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace caedge::testing

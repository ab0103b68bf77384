#include "caedge/evaluation.hpp"

#include "caedge/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>

namespace caedge {

namespace {

void require_same_shape(const BinaryGrid& a, const BinaryGrid& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ShapeError(fmt::format("edge maps differ in shape: {}x{} vs {}x{}", a.width(),
                                     a.height(), b.width(), b.height()));
    }
}

double ratio(std::size_t num, std::size_t den, bool both_empty) {
    if (den == 0) {
        return both_empty ? 1.0 : 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps benchmarked results observable so the timed loops are not elided.
volatile std::size_t bench_sink = 0;

// 1D squared distance transform of a sampled function: lower envelope of the
// parabolas rooted at the finite samples. v holds parabola roots, z the
// boundaries between envelope segments.
void distance_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<std::size_t>& v,
                 std::vector<double>& z) {
    const std::size_t n = f.size();
    std::size_t k = 0;
    bool any = false;
    for (std::size_t q = 0; q < n; ++q) {
        if (f[q] == kInf) {
            continue;
        }
        const auto qd = static_cast<double>(q);
        if (!any) {
            any = true;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = 0.0;
        while (true) {
            const auto vk = static_cast<double>(v[k]);
            s = ((f[q] + qd * qd) - (f[v[k]] + vk * vk)) / (2.0 * (qd - vk));
            if (s > z[k]) {
                break;
            }
            --k;  // z[0] is -inf, so this stops at k == 0
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (!any) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q)) {
            ++k;
        }
        const double dq = static_cast<double>(q) - static_cast<double>(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

EdgeMetrics confusion_metrics(const BinaryGrid& detected, const BinaryGrid& reference,
                              double fom_alpha) {
    require_same_shape(detected, reference);
    EdgeMetrics m;
    m.true_pos = and_grids(detected, reference).popcount();
    const std::size_t nd = detected.popcount();
    const std::size_t nr = reference.popcount();
    m.false_pos = nd - m.true_pos;
    m.false_neg = nr - m.true_pos;
    const bool both_empty = nd == 0 && nr == 0;
    m.precision = ratio(m.true_pos, nd, both_empty);
    m.recall = ratio(m.true_pos, nr, both_empty);
    const double pr = m.precision + m.recall;
    m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
    m.fom = pratt_fom(detected, reference, fom_alpha);
    return m;
}

std::vector<double> squared_distance_transform(const BinaryGrid& features) {
    const std::size_t w = features.width();
    const std::size_t h = features.height();
    std::vector<double> grid(w * h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            grid[r * w + c] = features(r, c) ? 0.0 : kInf;
        }
    }
    const std::size_t n = std::max(w, h);
    std::vector<double> f(n);
    std::vector<double> d(n);
    std::vector<std::size_t> v(n);
    std::vector<double> z(n + 1);

    f.resize(h);
    d.resize(h);
    for (std::size_t c = 0; c < w; ++c) {
        for (std::size_t r = 0; r < h; ++r) {
            f[r] = grid[r * w + c];
        }
        distance_1d(f, d, v, z);
        for (std::size_t r = 0; r < h; ++r) {
            grid[r * w + c] = d[r];
        }
    }
    f.resize(w);
    d.resize(w);
    for (std::size_t r = 0; r < h; ++r) {
        std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(r * w), w, f.begin());
        distance_1d(f, d, v, z);
        std::copy(d.begin(), d.end(), grid.begin() + static_cast<std::ptrdiff_t>(r * w));
    }
    return grid;
}

double pratt_fom(const BinaryGrid& detected, const BinaryGrid& reference, double alpha) {
    require_same_shape(detected, reference);
    if (!(alpha > 0.0)) {
        throw UsageError("pratt_fom alpha must be positive");
    }
    const std::size_t nd = detected.popcount();
    const std::size_t nr = reference.popcount();
    if (nd == 0 && nr == 0) {
        return 1.0;
    }
    if (nd == 0 || nr == 0) {
        return 0.0;
    }
    const auto dist2 = squared_distance_transform(reference);
    double sum = 0.0;
    for (std::size_t r = 0; r < detected.height(); ++r) {
        for (std::size_t c = 0; c < detected.width(); ++c) {
            if (detected(r, c)) {
                sum += 1.0 / (1.0 + alpha * dist2[r * detected.width() + c]);
            }
        }
    }
    return sum / static_cast<double>(std::max(nd, nr));
}

BinaryGrid random_grid(std::size_t width, std::size_t height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BinaryGrid::Word> words(BinaryGrid::words_for(width) * height);
    for (auto& w : words) {
        w = rng();
    }
    return BinaryGrid::from_words(width, height, std::move(words));
}

std::uint64_t grid_digest(const BinaryGrid& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(g.width());
    mix(g.height());
    for (const auto w : g.words()) {
        mix(w);
    }
    return h;
}

BenchReport bench_step(std::size_t width, std::size_t height, LinearRule rule, Boundary bc,
                       std::size_t iterations, std::uint64_t seed, StepOptions opts) {
    if (iterations == 0) {
        throw UsageError("bench_step needs at least one iteration");
    }
    using Clock = std::chrono::steady_clock;
    const BinaryGrid input = random_grid(width, height, seed);

    auto time_it = [&](auto&& fn) {
        std::size_t sink = 0;
        const auto start = Clock::now();
        for (std::size_t i = 0; i < iterations; ++i) {
            sink += fn(input).popcount();
        }
        const std::chrono::duration<double> elapsed = Clock::now() - start;
        bench_sink = sink;
        const double cells = static_cast<double>(width * height * iterations);
        return cells / std::max(elapsed.count(), 1e-12);
    };

    BenchReport report;
    report.rule = rule.number();
    report.boundary = bc;
    report.width = width;
    report.height = height;
    report.steps = iterations;
    report.seed = seed;
    report.input_digest = grid_digest(input);
    report.packed_cells_per_second =
        time_it([&](const BinaryGrid& g) { return step(g, rule, bc, opts); });
    report.naive_cells_per_second =
        time_it([&](const BinaryGrid& g) { return naive_step(g, rule, bc); });
    report.speedup = report.packed_cells_per_second / report.naive_cells_per_second;
    return report;
}

std::string to_key_value(std::string_view method, const EdgeMetrics& m) {
    return fmt::format(
        "method={} precision={} recall={} f1={} fom={} tp={} fp={} fn={}", method,
        m.precision, m.recall, m.f1, m.fom, m.true_pos, m.false_pos, m.false_neg);
}

std::string to_json_line(std::string_view method, const EdgeMetrics& m) {
    const nlohmann::ordered_json j = {
        {"method", method},       {"precision", m.precision}, {"recall", m.recall},
        {"f1", m.f1},             {"fom", m.fom},             {"true_pos", m.true_pos},
        {"false_pos", m.false_pos}, {"false_neg", m.false_neg},
    };
    return j.dump();
}

std::string to_key_value(const BenchReport& r) {
    return fmt::format(
        "rule={} boundary={} grid_size={}x{} steps={} seed={} input_digest={:016x} "
        "packed_cells_per_second={} naive_cells_per_second={} speedup={}",
        r.rule, to_string(r.boundary), r.width, r.height, r.steps, r.seed, r.input_digest,
        r.packed_cells_per_second, r.naive_cells_per_second, r.speedup);
}

std::string to_json_line(const BenchReport& r) {
    const nlohmann::ordered_json j = {
        {"rule", r.rule},
        {"boundary", to_string(r.boundary)},
        {"grid_size", fmt::format("{}x{}", r.width, r.height)},
        {"steps", r.steps},
        {"seed", r.seed},
        {"input_digest", fmt::format("{:016x}", r.input_digest)},
        {"packed_cells_per_second", r.packed_cells_per_second},
        {"naive_cells_per_second", r.naive_cells_per_second},
        {"speedup", r.speedup},
    };
    return j.dump();
}

}  // namespace caedge

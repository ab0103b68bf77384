#include "caedge/rules.hpp"

#include "caedge/error.hpp"
#include "row_kernels.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <thread>

namespace caedge {

std::string_view short_name(Neighbor n) {
    constexpr std::array<std::string_view, 9> names{"C", "E", "SE", "S", "SW", "W", "NW", "N", "NE"};
    return names[static_cast<std::size_t>(n)];
}

LinearRule::LinearRule(long long number) {
    if (number < 0 || number >= static_cast<long long>(kRuleCount)) {
        throw InvalidRuleError("rule number must be in [0, 511], got " + std::to_string(number));
    }
    number_ = static_cast<std::uint16_t>(number);
}

std::size_t LinearRule::tap_count() const noexcept {
    return static_cast<std::size_t>(std::popcount(number_));
}

std::vector<Neighbor> LinearRule::taps() const {
    std::vector<Neighbor> out;
    for (const Neighbor n : kAllNeighbors) {
        if (has_tap(n)) {
            out.push_back(n);
        }
    }
    return out;
}

std::vector<NeighborOffset> LinearRule::tap_offsets() const {
    std::vector<NeighborOffset> out;
    for (const Neighbor n : taps()) {
        out.push_back(offset_of(n));
    }
    return out;
}

LinearRule rule_from_number(long long n) { return LinearRule(n); }

unsigned rule_number(std::span<const NeighborOffset> taps) {
    unsigned number = 0;
    for (const NeighborOffset off : taps) {
        const auto it = std::ranges::find(kAllNeighbors, off, offset_of);
        if (!off.valid() || it == kAllNeighbors.end()) {
            throw InvalidRuleError("tap (" + std::to_string(off.dr) + ", " +
                                   std::to_string(off.dc) + ") outside the 3x3 neighbourhood");
        }
        number |= weight_of(*it);
    }
    return number;
}

LinearRule rotate_cw(LinearRule rule) {
    std::vector<NeighborOffset> rotated;
    for (const NeighborOffset off : rule.tap_offsets()) {
        rotated.push_back({off.dc, -off.dr});
    }
    return LinearRule(rule_number(rotated));
}

namespace {

struct RowTaps {
    int dr;
    std::array<int, 3> dcs;
    std::size_t count = 0;
};

// Taps grouped by row offset so each source row is fetched once per output row.
std::vector<RowTaps> group_taps(LinearRule rule) {
    std::vector<RowTaps> groups;
    for (int dr = -1; dr <= 1; ++dr) {
        RowTaps g{dr, {}, 0};
        for (int dc = -1; dc <= 1; ++dc) {
            for (const Neighbor n : kAllNeighbors) {
                if (rule.has_tap(n) && offset_of(n) == NeighborOffset{dr, dc}) {
                    g.dcs[g.count++] = dc;
                }
            }
        }
        if (g.count > 0) {
            groups.push_back(g);
        }
    }
    return groups;
}

void step_rows(const BinaryGrid& g, const std::vector<RowTaps>& groups, Boundary bc,
               std::size_t begin, std::size_t end, std::span<BinaryGrid::Word> out) {
    const std::size_t per_row = g.words_per_row();
    const BinaryGrid::Word tail = g.tail_mask();
    for (std::size_t r = begin; r < end; ++r) {
        auto dst = out.subspan(r * per_row, per_row);
        for (const RowTaps& group : groups) {
            const auto src =
                detail::resolve_axis(static_cast<std::ptrdiff_t>(r) + group.dr, g.height(), bc);
            if (!src) {
                continue;
            }
            const auto src_row = g.row(*src);
            for (std::size_t k = 0; k < group.count; ++k) {
                detail::xor_column_shifted(src_row, group.dcs[k], bc, g.width(), tail, dst);
            }
        }
    }
}

}  // namespace

BinaryGrid step(const BinaryGrid& g, LinearRule rule, Boundary bc, StepOptions opts) {
    const auto groups = group_taps(rule);
    std::vector<BinaryGrid::Word> out(g.words().size(), 0);
    const std::size_t workers =
        std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(1, g.height()));
    if (workers == 1) {
        step_rows(g, groups, bc, 0, g.height(), out);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (g.height() + workers - 1) / workers;
        for (std::size_t begin = 0; begin < g.height(); begin += chunk) {
            const std::size_t end = std::min(g.height(), begin + chunk);
            pool.emplace_back([&, begin, end] { step_rows(g, groups, bc, begin, end, out); });
        }
    }
    return BinaryGrid::from_words(g.width(), g.height(), std::move(out));
}

BinaryGrid evolve(const BinaryGrid& g, LinearRule rule, Boundary bc, std::size_t steps,
                  StepOptions opts) {
    BinaryGrid current = g;
    for (std::size_t i = 0; i < steps; ++i) {
        current = step(current, rule, bc, opts);
    }
    return current;
}

BinaryGrid naive_step(const BinaryGrid& g, LinearRule rule, Boundary bc) {
    const auto taps = rule.tap_offsets();
    GridBuilder out(g.width(), g.height());
    for (std::size_t r = 0; r < g.height(); ++r) {
        for (std::size_t c = 0; c < g.width(); ++c) {
            bool v = false;
            for (const NeighborOffset t : taps) {
                v ^= sample(g, static_cast<std::ptrdiff_t>(r) + t.dr,
                            static_cast<std::ptrdiff_t>(c) + t.dc, bc);
            }
            out.set(r, c, v);
        }
    }
    return std::move(out).build();
}

}  // namespace caedge

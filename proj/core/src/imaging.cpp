#include "caedge/imaging.hpp"

#include "caedge/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <fstream>
#include <iterator>
#include <system_error>

namespace caedge {

// --- GrayImage ----------------------------------------------------------------

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {
    if (width == 0 || height == 0) {
        throw InvalidDimensionError("image dimensions must be at least 1x1");
    }
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) {
        throw InvalidDimensionError("image dimensions must be at least 1x1");
    }
    if (pixels_.size() != width * height) {
        throw ShapeError("pixel count " + std::to_string(pixels_.size()) + " != " +
                         std::to_string(width) + "x" + std::to_string(height));
    }
}

std::string_view to_string(PnmFormat f) {
    constexpr std::array<std::string_view, 6> names{"P1", "P2", "P3", "P4", "P5", "P6"};
    return names[static_cast<std::size_t>(f)];
}

// --- PNM decoding -------------------------------------------------------------

namespace {

constexpr std::size_t kMaxDimension = 1U << 20;

class PnmReader {
public:
    explicit PnmReader(std::string_view bytes) : data_(bytes) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError("pnm: " + what, pos_); }

    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            const char ch = data_[pos_];
            if (ch == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') {
                    ++pos_;
                }
            } else if (is_space(ch)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long read_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') {
            ++pos_;
        }
        if (start == pos_) {
            if (pos_ >= data_.size()) {
                fail(std::string("truncated while reading ") + what);
            }
            fail(std::string("expected ") + what);
        }
        unsigned long value = 0;
        const auto [ptr, ec] = std::from_chars(data_.data() + start, data_.data() + pos_, value);
        if (ec != std::errc{}) {
            pos_ = start;
            fail(std::string(what) + " out of range");
        }
        (void)ptr;
        return value;
    }

    /// P1 allows pixels without separators, so read one digit at a time.
    bool read_bit() {
        skip_space_and_comments();
        if (pos_ >= data_.size()) {
            fail("truncated payload");
        }
        const char ch = data_[pos_];
        if (ch != '0' && ch != '1') {
            fail(std::string("expected 0 or 1 in bitmap payload, got '") + ch + "'");
        }
        ++pos_;
        return ch == '1';
    }

    /// Exactly one whitespace byte separates the header from a raw payload.
    void end_header() {
        if (pos_ >= data_.size()) {
            fail("truncated header");
        }
        if (!is_space(data_[pos_])) {
            fail("expected whitespace after header");
        }
        ++pos_;
    }

    std::string_view take(std::size_t n) {
        if (remaining() < n) {
            const std::size_t have = remaining();
            pos_ = data_.size();
            fail("truncated payload: need " + std::to_string(n) + " bytes, have " +
                 std::to_string(have));
        }
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

private:
    static bool is_space(char ch) {
        return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' || ch == '\f';
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

std::uint8_t luma(unsigned r, unsigned g, unsigned b) {
    return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b) / 1000);
}

std::uint8_t rescale(unsigned long v, unsigned long maxval) {
    if (maxval == 255) {
        return static_cast<std::uint8_t>(v);
    }
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

}  // namespace

PnmImage read_pnm(std::string_view bytes) {
    PnmReader in(bytes);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] < '1' || bytes[1] > '6') {
        in.fail("bad magic number");
    }
    const int kind = bytes[1] - '0';
    in.take(2);

    const auto width = in.read_uint("width");
    const auto height = in.read_uint("height");
    if (width == 0 || height == 0 || width > kMaxDimension || height > kMaxDimension) {
        in.fail("invalid dimensions " + std::to_string(width) + "x" + std::to_string(height));
    }
    const bool bitmap = kind == 1 || kind == 4;
    unsigned long maxval = 1;
    if (!bitmap) {
        const std::size_t at = in.pos();
        maxval = in.read_uint("maxval");
        const bool raw = kind == 5 || kind == 6;
        if ((raw && maxval != 255) || maxval == 0 || maxval > 255) {
            throw ParseError("pnm: unsupported maxval " + std::to_string(maxval) +
                                 (raw ? " (raw formats require 255)" : " (must be 1..255)"),
                             at);
        }
    }

    switch (kind) {
        case 1: {
            GridBuilder b(width, height);
            for (std::size_t r = 0; r < height; ++r) {
                for (std::size_t c = 0; c < width; ++c) {
                    b.set(r, c, in.read_bit());
                }
            }
            return std::move(b).build();
        }
        case 4: {
            in.end_header();
            const std::size_t row_bytes = (width + 7) / 8;
            const auto payload = in.take(row_bytes * height);
            GridBuilder b(width, height);
            for (std::size_t r = 0; r < height; ++r) {
                for (std::size_t c = 0; c < width; ++c) {
                    const auto byte = static_cast<unsigned char>(payload[r * row_bytes + c / 8]);
                    b.set(r, c, (byte >> (7 - c % 8)) & 1U);
                }
            }
            return std::move(b).build();
        }
        case 2: {
            std::vector<std::uint8_t> px(width * height);
            for (auto& p : px) {
                const std::size_t at = in.pos();
                const auto v = in.read_uint("sample");
                if (v > maxval) {
                    throw ParseError("pnm: sample " + std::to_string(v) + " exceeds maxval", at);
                }
                p = rescale(v, maxval);
            }
            return GrayImage(width, height, std::move(px));
        }
        case 3: {
            std::vector<std::uint8_t> px(width * height);
            for (auto& p : px) {
                std::array<unsigned, 3> rgb{};
                for (auto& ch : rgb) {
                    const std::size_t at = in.pos();
                    const auto v = in.read_uint("sample");
                    if (v > maxval) {
                        throw ParseError("pnm: sample " + std::to_string(v) + " exceeds maxval",
                                         at);
                    }
                    ch = rescale(v, maxval);
                }
                p = luma(rgb[0], rgb[1], rgb[2]);
            }
            return GrayImage(width, height, std::move(px));
        }
        case 5: {
            in.end_header();
            const auto payload = in.take(width * height);
            std::vector<std::uint8_t> px(payload.begin(), payload.end());
            return GrayImage(width, height, std::move(px));
        }
        default: {
            in.end_header();
            const auto payload = in.take(width * height * 3);
            std::vector<std::uint8_t> px(width * height);
            for (std::size_t i = 0; i < px.size(); ++i) {
                px[i] = luma(static_cast<unsigned char>(payload[3 * i]),
                             static_cast<unsigned char>(payload[3 * i + 1]),
                             static_cast<unsigned char>(payload[3 * i + 2]));
            }
            return GrayImage(width, height, std::move(px));
        }
    }
}

PnmImage read_pnm(std::span<const std::byte> bytes) {
    return read_pnm(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

// --- PNM encoding -------------------------------------------------------------

namespace {

std::string header(PnmFormat f, std::size_t w, std::size_t h, bool with_maxval) {
    std::string out(to_string(f));
    out += '\n';
    out += std::to_string(w) + " " + std::to_string(h) + "\n";
    if (with_maxval) {
        out += "255\n";
    }
    return out;
}

std::string encode_bitmap(const BinaryGrid& g, PnmFormat f) {
    std::string out = header(f, g.width(), g.height(), false);
    if (f == PnmFormat::P1) {
        for (std::size_t r = 0; r < g.height(); ++r) {
            for (std::size_t c = 0; c < g.width(); ++c) {
                if (c > 0) {
                    out += ' ';
                }
                out += g(r, c) ? '1' : '0';
            }
            out += '\n';
        }
        return out;
    }
    const std::size_t row_bytes = (g.width() + 7) / 8;
    for (std::size_t r = 0; r < g.height(); ++r) {
        std::string row(row_bytes, '\0');
        for (std::size_t c = 0; c < g.width(); ++c) {
            if (g(r, c)) {
                row[c / 8] = static_cast<char>(static_cast<unsigned char>(row[c / 8]) |
                                               (0x80U >> (c % 8)));
            }
        }
        out += row;
    }
    return out;
}

std::string encode_graymap(const GrayImage& img, PnmFormat f) {
    std::string out = header(f, img.width(), img.height(), true);
    if (f == PnmFormat::P5) {
        out.append(reinterpret_cast<const char*>(img.pixels().data()), img.pixels().size());
        return out;
    }
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            if (c > 0) {
                out += ' ';
            }
            out += std::to_string(img(r, c));
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::string write_pnm(const PnmImage& img, PnmFormat format) {
    if (const auto* grid = std::get_if<BinaryGrid>(&img)) {
        if (format != PnmFormat::P1 && format != PnmFormat::P4) {
            throw UsageError("binary grids are written as P1 or P4, not " +
                             std::string(to_string(format)));
        }
        return encode_bitmap(*grid, format);
    }
    const auto& gray = std::get<GrayImage>(img);
    if (format != PnmFormat::P2 && format != PnmFormat::P5) {
        throw UsageError("gray images are written as P2 or P5, not " +
                         std::string(to_string(format)));
    }
    return encode_graymap(gray, format);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// --- thresholding -------------------------------------------------------------

ThresholdSpec parse_threshold_spec(std::string_view text) {
    if (text == "otsu") {
        return OtsuThreshold{};
    }
    constexpr std::string_view prefix = "fixed:";
    if (text.starts_with(prefix)) {
        const auto digits = text.substr(prefix.size());
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty() &&
            value <= 255) {
            return FixedThreshold{static_cast<std::uint8_t>(value)};
        }
    }
    throw UsageError("threshold must be 'otsu' or 'fixed:T' with T in 0..255, got '" +
                     std::string(text) + "'");
}

std::string to_string(const ThresholdSpec& spec) {
    if (const auto* f = std::get_if<FixedThreshold>(&spec)) {
        return "fixed:" + std::to_string(f->value);
    }
    return "otsu";
}

Histogram histogram(const GrayImage& img) {
    Histogram h{};
    for (const std::uint8_t p : img.pixels()) {
        ++h[p];
    }
    return h;
}

std::uint8_t otsu(const Histogram& hist) {
    using boost::multiprecision::int256_t;

    std::size_t lo = 0;
    while (lo < hist.size() && hist[lo] == 0) {
        ++lo;
    }
    if (lo == hist.size()) {
        return 0;
    }
    std::size_t hi = hist.size() - 1;
    while (hist[hi] == 0) {
        --hi;
    }

    int256_t total_n = 0;
    int256_t total_s = 0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
        total_n += hist[i];
        total_s += int256_t(hist[i]) * i;
    }

    // With n0/s0 the count/sum below t, N^2 times the between-class variance is
    // (s0*N - S*n0)^2 / (n0*n1). Compare candidates by cross-multiplying.
    std::size_t best_t = lo;
    int256_t best_num = 0;
    int256_t best_den = 1;
    int256_t n0 = 0;
    int256_t s0 = 0;
    for (std::size_t t = lo; t <= hi; ++t) {
        if (t > lo) {
            n0 += hist[t - 1];
            s0 += int256_t(hist[t - 1]) * (t - 1);
        }
        const int256_t n1 = total_n - n0;
        if (n0 == 0 || n1 == 0) {
            continue;
        }
        const int256_t d = s0 * total_n - total_s * n0;
        const int256_t num = d * d;
        const int256_t den = n0 * n1;
        if (num * best_den > best_num * den) {
            best_num = num;
            best_den = den;
            best_t = t;
        }
    }
    return static_cast<std::uint8_t>(best_t);
}

std::uint8_t otsu(const GrayImage& img) { return otsu(histogram(img)); }

BinaryGrid threshold(const GrayImage& img, std::uint8_t t) {
    GridBuilder b(img.width(), img.height());
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            if (img(r, c) >= t) {
                b.set(r, c, true);
            }
        }
    }
    return std::move(b).build();
}

BinaryGrid threshold(const GrayImage& img, const ThresholdSpec& spec) {
    const std::uint8_t t = std::visit(
        [&](const auto& s) -> std::uint8_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FixedThreshold>) {
                return s.value;
            } else {
                return otsu(img);
            }
        },
        spec);
    return threshold(img, t);
}

}  // namespace caedge

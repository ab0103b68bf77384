#include "caedge/cli.hpp"

#include <caedge/baselines.hpp>
#include <caedge/error.hpp>
#include <caedge/evaluation.hpp>
#include <caedge/grid.hpp>
#include <caedge/imaging.hpp>
#include <caedge/pipeline.hpp>
#include <caedge/rules.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <system_error>
#include <unistd.h>
#include <variant>
#include <vector>

namespace caedge::cli {

namespace {

namespace fs = std::filesystem;

// Argument errors detected after CLI11 parsing.
struct ArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- helpers ----------------------------------------------------------------

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggestion(std::string_view name, const std::vector<std::string>& known) {
    std::string best;
    std::size_t best_d = 3;
    for (const auto& k : known) {
        const std::size_t d = edit_distance(name, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best.empty() ? std::string{} : fmt::format(" (did you mean '{}'?)", best);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const auto item = text.substr(pos, comma - pos);
        if (!item.empty()) {
            out.emplace_back(item);
        }
        pos = comma + 1;
    }
    return out;
}

LinearRule parse_rule(std::string_view text) {
    long long n = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ArgumentError(fmt::format("'{}' is not a rule number", text));
    }
    return LinearRule(n);
}

Boundary parse_boundary_arg(const std::string& name) {
    if (const auto bc = parse_boundary(name)) {
        return *bc;
    }
    throw ArgumentError(fmt::format("unknown boundary '{}'{}", name,
                                    suggestion(name, {"null", "adiabatic", "reflexive"})));
}

PnmImage load(const std::string& path) {
    std::string bytes;
    try {
        bytes = read_file(path);
    } catch (const std::system_error& e) {
        throw ArgumentError(e.what());
    }
    return read_pnm(bytes);
}

GrayImage require_gray(const PnmImage& img) {
    if (const auto* gray = std::get_if<GrayImage>(&img)) {
        return *gray;
    }
    // A bitmap handed to an intensity-based method: set cells become white.
    const auto& grid = std::get<BinaryGrid>(img);
    GrayImage out(grid.width(), grid.height());
    for (std::size_t r = 0; r < grid.height(); ++r) {
        for (std::size_t c = 0; c < grid.width(); ++c) {
            out(r, c) = grid(r, c) ? 255 : 0;
        }
    }
    return out;
}

/// Writes through a temporary in the destination directory, then renames.
void write_atomic(const std::string& path, const std::string& bytes) {
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    const fs::path tmp =
        dir / fmt::format(".{}.tmp-{}-{}", target.filename().string(), ::getpid(),
                          std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ArgumentError(fmt::format("cannot write '{}'", path));
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ArgumentError(fmt::format("failed writing '{}'", path));
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ArgumentError(fmt::format("cannot replace '{}'", path));
    }
}

void write_edge_map(const std::string& path, const BinaryGrid& map, bool ascii) {
    write_atomic(path, write_pnm(map, ascii ? PnmFormat::P1 : PnmFormat::P4));
}

enum class ReportFormat { Text, JsonLines };

ReportFormat parse_report_format(const std::string& name) {
    if (name == "text") {
        return ReportFormat::Text;
    }
    if (name == "json-lines") {
        return ReportFormat::JsonLines;
    }
    throw ArgumentError(fmt::format("unknown report format '{}'{}", name,
                                    suggestion(name, {"text", "json-lines"})));
}

// --- rules ------------------------------------------------------------------

std::string describe_rule(LinearRule rule) {
    std::string out = fmt::format("rule {}", rule.number());
    std::vector<std::string> weights;
    std::vector<std::string> names;
    const auto taps = rule.taps();
    for (auto it = taps.rbegin(); it != taps.rend(); ++it) {
        weights.push_back(std::to_string(weight_of(*it)));
    }
    for (const Neighbor n : taps) {
        names.emplace_back(short_name(n));
    }
    out += fmt::format(" = {}\n", weights.empty() ? "0" : fmt::format("{}", fmt::join(weights, " + ")));
    out += fmt::format("taps: {}\n", names.empty() ? "(none)" : fmt::format("{}", fmt::join(names, " ")));
    for (int dr = -1; dr <= 1; ++dr) {
        out += ' ';
        for (int dc = -1; dc <= 1; ++dc) {
            const auto it = std::ranges::find(kAllNeighbors, NeighborOffset{dr, dc}, offset_of);
            out += rule.has_tap(*it) ? " #" : " .";
        }
        out += '\n';
    }
    return out;
}

// --- compare ----------------------------------------------------------------

struct CompareContext {
    const PnmImage* input = nullptr;
    Boundary boundary = Boundary::Adiabatic;
    ThresholdSpec threshold = OtsuThreshold{};
    BaselineSettings baselines;
};

std::vector<std::string> known_methods() {
    std::vector<std::string> k{"union", "xor"};
    for (const unsigned n : kEdgeRules) {
        k.push_back(fmt::format("rule{}", n));
    }
    for (const BaselineMethod m : kAllBaselines) {
        k.emplace_back(to_string(m));
    }
    return k;
}

BinaryGrid binarized(const CompareContext& ctx) {
    if (const auto* grid = std::get_if<BinaryGrid>(ctx.input)) {
        return *grid;
    }
    return threshold(std::get<GrayImage>(*ctx.input), ctx.threshold);
}

BinaryGrid run_method(const std::string& name, const CompareContext& ctx) {
    if (name == "union" || name == "xor") {
        std::vector<LinearRule> rules;
        for (const unsigned n : kEdgeRules) {
            rules.emplace_back(n);
        }
        return detect_edges_combined(binarized(ctx), rules, ctx.boundary,
                                     name == "union" ? CombineMode::Union : CombineMode::Xor);
    }
    if (name.starts_with("rule")) {
        PipelineConfig cfg;
        cfg.rule = parse_rule(std::string_view(name).substr(4));
        cfg.boundary = ctx.boundary;
        cfg.threshold = ctx.threshold;
        return detect_edges(binarized(ctx), cfg);
    }
    if (const auto m = parse_baseline_method(name)) {
        return run_baseline(require_gray(*ctx.input), *m, ctx.baselines);
    }
    throw ArgumentError(
        fmt::format("unknown method '{}'{}", name, suggestion(name, known_methods())));
}

// --- subcommand option bundles ------------------------------------------------

struct StepArgs {
    std::string input;
    std::string output;
    long long rule = 449;
    std::string boundary = "adiabatic";
    std::size_t steps = 1;
    bool ascii = false;
};

struct DetectArgs {
    std::string input;
    std::string output;
    long long rule = 449;
    std::string boundary = "adiabatic";
    std::string threshold = "otsu";
    std::size_t steps = 1;
    std::string combine;
    std::string mode = "union";
    bool ascii = false;
};

struct BaselineArgs {
    std::string input;
    std::string output;
    std::string method;
    std::optional<double> magnitude;
    std::optional<double> sigma;
    std::optional<double> low;
    std::optional<double> high;
    std::optional<double> zero_crossing;
    bool ascii = false;
};

struct CompareArgs {
    std::string input;
    std::string reference;
    std::string methods;
    std::string boundary = "adiabatic";
    std::string threshold = "otsu";
    std::string format = "text";
    std::string report;
    std::optional<double> magnitude;
    std::optional<double> sigma;
    std::optional<double> low;
    std::optional<double> high;
    std::optional<double> zero_crossing;
};

struct BenchArgs {
    std::string size = "1024x1024";
    long long rule = 449;
    std::string boundary = "adiabatic";
    std::size_t iters = 3;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string format = "text";
};

void add_baseline_flags(CLI::App* sub, std::optional<double>& magnitude, std::optional<double>& sigma,
                        std::optional<double>& low, std::optional<double>& high,
                        std::optional<double>& zero_crossing) {
    sub->add_option("--magnitude", magnitude,
                    "Gradient magnitude threshold for sobel/prewitt/roberts (default 128)");
    sub->add_option("--sigma", sigma, "Gaussian sigma for log (default 2.0) and canny (default 1.4)");
    sub->add_option("--low", low, "Canny low threshold, fraction of max magnitude (default 0.1)");
    sub->add_option("--high", high, "Canny high threshold, fraction of max magnitude (default 0.3)");
    sub->add_option("--zero-crossing", zero_crossing,
                    "LoG zero-crossing strength threshold (default 1.0)");
}

BaselineSettings baseline_settings(const std::string& method, std::optional<double> magnitude,
                                   std::optional<double> sigma, std::optional<double> low,
                                   std::optional<double> high,
                                   std::optional<double> zero_crossing) {
    BaselineSettings s;
    if (magnitude) {
        s.gradient_threshold = *magnitude;
    }
    if (sigma) {
        if (method == "log") {
            s.log_sigma = *sigma;
        } else {
            s.canny.sigma = *sigma;
        }
    }
    if (low) {
        s.canny.low = *low;
    }
    if (high) {
        s.canny.high = *high;
    }
    if (zero_crossing) {
        s.log_threshold = *zero_crossing;
    }
    return s;
}

// --- subcommand bodies ------------------------------------------------------

int do_rules(const std::optional<long long>& number, std::ostream& out) {
    if (number) {
        out << describe_rule(LinearRule(*number));
        return kOk;
    }
    out << "edge rules (centre plus three neighbours on one side):\n";
    for (const unsigned n : kEdgeRules) {
        out << '\n' << describe_rule(LinearRule(n));
    }
    return kOk;
}

int do_step(const StepArgs& a) {
    const LinearRule rule(a.rule);
    const Boundary bc = parse_boundary_arg(a.boundary);
    const PnmImage img = load(a.input);
    const auto* grid = std::get_if<BinaryGrid>(&img);
    if (grid == nullptr) {
        throw ArgumentError("step needs a binary P1/P4 input; use 'detect' for gray images");
    }
    write_edge_map(a.output, evolve(*grid, rule, bc, a.steps), a.ascii);
    return kOk;
}

int do_detect(const DetectArgs& a) {
    const Boundary bc = parse_boundary_arg(a.boundary);
    const ThresholdSpec thr = parse_threshold_spec(a.threshold);
    const auto mode = parse_combine_mode(a.mode);
    if (!mode) {
        throw ArgumentError(
            fmt::format("unknown mode '{}'{}", a.mode, suggestion(a.mode, {"union", "xor"})));
    }
    const PnmImage img = load(a.input);

    BinaryGrid result(1, 1);
    if (!a.combine.empty()) {
        if (a.steps != 1) {
            throw ArgumentError("--combine applies each rule once; --steps must be 1");
        }
        std::vector<LinearRule> rules;
        for (const auto& item : split_list(a.combine)) {
            rules.push_back(parse_rule(item));
        }
        if (rules.empty()) {
            throw ArgumentError("--combine needs at least one rule");
        }
        result = std::visit(
            [&](const auto& in) {
                if constexpr (std::is_same_v<std::decay_t<decltype(in)>, GrayImage>) {
                    return detect_edges_combined(in, rules, bc, thr, *mode);
                } else {
                    return detect_edges_combined(in, rules, bc, *mode);
                }
            },
            img);
    } else {
        PipelineConfig cfg;
        cfg.rule = LinearRule(a.rule);
        cfg.boundary = bc;
        cfg.threshold = thr;
        cfg.steps = a.steps;
        result = std::visit([&](const auto& in) { return detect_edges(in, cfg); }, img);
    }
    write_edge_map(a.output, result, a.ascii);
    return kOk;
}

int do_baseline(const BaselineArgs& a) {
    const auto method = parse_baseline_method(a.method);
    if (!method) {
        std::vector<std::string> names;
        for (const BaselineMethod m : kAllBaselines) {
            names.emplace_back(to_string(m));
        }
        throw ArgumentError(
            fmt::format("unknown method '{}'{}", a.method, suggestion(a.method, names)));
    }
    const auto settings =
        baseline_settings(a.method, a.magnitude, a.sigma, a.low, a.high, a.zero_crossing);
    const PnmImage img = load(a.input);
    write_edge_map(a.output, run_baseline(require_gray(img), *method, settings), a.ascii);
    return kOk;
}

int do_compare(const CompareArgs& a, std::ostream& out) {
    const auto methods = split_list(a.methods);
    if (methods.empty()) {
        throw ArgumentError("--methods needs at least one method");
    }
    const ReportFormat format = parse_report_format(a.format);
    CompareContext ctx;
    ctx.boundary = parse_boundary_arg(a.boundary);
    ctx.threshold = parse_threshold_spec(a.threshold);
    ctx.baselines = baseline_settings("", a.magnitude, a.sigma, a.low, a.high, a.zero_crossing);
    if (a.sigma) {
        ctx.baselines.log_sigma = *a.sigma;
    }

    const PnmImage img = load(a.input);
    const PnmImage ref_img = load(a.reference);
    const auto* reference = std::get_if<BinaryGrid>(&ref_img);
    if (reference == nullptr) {
        throw ArgumentError("reference must be a binary P1/P4 edge map");
    }
    const auto [w, h] = std::visit([](const auto& i) { return std::pair{i.width(), i.height()}; }, img);
    if (w != reference->width() || h != reference->height()) {
        throw ArgumentError(fmt::format("reference is {}x{} but input is {}x{}", reference->width(),
                                        reference->height(), w, h));
    }
    ctx.input = &img;

    std::vector<std::pair<std::string, EdgeMetrics>> rows;
    for (const auto& name : methods) {
        rows.emplace_back(name, confusion_metrics(run_method(name, ctx), *reference));
    }
    std::ranges::sort(rows, [](const auto& x, const auto& y) {
        if (x.second.f1 != y.second.f1) {
            return x.second.f1 > y.second.f1;
        }
        return x.first < y.first;
    });

    std::string report;
    for (const auto& [name, m] : rows) {
        report += format == ReportFormat::Text ? to_key_value(name, m) : to_json_line(name, m);
        report += '\n';
    }
    if (a.report.empty()) {
        out << report;
    } else {
        write_atomic(a.report, report);
    }
    return kOk;
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
    const auto x = text.find('x');
    std::size_t w = 0;
    std::size_t h = 0;
    bool ok = x != std::string::npos;
    if (ok) {
        const auto* mid = text.data() + x;
        const auto* end = text.data() + text.size();
        const auto r1 = std::from_chars(text.data(), mid, w);
        const auto r2 = std::from_chars(mid + 1, end, h);
        ok = r1.ec == std::errc{} && r1.ptr == mid && r2.ec == std::errc{} && r2.ptr == end;
    }
    if (!ok || w == 0 || h == 0) {
        throw ArgumentError(fmt::format("--size must be WxH with W, H >= 1, got '{}'", text));
    }
    return {w, h};
}

int do_bench(const BenchArgs& a, std::ostream& out) {
    const auto [w, h] = parse_size(a.size);
    const LinearRule rule(a.rule);
    const Boundary bc = parse_boundary_arg(a.boundary);
    const ReportFormat format = parse_report_format(a.format);
    if (a.iters == 0) {
        throw ArgumentError("--iters must be >= 1");
    }
    const BenchReport r = bench_step(w, h, rule, bc, a.iters, a.seed, StepOptions{a.workers});
    out << (format == ReportFormat::Text ? to_key_value(r) : to_json_line(r)) << '\n';
    return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cellular-automaton edge detection toolkit", "caedge"};
    app.require_subcommand(1, 1);

    std::optional<long long> rule_number;
    auto* rules = app.add_subcommand("rules", "Show the edge rules, or the tap mask of rule N");
    rules->add_option("n", rule_number, "Rule number 0..511");

    StepArgs step_args;
    auto* step_cmd = app.add_subcommand("step", "Apply a linear rule to a binary P1/P4 image");
    step_cmd->add_option("input", step_args.input, "Binary PNM input")->required();
    step_cmd->add_option("output", step_args.output, "Edge map output")->required();
    step_cmd->add_option("--rule", step_args.rule, "Rule number 0..511")->capture_default_str();
    step_cmd->add_option("--boundary", step_args.boundary, "null|adiabatic|reflexive")
        ->capture_default_str();
    step_cmd->add_option("--steps", step_args.steps, "Synchronous updates")->capture_default_str();
    step_cmd->add_flag("--ascii", step_args.ascii, "Write P1 instead of P4");

    DetectArgs detect_args;
    auto* detect = app.add_subcommand("detect", "Threshold an image and apply edge rules");
    detect->add_option("input", detect_args.input, "PNM input")->required();
    detect->add_option("output", detect_args.output, "Edge map output")->required();
    detect->add_option("--rule", detect_args.rule, "Rule number 0..511")->capture_default_str();
    detect->add_option("--boundary", detect_args.boundary, "null|adiabatic|reflexive")
        ->capture_default_str();
    detect->add_option("--threshold", detect_args.threshold, "otsu|fixed:T")->capture_default_str();
    detect->add_option("--steps", detect_args.steps, "Synchronous updates")->capture_default_str();
    detect->add_option("--combine", detect_args.combine, "Comma-separated rules to combine");
    detect->add_option("--mode", detect_args.mode, "union|xor")->capture_default_str();
    detect->add_flag("--ascii", detect_args.ascii, "Write P1 instead of P4");

    BaselineArgs base_args;
    auto* baseline = app.add_subcommand("baseline", "Run a classical edge detector");
    baseline->add_option("input", base_args.input, "PNM input")->required();
    baseline->add_option("output", base_args.output, "Edge map output")->required();
    baseline->add_option("--method", base_args.method, "sobel|prewitt|roberts|log|canny")
        ->required();
    add_baseline_flags(baseline, base_args.magnitude, base_args.sigma, base_args.low,
                       base_args.high, base_args.zero_crossing);
    baseline->add_flag("--ascii", base_args.ascii, "Write P1 instead of P4");

    CompareArgs cmp_args;
    auto* compare = app.add_subcommand("compare", "Score methods against a reference edge map");
    compare->add_option("input", cmp_args.input, "PNM input")->required();
    compare->add_option("--reference", cmp_args.reference, "Binary reference edge map")->required();
    compare->add_option("--methods", cmp_args.methods,
                        "Comma-separated: ruleN, union, xor, sobel, prewitt, roberts, log, canny")
        ->required();
    compare->add_option("--boundary", cmp_args.boundary, "Boundary for CA methods")
        ->capture_default_str();
    compare->add_option("--threshold", cmp_args.threshold, "Threshold for CA methods")
        ->capture_default_str();
    compare->add_option("--format", cmp_args.format, "text|json-lines")->capture_default_str();
    compare->add_option("--report", cmp_args.report, "Write the report here instead of stdout");
    add_baseline_flags(compare, cmp_args.magnitude, cmp_args.sigma, cmp_args.low, cmp_args.high,
                       cmp_args.zero_crossing);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time the packed step against the naive step");
    bench->add_option("--size", bench_args.size, "Grid size WxH")->capture_default_str();
    bench->add_option("--rule", bench_args.rule, "Rule number 0..511")->capture_default_str();
    bench->add_option("--boundary", bench_args.boundary, "null|adiabatic|reflexive")
        ->capture_default_str();
    bench->add_option("--iters", bench_args.iters, "Timed iterations")->capture_default_str();
    bench->add_option("--seed", bench_args.seed, "Input generator seed")->capture_default_str();
    bench->add_option("--workers", bench_args.workers, "Packed-step worker threads")
        ->capture_default_str();
    bench->add_option("--format", bench_args.format, "text|json-lines")->capture_default_str();

    std::vector<const char*> argv{"caedge"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*rules) {
            return do_rules(rule_number, out);
        }
        if (*step_cmd) {
            return do_step(step_args);
        }
        if (*detect) {
            return do_detect(detect_args);
        }
        if (*baseline) {
            return do_baseline(base_args);
        }
        if (*compare) {
            return do_compare(cmp_args, out);
        }
        return do_bench(bench_args, out);
    } catch (const ParseError& e) {
        err << "caedge: malformed input: " << e.what() << '\n';
        return kInputFormat;
    } catch (const ArgumentError& e) {
        err << "caedge: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "caedge: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "caedge: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace caedge::cli

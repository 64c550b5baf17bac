#include "oscil/campaigns.hpp"
#include "oscil/convex_minorant.hpp"
#include "oscil/geometry.hpp"
#include "oscil/majorant.hpp"
#include "oscil/serialization.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace oscil;

namespace {

// Exit codes: 0 success, 1 campaign failures, 2 invalid input.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string input;
    std::string output;
    std::size_t grid = 128;
    std::string seeds = "0..100";
    std::string modulus = "power:0.5";
    double horizon = 1.0;
    std::optional<double> tolerance;
    double t0 = 1.0;
    double delta = 0.1;
    double t = 1.0;
    std::string statement;
    std::size_t pieces_max = 16;
    double epsilon = 1.0;
    double bound = 1.0;
    std::size_t pieces = 512;
};

nlohmann::json read_json(const std::string& path) {
    if (path.empty()) throw InputError("--input is required");
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(fmt::format("{}: not valid JSON ({})", path, e.what()));
    }
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

Modulus load_modulus(const Config& cfg) {
    if (std::filesystem::exists(cfg.modulus)) return modulus_from_json(read_json(cfg.modulus));
    return parse_modulus_spec(cfg.modulus, cfg.horizon);
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const auto s = std::stoull(text);
            return {s};
        }
        std::size_t used = 0;
        const auto first = std::stoull(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument(text);
        const std::string rest = text.substr(dots + 2);
        const auto last = std::stoull(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(text);
        if (last <= first) throw InputError("--seeds: range '" + text + "' is empty");
        return seed_range(first, last);
    } catch (const std::logic_error&) {
        throw InputError("--seeds: expected A..B (B exclusive) or a single seed, got '" + text + "'");
    }
}

std::string table(const VerificationReport& r) {
    return fmt::format("{:<14} {:>8} {:>9} {:>8} {:>14} {:>10} {}\n{:<14} {:>8} {:>9} {:>8} {:>14.6e} {:>10.1e} {}\n",
                       "statement", "trials", "failures", "skipped", "worst_margin", "tolerance", "result", r.name,
                       r.trials, r.failures, r.skipped, r.worst_margin, r.tolerance, r.passed() ? "PASS" : "FAIL");
}

int run_rearrange(const Config& cfg) {
    const StepFunction phi = step_function_from_json(read_json(cfg.input));
    write_output(cfg.output, step_function_to_json(decreasing_rearrangement(phi)).dump(2) + "\n");
    return 0;
}

int run_profile(const Config& cfg) {
    const StepFunction phi = step_function_from_json(read_json(cfg.input));
    const auto lengths = profile_lengths(phi.domain().length(), cfg.grid);
    write_output(cfg.output, profile_csv(oscillation_profile(phi, lengths)));
    return 0;
}

int run_verify(const Config& cfg) {
    const auto seeds = parse_seeds(cfg.seeds);
    CampaignSettings settings;
    settings.grid_size = cfg.grid;
    settings.pieces_max = cfg.pieces_max;
    settings.tolerance = cfg.tolerance;

    VerificationReport report;
    const std::string& st = cfg.statement;
    if (st == "rearrangement") {
        report = verify_rearrangement(seeds, settings);
    } else if (st == "thcor") {
        report = verify_thcor(seeds, settings);
    } else if (st == "pr00") {
        report = verify_pr00(seeds, settings);
    } else if (st == "cutout" || st == "inf_bound" || st == "lem55") {
        const GeometryContext ctx(load_modulus(cfg));
        if (st == "cutout") report = verify_cutout(seeds, ctx, settings);
        if (st == "inf_bound") report = verify_inf_bound(seeds, ctx, settings);
        if (st == "lem55") report = verify_lem55(seeds, ctx, settings);
    } else if (st == "th0_linear") {
        const LinearStaircaseReport r = verify_th0_linear(cfg.epsilon, load_modulus(cfg), cfg.bound, cfg.pieces, cfg.grid);
        report = r.report;
        report.witness["max_variance_gap"] = r.max_variance_gap;
        report.witness["gap_bound"] = r.gap_bound;
        report.witness["dominates"] = r.dominates;
    } else {
        throw InputError("unknown statement '" + st + "'");
    }
    std::fputs(table(report).c_str(), stdout);
    const std::string json = to_json(report).dump(2) + "\n";
    if (!cfg.output.empty()) write_output(cfg.output, json);
    return report.passed() ? 0 : 1;
}

int run_convexify(const Config& cfg) {
    const nlohmann::json j = read_json(cfg.input);
    SampledFunction f;
    try {
        f.grid = j.at("grid").get<std::vector<double>>();
        f.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("convexify: expected {\"grid\": [...], \"values\": [...]} (") + e.what() + ")");
    }
    const SampledFunction g = parabolic_convex_minorant(f);
    std::string out = "s,f,conv\n";
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
        out += fmt::format("{:.17g},{:.17g},{:.17g}\n", g.grid[i], f.values[i], g.values[i]);
    }
    write_output(cfg.output, out);
    return 0;
}

int run_geometry(const Config& cfg) {
    const GeometryContext ctx(load_modulus(cfg));
    if (!(cfg.t > 0.0 && cfg.t <= ctx.horizon())) {
        throw InputError(fmt::format("--t must lie in (0, {}]", ctx.horizon()));
    }
    const double x = ctx.modulus().eval(cfg.t);
    const auto taus = uniform_grid(0.0, cfg.t, cfg.grid);
    // gamma^t with the strip boundaries x1^2 and x1^2 + xi^2(t) at the same abscissa
    std::string out = "tau,gamma1,gamma2,strip_lower,strip_upper\n";
    for (double tau : taus) {
        const PlanePoint g = ctx.gamma_t(cfg.t, tau);
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", tau, g.x1, g.x2, g.x1 * g.x1,
                           g.x1 * g.x1 + x * x);
    }
    write_output(cfg.output, out);
    return 0;
}

int run_majorant(const Config& cfg) {
    const Modulus xi = load_modulus(cfg);
    const MajorantResult m = lemma_fn_majorant(xi, cfg.t0, cfg.delta, {.grid_intervals = cfg.grid});
    const auto& s = std::get<SampledModulus>(m.majorant.kind()).samples;
    std::string out = "t,xi,majorant\n";
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        out += fmt::format("{:.17g},{:.17g},{:.17g}\n", s.grid[i], xi.eval(s.grid[i]), s.values[i]);
    }
    write_output(cfg.output, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillation moduli, rearrangements and extremal geometry"};
    app.require_subcommand(1);
    Config cfg;

    auto grid_check = CLI::Range(std::size_t{8}, std::numeric_limits<std::size_t>::max());
    auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", cfg.output, "Output file (default stdout)"); };
    auto add_modulus = [&](CLI::App* sub) {
        sub->add_option("--modulus", cfg.modulus, "power:ALPHA[:SCALE], linear:SLOPE or a modulus JSON file");
        sub->add_option("--horizon", cfg.horizon, "Horizon T for inline modulus specs")->check(CLI::PositiveNumber);
    };

    auto* rearrange = app.add_subcommand("rearrange", "Decreasing rearrangement of a step function");
    rearrange->add_option("-i,--input", cfg.input, "Step function JSON")->required();
    add_output(rearrange);

    auto* profile = app.add_subcommand("profile", "Oscillation modulus of a step function (CSV)");
    profile->add_option("-i,--input", cfg.input, "Step function JSON")->required();
    profile->add_option("--grid", cfg.grid, "Number of window lengths")->check(grid_check);
    add_output(profile);

    auto* verify = app.add_subcommand("verify", "Run a verification campaign");
    verify->add_option("statement", cfg.statement,
                       "rearrangement | thcor | pr00 | cutout | inf_bound | lem55 | th0_linear")
        ->required()
        ->check(CLI::IsMember({"rearrangement", "thcor", "pr00", "cutout", "inf_bound", "lem55", "th0_linear"}));
    verify->add_option("--seeds", cfg.seeds, "Seed range A..B, B exclusive");
    verify->add_option("--grid", cfg.grid, "Length grid size")->check(grid_check);
    verify->add_option("--pieces-max", cfg.pieces_max, "Maximum pieces of random functions")->check(CLI::PositiveNumber);
    verify->add_option("--tolerance", cfg.tolerance, "Override the statement's tolerance")->check(CLI::NonNegativeNumber);
    verify->add_option("--epsilon", cfg.epsilon, "Slope of the staircase (th0_linear)");
    verify->add_option("--bound", cfg.bound, "Norm bound C (th0_linear)")->check(CLI::PositiveNumber);
    verify->add_option("--pieces", cfg.pieces, "Staircase pieces (th0_linear)")->check(CLI::PositiveNumber);
    add_modulus(verify);
    add_output(verify);

    auto* convexify = app.add_subcommand("convexify", "Parabolic convex minorant of sampled values (CSV)");
    convexify->add_option("-i,--input", cfg.input, "JSON {\"grid\": [...], \"values\": [...]}")->required();
    add_output(convexify);

    auto* geometry = app.add_subcommand("geometry", "Extremal curve and strip boundaries at scale t (CSV)");
    geometry->add_option("--t", cfg.t, "Scale t")->check(CLI::PositiveNumber);
    geometry->add_option("--grid", cfg.grid, "Number of tau intervals")->check(grid_check);
    add_modulus(geometry);
    add_output(geometry);

    auto* majorant = app.add_subcommand("majorant", "Majorant with t xi~(t) convex (CSV)");
    majorant->add_option("--t0", cfg.t0, "Anchor t0")->check(CLI::PositiveNumber);
    majorant->add_option("--delta", cfg.delta, "Allowed excess at t0")->check(CLI::PositiveNumber);
    majorant->add_option("--grid", cfg.grid, "Grid intervals")->check(grid_check);
    add_modulus(majorant);
    add_output(majorant);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*rearrange) return run_rearrange(cfg);
        if (*profile) return run_profile(cfg);
        if (*verify) return run_verify(cfg);
        if (*convexify) return run_convexify(cfg);
        if (*geometry) return run_geometry(cfg);
        if (*majorant) return run_majorant(cfg);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

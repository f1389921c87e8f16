#include "siwkit/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "siwkit/design_file.hpp"
#include "siwkit/em_oracle.hpp"
#include "siwkit/error.hpp"
#include "siwkit/filter_design.hpp"
#include "siwkit/q_extraction.hpp"
#include "siwkit/siw_design.hpp"
#include "siwkit/touchstone.hpp"

namespace siwkit {

namespace {

constexpr std::string_view version = "siwkit 0.1.0";

struct GlobalOptions {
    std::string substrate;  // empty = default preset, or the design file's own substrate
    std::string mode = "standard";
    std::string out;
};

void emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
    if (g.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(g.out, std::ios::binary);
    if (!file) throw Error(ErrorKind::IoError, fmt::format("cannot write '{}'", g.out));
    file << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::IoError, fmt::format("cannot write '{}'", path));
    file << text;
}

Substrate substrate_or_default(const GlobalOptions& g) {
    return g.substrate.empty() ? default_substrate() : resolve_substrate(g.substrate);
}

ResonatorDesign load_with_override(const GlobalOptions& g, const std::string& path) {
    auto design = load_design_file(path);
    if (!g.substrate.empty()) design.substrate = resolve_substrate(g.substrate);
    return design;
}

std::string validity_comments(const ValidityReport& report) {
    std::string out = fmt::format("# validity at {:.6f} GHz ({})\n", units::to_ghz(report.frequency),
                                  report.frequency_from_target ? "target" : "forward model");
    for (const auto& r : report.rules) {
        out += fmt::format("# {} {}\n", r.satisfied ? "[ok]  " : "[FAIL]", r.message);
    }
    return out;
}

struct DesignArgs {
    double f0_ghz = 0.0;
    double d_um = 0.0;
    double p_um = 0.0;
    double aspect = 1.0;
};

void run_design(const GlobalOptions& g, const DesignArgs& a, std::ostream& out) {
    ResonatorDesign design;
    design.substrate = substrate_or_default(g);
    design.target_f0 = units::from_ghz(a.f0_ghz);
    design.geometry = synthesize_cavity(*design.target_f0, design.substrate, units::from_um(a.d_um),
                                        units::from_um(a.p_um), a.aspect);
    const auto report = validate_design(design);
    const double f_check = resonant_frequency(design.substrate, design.geometry);
    std::string text = write_design_file(design);
    text += fmt::format("\n# forward check: f101 = {:.9f} GHz\n", units::to_ghz(f_check));
    text += validity_comments(report);
    emit(g, out, text);
}

struct AnalyzeArgs {
    std::vector<std::string> files;
    bool smooth = false;
};

int run_analyze(const GlobalOptions& g, const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    ExtractionOptions opts;
    opts.mode = parse_q_mode(g.mode);
    opts.smooth = a.smooth;

    // Files are processed concurrently; rows come out in argument order.
    std::vector<std::future<std::string>> jobs;
    jobs.reserve(a.files.size());
    for (const auto& file : a.files) {
        jobs.push_back(std::async(std::launch::async, [file, opts] {
            const auto doc = load_touchstone(file);  // names the file on failure
            try {
                return q_report_to_csv_row(file, extract_q_report(doc.trace, opts));
            } catch (const Error& e) {
                throw Error(e.kind(), fmt::format("{}: {}", file, e.detail()));
            }
        }));
    }
    std::string csv = std::string(q_report_csv_header) + "\n";
    int status = exit_ok;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            csv += jobs[i].get() + "\n";
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            status = exit_domain_error;
        }
    }
    emit(g, out, csv);
    return status;
}

struct VerifyArgs {
    std::string design;
    int resolution = 24;
    std::string field;
    std::string convergence;
};

void run_verify(const GlobalOptions& g, const VerifyArgs& a, std::ostream& out) {
    const auto design = load_with_override(g, a.design);
    const double f_model = resonant_frequency(design.substrate, design.geometry);
    const auto cavity = rasterize(design.geometry, design.substrate, a.resolution);
    const auto result = solve_dominant_mode(cavity, design.substrate);
    const double gap = 100.0 * (result.f_oracle - f_model) / f_model;

    std::string text = "f_model_GHz,f_oracle_GHz,gap_percent,grid_nx,grid_ny,iterations\n";
    text += fmt::format("{:.6f},{:.6f},{:.4f},{},{},{}\n", units::to_ghz(f_model), units::to_ghz(result.f_oracle), gap,
                        result.nx, result.ny, result.iterations);
    emit(g, out, text);

    if (!a.field.empty()) write_file(a.field, export_field(result));
    if (!a.convergence.empty()) {
        const auto eff = effective_dimensions(design.geometry);
        const auto points = convergence_study(eff.w_eff, eff.l_eff, design.substrate, {40, 80, 160});
        write_file(a.convergence, convergence_to_csv(points));
    }
}

struct FilterArgs {
    double f0_ghz = 20.3;
    double fbw = 0.02;
    int order = 2;
    std::string family = "butterworth";
    double ripple = 0.1;
    std::optional<double> qu;
    double d_um = 200.0;
    double p_um = 250.0;
    std::size_t points = 1201;
    std::string plan;
};

void run_filter(const GlobalOptions& g, const FilterArgs& a, std::ostream& out, std::ostream& err) {
    FilterSpec spec;
    spec.f0 = units::from_ghz(a.f0_ghz);
    spec.fbw = a.fbw;
    spec.order = a.order;
    spec.family = parse_response_family(a.family);
    spec.ripple_db = spec.family == ResponseFamily::Chebyshev ? a.ripple : 0.0;
    spec.q_unloaded = a.qu;
    spec.validate();

    const auto plan = coupling_plan(spec, substrate_or_default(g), units::from_um(a.d_um), units::from_um(a.p_um));
    const auto response = simulate_response(plan, spec, default_filter_grid(spec, a.points));
    emit(g, out, response_to_csv(response));

    std::string plan_text = plan_to_text(plan, spec);
    plan_text += fmt::format(
        "\n[metrics]\nmidband_il_db = {:.6f}\nbandwidth_3db_mhz = {:.6f}\ncenter_ghz = {:.9f}\nestimated_il_db = {:.6f}\n",
        response.metrics.midband_il_db, units::to_mhz(response.metrics.bandwidth_3db),
        units::to_ghz(response.metrics.center), midband_insertion_loss(plan, spec));
    if (a.plan.empty()) err << plan_text;
    else write_file(a.plan, plan_text);
}

struct SweepArgs {
    std::string design;
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int steps = 11;
};

void run_sweep(const GlobalOptions& g, const SweepArgs& a, std::ostream& out) {
    const auto design = load_with_override(g, a.design);
    emit(g, out, sweep_to_csv(parameter_sweep(design, a.parameter, a.from, a.to, a.steps)));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SIW cavity resonator and filter design toolkit", "siwkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    bool show_version = false;
    app.add_option("--substrate", g.substrate, "substrate preset name or [substrate] file");
    app.add_option("--mode", g.mode, "Q extraction mode")->check(CLI::IsMember({"standard", "paper-literal"}));
    app.add_option("--out", g.out, "write machine-readable output to this path");
    app.add_flag("--version", show_version, "print the version to stderr");

    DesignArgs design_args;
    auto* design = app.add_subcommand("design", "inverse design from a target frequency");
    design->add_option("--f0", design_args.f0_ghz, "target frequency, GHz")->required();
    design->add_option("--d", design_args.d_um, "via diameter, um")->required();
    design->add_option("--p", design_args.p_um, "via pitch, um")->required();
    design->add_option("--aspect", design_args.aspect, "l_eff / w_eff")->capture_default_str();

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "extract Q from 2-port Touchstone files");
    analyze->add_option("files", analyze_args.files, ".s2p files")->required();
    analyze->add_flag("--smooth", analyze_args.smooth, "3-point moving average on |S21|");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "compare the eigenmode oracle with the closed-form model");
    verify->add_option("design", verify_args.design, "design file")->required();
    verify->add_option("--resolution", verify_args.resolution, "grid nodes per via diameter")->capture_default_str();
    verify->add_option("--field", verify_args.field, "write the normalized |Ey| matrix here");
    verify->add_option("--convergence", verify_args.convergence, "write a solid-wall convergence study CSV here");

    FilterArgs filter_args;
    auto* filter = app.add_subcommand("filter", "coupled-cavity bandpass synthesis and response");
    filter->add_option("--f0", filter_args.f0_ghz, "center frequency, GHz")->capture_default_str();
    filter->add_option("--fbw", filter_args.fbw, "fractional bandwidth")->capture_default_str();
    filter->add_option("--order", filter_args.order, "number of cavities")->capture_default_str();
    filter->add_option("--family", filter_args.family, "butterworth | chebyshev")->capture_default_str();
    filter->add_option("--ripple", filter_args.ripple, "Chebyshev ripple, dB")->capture_default_str();
    filter->add_option("--qu", filter_args.qu, "unloaded Q of each cavity (omit for lossless)");
    filter->add_option("--d", filter_args.d_um, "via diameter, um")->capture_default_str();
    filter->add_option("--p", filter_args.p_um, "via pitch, um")->capture_default_str();
    filter->add_option("--points", filter_args.points, "frequency points")->capture_default_str();
    filter->add_option("--plan", filter_args.plan, "write the coupling plan here (default: stderr)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "sweep one design parameter through the closed-form model");
    sweep->add_option("design", sweep_args.design, "design file")->required();
    sweep->add_option("--param", sweep_args.parameter, "w | l | d | p | eps_r")->required();
    sweep->add_option("--from", sweep_args.from, "start value (um, or eps_r)")->required();
    sweep->add_option("--to", sweep_args.to, "stop value (um, or eps_r)")->required();
    sweep->add_option("--steps", sweep_args.steps, "number of samples (>= 2)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        out << sub->help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return exit_usage_error;
    }
    if (show_version) err << version << "\n";

    try {
        if (design->parsed()) run_design(g, design_args, out);
        else if (analyze->parsed()) return run_analyze(g, analyze_args, out, err);
        else if (verify->parsed()) run_verify(g, verify_args, out);
        else if (filter->parsed()) run_filter(g, filter_args, out, err);
        else if (sweep->parsed()) run_sweep(g, sweep_args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_domain_error;
    }
    return exit_ok;
}

}  // namespace siwkit

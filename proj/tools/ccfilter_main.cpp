#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ccfilter/biquad.hpp"
#include "ccfilter/frequency_response.hpp"
#include "ccfilter/mna.hpp"
#include "ccfilter/netlist_io.hpp"
#include "ccfilter/response_analysis.hpp"
#include "ccfilter/sensitivity.hpp"
#include "ccfilter/sweep_csv.hpp"

namespace {

using namespace ccfilter;

// Exit-code contract: 0 success, 2 usage or parse problems, 3 failed checks
// or infeasible requests, 4 numerical failures.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComponentFlags {
    std::string r1, r3, r4, r6, c2, c5, b1, b2, k1, k2;
};

void add_component_flags(CLI::App* cmd, ComponentFlags& f) {
    cmd->add_option("--r1", f.r1, "R1 in ohms (default 10k)");
    cmd->add_option("--r3", f.r3, "R3 in ohms (default 14k)");
    cmd->add_option("--r4", f.r4, "R4 in ohms (default 10k)");
    cmd->add_option("--r6", f.r6, "R6 in ohms (default 10k)");
    cmd->add_option("--c2", f.c2, "C2 in farads (default 10n)");
    cmd->add_option("--c5", f.c5, "C5 in farads (default 10n)");
    cmd->add_option("--b1", f.b1, "voltage gain of conveyor 1 (default 1)");
    cmd->add_option("--b2", f.b2, "voltage gain of conveyor 2 (default 1)");
    cmd->add_option("--k1", f.k1, "current gain of conveyor 1 (default 1)");
    cmd->add_option("--k2", f.k2, "current gain of conveyor 2 (default 1)");
}

double parse_flag_value(const std::string& text, const char* flag, bool gain) {
    const auto v = parse_eng_value(text);
    if (!v) throw UsageError(std::string(flag) + " has malformed value '" + text + "'");
    if (!(*v > 0.0)) throw UsageError(std::string(flag) + " must be positive");
    if (gain && !(*v <= 2.0)) throw UsageError(std::string(flag) + " must be at most 2");
    return *v;
}

FilterDesign design_from_flags(const ComponentFlags& f) {
    FilterDesign d = FilterDesign::reference();
    if (!f.r1.empty()) d.r1 = parse_flag_value(f.r1, "r1", false);
    if (!f.r3.empty()) d.r3 = parse_flag_value(f.r3, "r3", false);
    if (!f.r4.empty()) d.r4 = parse_flag_value(f.r4, "r4", false);
    if (!f.r6.empty()) d.r6 = parse_flag_value(f.r6, "r6", false);
    if (!f.c2.empty()) d.c2 = parse_flag_value(f.c2, "c2", false);
    if (!f.c5.empty()) d.c5 = parse_flag_value(f.c5, "c5", false);
    if (!f.b1.empty()) d.b1 = parse_flag_value(f.b1, "b1", true);
    if (!f.b2.empty()) d.b2 = parse_flag_value(f.b2, "b2", true);
    if (!f.k1.empty()) d.k1 = parse_flag_value(f.k1, "k1", true);
    if (!f.k2.empty()) d.k2 = parse_flag_value(f.k2, "k2", true);
    return d;
}

struct SweepFlags {
    std::string wmin, wmax;
    int ppd = 200;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
    cmd->add_option("--wmin", f.wmin, "sweep start, rad/s (engineering suffixes ok)");
    cmd->add_option("--wmax", f.wmax, "sweep end, rad/s");
    cmd->add_option("--ppd", f.ppd, "grid points per decade (default 200, minimum 8)");
}

// Default window: three decades centered on the given frequency, which is
// itself always a grid point.
std::vector<double> sweep_grid(const SweepFlags& f, double center) {
    if (f.ppd < 8) throw UsageError("ppd must be at least 8");
    if (f.wmin.empty() != f.wmax.empty())
        throw UsageError("provide both --wmin and --wmax or neither");
    if (f.wmin.empty()) return centered_log_grid(center, 1.5, f.ppd);
    const double lo = parse_flag_value(f.wmin, "wmin", false);
    const double hi = parse_flag_value(f.wmax, "wmax", false);
    if (!(lo < hi)) throw UsageError("wmin must be less than wmax");
    return log_grid(lo, hi, f.ppd);
}

int threads_from_env() {
    const char* env = std::getenv("CCFILTER_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
        throw UsageError("CCFILTER_THREADS must be a nonnegative integer");
    if (v == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw ? static_cast<int>(hw) : 1;
    }
    return static_cast<int>(v);
}

FilterMode mode_from_string(const std::string& text) {
    const auto mode = parse_mode(text);
    if (!mode) throw UsageError("unknown mode '" + text + "' (use lp, hp, bp, or notch)");
    return *mode;
}

std::string_view long_mode_name(FilterMode mode) {
    switch (mode) {
    case FilterMode::low_pass: return "low-pass";
    case FilterMode::high_pass: return "high-pass";
    case FilterMode::band_pass: return "band-pass";
    case FilterMode::notch: return "notch";
    }
    return "?";
}

void print_params(std::ostream& os, const DesignParams& p) {
    char line[160];
    std::snprintf(line, sizeof line, "  omega0     %.6f rad/s  (%.6f Hz)\n", p.omega0,
                  p.omega0 / (2.0 * std::numbers::pi));
    os << line;
    std::snprintf(line, sizeof line, "  Q          %.6f\n", p.q);
    os << line;
    std::snprintf(line, sizeof line, "  bandwidth  %.6f rad/s  (%.6f Hz)\n", p.bandwidth,
                  p.bandwidth / (2.0 * std::numbers::pi));
    os << line;
}

void print_sensitivities(std::ostream& os, const SensitivityReport& report) {
    os << "sensitivity of " << (report.target == SensitivityTarget::omega0 ? "omega0" : "Q")
       << ":\n";
    os << "  param    analytic      numeric       |diff|\n";
    char line[160];
    for (const auto& [name, entry] : report.entries) {
        std::snprintf(line, sizeof line, "  %-6s %12.7f %12.7f  %9.2e\n", name.c_str(),
                      entry.analytic, entry.numeric, entry.abs_diff);
        os << line;
    }
}

void print_measured(std::ostream& os, const MeasuredParams& m) {
    char line[200];
    os << "shape: " << long_mode_name(m.kind) << "\n";
    std::snprintf(line, sizeof line, "  omega0     %.6g rad/s  (%.6g Hz)\n", m.omega0,
                  m.omega0 / (2.0 * std::numbers::pi));
    os << line;
    std::snprintf(line, sizeof line, "  Q          %.6g\n", m.q);
    os << line;
    std::snprintf(line, sizeof line, "  bandwidth  %.6g rad/s\n", m.bandwidth);
    os << line;
    std::snprintf(line, sizeof line,
                  "  gain       dc %.6g, hf %.6g, extremum %.6g\n", m.dc_gain, m.hf_gain,
                  m.peak_or_null_gain);
    os << line;
}

void print_response_table(std::ostream& os, const FrequencyResponse& resp) {
    os << "  omega_rad_s      freq_hz          mag           mag_db      phase_deg\n";
    char line[200];
    for (std::size_t i = 0; i < resp.size(); ++i) {
        const double w = resp.omega(i);
        const double mag = std::abs(resp.gain(i));
        const double db = mag > 0.0 ? std::max(20.0 * std::log10(mag), -400.0) : -400.0;
        const double phase = std::arg(resp.gain(i)) * 180.0 / std::numbers::pi;
        std::snprintf(line, sizeof line, "  %-15.9g %-15.9g %-13.6g %-11.4f %-11.4f\n", w,
                      w / (2.0 * std::numbers::pi), mag, db, phase);
        os << line;
    }
}

void emit_response(const FrequencyResponse& resp, const std::string& out_path,
                   const std::string& format) {
    std::ostringstream body;
    if (format == "table")
        print_response_table(body, resp);
    else
        write_sweep_csv(body, resp);
    if (out_path.empty()) {
        std::cout << body.str();
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + out_path + "'");
    file << body.str();
}

int run_design(const ComponentFlags& flags, double rel_step, bool params_too) {
    const FilterDesign d = design_from_flags(flags);
    if (params_too) {
        std::cout << "design parameters:\n";
        print_params(std::cout, design_params(d));
        std::cout << "\n";
    }
    const auto [w0, q] = numeric_sensitivities(d, rel_step);
    print_sensitivities(std::cout, w0);
    std::cout << "\n";
    print_sensitivities(std::cout, q);
    return 0;
}

int run_sweep(const std::string& mode_str, const ComponentFlags& flags, const SweepFlags& sweep,
              const std::string& engine, bool check, const std::string& out_path,
              const std::string& format) {
    const FilterMode mode = mode_from_string(mode_str);
    const FilterDesign d = design_from_flags(flags);
    const auto grid = sweep_grid(sweep, design_params(d).omega0);

    std::optional<FrequencyResponse> closed;
    std::optional<FrequencyResponse> mna;
    if (engine == "closed-form" || check)
        closed = sample_response(nonideal_transfer_function(d, mode), grid);
    if (engine == "mna" || check)
        mna = ac_sweep(build_reference_netlist(d, mode), grid, threads_from_env());

    if (check) {
        // Differences are measured against the sweep's peak gain: at a notch
        // null both engines return rounding noise, and a pointwise relative
        // comparison of two near-zeros would reject a correct result.
        double peak = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            peak = std::max({peak, std::abs(closed->gain(i)), std::abs(mna->gain(i))});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double diff = std::abs(closed->gain(i) - mna->gain(i));
            if (peak > 0.0 && diff > 1e-6 * peak)
                throw CheckError("engine disagreement at omega=" + std::to_string(grid[i]) +
                                 " rad/s: difference " + std::to_string(diff / peak) +
                                 " of the sweep peak");
        }
        std::cerr << "check: closed-form and nodal engines agree within 1e-6\n";
    }

    emit_response(engine == "mna" ? *mna : *closed, out_path, format);
    return 0;
}

int run_simulate(const std::string& path, const SweepFlags& sweep, const std::string& out_path,
                 const std::string& format) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open netlist file '" + path + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();

    const ParseResult parsed = parse_netlist(buffer.str());
    for (const auto& warning : parsed.warnings) std::cerr << "warning: " << warning << "\n";
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << path << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
        return 2;
    }
    const Netlist& netlist = *parsed.netlist;
    if (const auto problems = validate(netlist); !problems.empty()) {
        for (const auto& p : problems) std::cerr << path << ": " << p << "\n";
        return 2;
    }

    SweepFlags wide = sweep;
    const auto grid = [&] {
        if (!wide.wmin.empty() || !wide.wmax.empty()) return sweep_grid(wide, 0.0);
        if (wide.ppd < 8) throw UsageError("ppd must be at least 8");
        // No closed-form center is known for an arbitrary netlist; span four
        // decades around the component-value estimate instead.
        return centered_log_grid(estimate_char_freq(netlist), 2.0, wide.ppd);
    }();

    const FrequencyResponse resp = ac_sweep(netlist, grid, threads_from_env());

    if (const auto kind = classify(resp)) {
        print_measured(std::cerr, measure(resp, *kind));
    } else {
        std::cerr << "shape: unclassified (no standard response shape over this sweep)\n";
    }
    emit_response(resp, out_path, format);
    return 0;
}

int run_tune(const ComponentFlags& flags, const std::string& omega0_str,
             const std::string& bw_str) {
    const FilterDesign d = design_from_flags(flags);
    const DesignParams current = design_params(d);
    const double target_w0 =
        omega0_str.empty() ? current.omega0 : parse_flag_value(omega0_str, "omega0", false);
    const double target_bw =
        bw_str.empty() ? current.bandwidth : parse_flag_value(bw_str, "bw", false);

    const FilterDesign tuned = tune(d, target_w0, target_bw);
    const DesignParams achieved = design_params(tuned);

    char line[160];
    std::cout << "tuned components:\n";
    std::snprintf(line, sizeof line, "  R3  %.6f ohm\n", tuned.r3);
    std::cout << line;
    std::snprintf(line, sizeof line, "  C5  %.8g F\n", tuned.c5);
    std::cout << line;
    std::cout << "achieved:\n";
    print_params(std::cout, achieved);

    const double w0_err = std::abs(achieved.omega0 - target_w0) / target_w0;
    const double bw_err = std::abs(achieved.bandwidth - target_bw) / target_bw;
    if (w0_err > 1e-9 || bw_err > 1e-9)
        throw CheckError("achieved parameters miss the targets (omega0 off by " +
                         std::to_string(w0_err) + ", bandwidth off by " +
                         std::to_string(bw_err) + ")");
    std::cout << "targets matched within 1e-9\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"current-conveyor biquad filter: design equations, sensitivities, and"
                 " behavioral AC simulation"};
    app.require_subcommand(1);
    app.footer("exit codes: 0 success, 2 usage/parse, 3 failed check or infeasible, "
               "4 numerical failure");

    ComponentFlags design_flags, sweep_cflags, tune_flags, sens_flags;
    SweepFlags sweep_flags, sim_flags;
    std::string sweep_mode, sweep_engine = "closed-form", sweep_out, sweep_format = "csv";
    std::string sim_path, sim_out, sim_format = "csv";
    std::string tune_omega0, tune_bw;
    double sens_step = 1e-6;
    bool sweep_check = false;

    CLI::App* design = app.add_subcommand("design", "print design parameters and sensitivities");
    add_component_flags(design, design_flags);

    CLI::App* sens = app.add_subcommand("sens", "print the sensitivity tables only");
    add_component_flags(sens, sens_flags);
    sens->add_option("--rel-step", sens_step,
                     "relative step for the numeric check column (default 1e-6)");

    CLI::App* sweep = app.add_subcommand("sweep", "frequency response of a filter mode as CSV");
    sweep->add_option("mode", sweep_mode, "lp, hp, bp, or notch")->required();
    add_component_flags(sweep, sweep_cflags);
    add_sweep_flags(sweep, sweep_flags);
    sweep->add_option("--engine", sweep_engine, "closed-form or mna (default closed-form)")
        ->check(CLI::IsMember({"closed-form", "mna"}));
    sweep->add_flag("--check", sweep_check, "run both engines and fail on disagreement");
    sweep->add_option("--out", sweep_out, "write to file instead of stdout");
    sweep->add_option("--format", sweep_format, "csv or table (default csv)")
        ->check(CLI::IsMember({"csv", "table"}));

    CLI::App* simulate = app.add_subcommand("simulate", "sweep a netlist file and measure it");
    simulate->add_option("netlist", sim_path, "netlist file")->required();
    add_sweep_flags(simulate, sim_flags);
    simulate->add_option("--out", sim_out, "write sweep to file instead of stdout");
    simulate->add_option("--format", sim_format, "csv or table (default csv)")
        ->check(CLI::IsMember({"csv", "table"}));

    CLI::App* tune_cmd = app.add_subcommand("tune", "solve R3/C5 for target omega0/bandwidth");
    add_component_flags(tune_cmd, tune_flags);
    tune_cmd->add_option("--omega0", tune_omega0, "target omega0, rad/s");
    tune_cmd->add_option("--bw", tune_bw, "target bandwidth, rad/s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (design->parsed()) return run_design(design_flags, 1e-6, true);
        if (sens->parsed()) {
            if (!(sens_step >= 1e-9) || !(sens_step <= 1e-3))
                throw UsageError("rel-step must lie in [1e-9, 1e-3]");
            return run_design(sens_flags, sens_step, false);
        }
        if (sweep->parsed())
            return run_sweep(sweep_mode, sweep_cflags, sweep_flags, sweep_engine, sweep_check,
                             sweep_out, sweep_format);
        if (simulate->parsed()) return run_simulate(sim_path, sim_flags, sim_out, sim_format);
        if (tune_cmd->parsed()) return run_tune(tune_flags, tune_omega0, tune_bw);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CheckError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleTuningError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const MeasurementError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

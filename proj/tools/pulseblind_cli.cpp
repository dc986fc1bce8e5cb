// Command-line frontend for the pulseblind shared library. Everything goes
// through the C API; exit codes are 0 success, 2 configuration error,
// 3 invariant/agreement failure, 4 I/O error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pulseblind.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitIo = 4;

int exit_code_of(pb_status s) {
    switch (s) {
    case PB_OK: return kExitOk;
    case PB_ERR_CHECK_FAILED: return kExitCheckFailed;
    case PB_ERR_IO: return kExitIo;
    default: return kExitConfig;
    }
}

struct StringDeleter {
    void operator()(char* s) const { pb_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

struct ConfigDeleter {
    void operator()(pb_config* c) const { pb_config_destroy(c); }
};
using ConfigHandle = std::unique_ptr<pb_config, ConfigDeleter>;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::int64_t cycles = 0;
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    double l_start = 0.0;
    double l_end = 170.0;
    double l_step = 0.25;
    std::uint64_t intervals = 100000;
    bool no_attack = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "Configuration file (flat JSON object)");
    cmd->add_option("--out", opt.out_path, "Output file (stdout when omitted)");
    cmd->add_option("--cycles", opt.cycles, "Built-in blinding profile by cycle count")
        ->check(CLI::IsMember({250, 300, 350, 400, 450, 500}));
    cmd->add_option("--set", opt.overrides, "Override one configuration key (KEY=VALUE, repeatable)");
    cmd->add_option("--seed", opt.seed, "RNG seed for stochastic subcommands");
    cmd->add_option("--l-start", opt.l_start, "Sweep start (km)");
    cmd->add_option("--l-end", opt.l_end, "Sweep end (km)");
    cmd->add_option("--l-step", opt.l_step, "Sweep step (km)");
    cmd->add_option("--intervals", opt.intervals, "Blinding-group intervals to simulate");
    cmd->add_flag("--no-attack", opt.no_attack, "Sweep the undisturbed channel instead");
}

int fail_with(pb_status s) {
    std::cerr << "error: " << pb_last_error() << "\n";
    return exit_code_of(s);
}

int build_config(const CommonOptions& opt, ConfigHandle& out) {
    out.reset(pb_config_create());
    if (!out) {
        std::cerr << "error: cannot allocate configuration\n";
        return kExitConfig;
    }
    if (!opt.config_path.empty())
        if (pb_status s = pb_config_load_file(out.get(), opt.config_path.c_str()); s != PB_OK)
            return fail_with(s);
    if (opt.cycles != 0)
        if (pb_status s = pb_config_select_cycles(out.get(), opt.cycles); s != PB_OK)
            return fail_with(s);
    for (const auto& kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "error: --set expects KEY=VALUE, got '" << kv << "'\n";
            return kExitConfig;
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (pb_status s = pb_config_set(out.get(), key.c_str(), value.c_str()); s != PB_OK)
            return fail_with(s);
    }
    return kExitOk;
}

int write_output(const CommonOptions& opt, const char* text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << opt.out_path << "'\n";
        return kExitIo;
    }
    out << text;
    out.flush();
    if (!out) {
        std::cerr << "error: failed writing '" << opt.out_path << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_sweep(const CommonOptions& opt) {
    ConfigHandle cfg;
    if (int rc = build_config(opt, cfg); rc != kExitOk) return rc;
    char* csv = nullptr;
    if (pb_status s = pb_sweep_csv(cfg.get(), opt.l_start, opt.l_end, opt.l_step,
                                   opt.no_attack ? 1 : 0, &csv);
        s != PB_OK)
        return fail_with(s);
    ApiString holder(csv);
    return write_output(opt, csv);
}

int run_crossover(const CommonOptions& opt) {
    ConfigHandle cfg;
    if (int rc = build_config(opt, cfg); rc != kExitOk) return rc;
    char* json = nullptr;
    if (pb_status s = pb_crossover_json(cfg.get(), opt.l_start, opt.l_end, &json); s != PB_OK)
        return fail_with(s);
    ApiString holder(json);
    return write_output(opt, json);
}

int run_montecarlo(const CommonOptions& opt, bool grid_requested) {
    ConfigHandle cfg;
    if (int rc = build_config(opt, cfg); rc != kExitOk) return rc;

    std::vector<double> lengths;
    if (grid_requested) {
        if (opt.l_step <= 0.0 || opt.l_end < opt.l_start) {
            std::cerr << "error: montecarlo needs l_step > 0 and l_end >= l_start\n";
            return kExitConfig;
        }
        for (double l = opt.l_start; l <= opt.l_end + 0.5 * opt.l_step; l += opt.l_step)
            lengths.push_back(l);
    } else {
        lengths = {30.0, 50.0, 100.0};
    }

    char* json = nullptr;
    int agree = 0;
    if (pb_status s = pb_montecarlo_json(cfg.get(), lengths.data(), lengths.size(), opt.intervals,
                                         opt.seed, &json, &agree);
        s != PB_OK)
        return fail_with(s);
    ApiString holder(json);
    if (int rc = write_output(opt, json); rc != kExitOk) return rc;
    if (!agree) {
        std::cerr << "error: simulation disagrees with the closed-form gains (|z| > 4)\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int run_monitor(const CommonOptions& opt) {
    ConfigHandle cfg;
    if (int rc = build_config(opt, cfg); rc != kExitOk) return rc;
    char* csv = nullptr;
    int unexpected = 0;
    if (pb_status s = pb_monitor_csv(cfg.get(), &csv, &unexpected); s != PB_OK)
        return fail_with(s);
    ApiString holder(csv);
    if (int rc = write_output(opt, csv); rc != kExitOk) return rc;
    if (unexpected) {
        std::cerr << "error: a blinding profile raised the photocurrent alarm\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int run_calibrate(const CommonOptions& opt) {
    ConfigHandle cfg;
    if (int rc = build_config(opt, cfg); rc != kExitOk) return rc;
    char* csv = nullptr;
    char* verdict = nullptr;
    int ok = 0;
    if (pb_status s = pb_calibrate_csv(cfg.get(), opt.seed, &csv, &verdict, &ok); s != PB_OK)
        return fail_with(s);
    ApiString csv_holder(csv);
    ApiString verdict_holder(verdict);
    if (int rc = write_output(opt, csv); rc != kExitOk) return rc;
    std::cout << verdict;
    if (!ok) {
        std::cerr << "error: blinded-period calibration does not round-trip\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("pulseblind ") + pb_version() +
                 " - pulsed-blinding attack analysis for decoy-state BB84"};
    app.require_subcommand(1);

    CommonOptions opt;
    auto* sweep = app.add_subcommand("sweep", "Distance sweep of gains and key rates (CSV)");
    auto* crossover =
        app.add_subcommand("crossover", "Overestimation/insecurity crossover distances (JSON)");
    auto* montecarlo =
        app.add_subcommand("montecarlo", "Simulation vs closed-form agreement (JSON)");
    auto* monitor = app.add_subcommand("monitor", "Reported photocurrent per blinding profile (CSV)");
    auto* calibrate = app.add_subcommand("calibrate", "Simulated calibration re-run (CSV + verdict)");
    for (auto* cmd : {sweep, crossover, montecarlo, monitor, calibrate}) add_common_flags(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (sweep->parsed()) return run_sweep(opt);
    if (crossover->parsed()) return run_crossover(opt);
    if (montecarlo->parsed()) {
        const bool grid_requested = montecarlo->count("--l-start") || montecarlo->count("--l-end") ||
                                    montecarlo->count("--l-step");
        return run_montecarlo(opt, grid_requested);
    }
    if (monitor->parsed()) return run_monitor(opt);
    if (calibrate->parsed()) return run_calibrate(opt);
    return kExitConfig;
}

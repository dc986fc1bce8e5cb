#include "pulseblind.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "pulseblind/config.hpp"
#include "pulseblind/errors.hpp"
#include "pulseblind/pipelines.hpp"

using pulseblind::Config;
using pulseblind::Errc;
using pulseblind::Error;

struct pb_config {
    Config cfg;
};

namespace {

thread_local std::string t_last_error = "no error";

pb_status status_of(Errc code) {
    switch (code) {
    case Errc::Config: return PB_ERR_CONFIG;
    case Errc::Io: return PB_ERR_IO;
    default: return PB_ERR_INVALID_ARG;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// runs the body, captures errors into pb_last_error
template <typename Fn>
pb_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        t_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return PB_ERR_INVALID_ARG;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return PB_ERR_INVALID_ARG;
    }
}

pb_status require_arg(bool ok, const char* what) {
    if (ok) return PB_OK;
    t_last_error = what;
    return PB_ERR_INVALID_ARG;
}

} // namespace

extern "C" {

const char* pb_version(void) { return pulseblind::kVersion; }

const char* pb_last_error(void) { return t_last_error.c_str(); }

void pb_string_free(char* s) { delete[] s; }

pb_config* pb_config_create(void) {
    try {
        return new pb_config{};
    } catch (...) {
        return nullptr;
    }
}

void pb_config_destroy(pb_config* cfg) { delete cfg; }

pb_status pb_config_load_file(pb_config* cfg, const char* path) {
    if (pb_status s = require_arg(cfg && path, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        cfg->cfg = pulseblind::load_config_file(path);
        return PB_OK;
    });
}

pb_status pb_config_set(pb_config* cfg, const char* key, const char* value) {
    if (pb_status s = require_arg(cfg && key && value, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        cfg->cfg.set(key, value);
        return PB_OK;
    });
}

pb_status pb_config_select_cycles(pb_config* cfg, int64_t cycle_count) {
    if (pb_status s = require_arg(cfg != nullptr, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        cfg->cfg.select_cycles(cycle_count);
        return PB_OK;
    });
}

pb_status pb_sweep_csv(const pb_config* cfg, double l_start_km, double l_end_km, double l_step_km,
                       int no_attack, char** out_csv) {
    if (pb_status s = require_arg(cfg && out_csv, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        pulseblind::SweepOptions opt;
        opt.l_start_km = l_start_km;
        opt.l_end_km = l_end_km;
        opt.l_step_km = l_step_km;
        opt.no_attack = no_attack != 0;
        *out_csv = dup_string(pulseblind::run_sweep_csv(cfg->cfg, opt));
        return PB_OK;
    });
}

pb_status pb_crossover_json(const pb_config* cfg, double l_min_km, double l_max_km,
                            char** out_json) {
    if (pb_status s = require_arg(cfg && out_json, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        const auto report = pulseblind::run_crossovers(cfg->cfg, l_min_km, l_max_km);
        *out_json = dup_string(pulseblind::crossover_report_json(report));
        return PB_OK;
    });
}

pb_status pb_montecarlo_json(const pb_config* cfg, const double* lengths_km, size_t n_lengths,
                             uint64_t intervals, uint64_t seed, char** out_json,
                             int* all_within_4_sigma) {
    if (pb_status s = require_arg(cfg && out_json && (lengths_km || n_lengths == 0), "null argument");
        s != PB_OK)
        return s;
    return guarded([&] {
        pulseblind::MonteCarloOptions opt;
        opt.lengths_km.assign(lengths_km, lengths_km + n_lengths);
        opt.intervals = intervals;
        opt.seed = seed;
        const auto outcome = pulseblind::run_montecarlo(cfg->cfg, opt);
        *out_json = dup_string(outcome.json);
        if (all_within_4_sigma) *all_within_4_sigma = outcome.all_within_4_sigma ? 1 : 0;
        return PB_OK;
    });
}

pb_status pb_monitor_csv(const pb_config* cfg, char** out_csv, int* unexpected_alarm) {
    if (pb_status s = require_arg(cfg && out_csv, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        const auto outcome = pulseblind::run_monitor(cfg->cfg);
        *out_csv = dup_string(outcome.csv);
        if (unexpected_alarm) *unexpected_alarm = outcome.unexpected_alarm ? 1 : 0;
        return PB_OK;
    });
}

pb_status pb_calibrate_csv(const pb_config* cfg, uint64_t seed, char** out_csv,
                           char** out_verdict_json, int* round_trip_ok) {
    if (pb_status s = require_arg(cfg && out_csv, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        const auto outcome = pulseblind::run_calibrate(cfg->cfg, seed);
        *out_csv = dup_string(outcome.csv);
        if (out_verdict_json) *out_verdict_json = dup_string(outcome.verdict_json);
        if (round_trip_ok) *round_trip_ok = outcome.round_trip_ok ? 1 : 0;
        return PB_OK;
    });
}

pb_status pb_trace_csv(const pb_config* cfg, int64_t n_groups, double sample_period_s,
                       char** out_csv) {
    if (pb_status s = require_arg(cfg && out_csv, "null argument"); s != PB_OK) return s;
    return guarded([&] {
        *out_csv = dup_string(pulseblind::run_trace_csv(cfg->cfg, n_groups, sample_period_s));
        return PB_OK;
    });
}

} // extern "C"

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pulseblind/params.hpp"

namespace pulseblind {

// Aggregated run configuration. The flat key set accepted from files and
// --set overrides is exactly:
//   mu, nu, q_sift, f_ec, e0, e_det, y0, eta_bob, loss_coeff_db_per_km,
//   gate_frequency_hz, dead_time_s, interval_s, cycle_count,
//   blinded_period_s, controllable_gates
// Missing keys keep their defaults; unknown keys are a hard error.
struct Config {
    ProtocolParams protocol;
    DetectorTiming timing;
    BlindingConfig blinding;
    double blinded_period_s = 195.05e-6;
    std::int64_t controllable_gates = 690;

    // Replaces cycle count, blinded period and controllable gates with the
    // built-in measured row for the given cycle count.
    void select_cycles(std::int64_t cycle_count);

    // Applies one key=value override; the value uses the same parsing as the
    // configuration file.
    void set(const std::string& key, const std::string& value);

    void validate_all() const;

    AttackWindowProfile profile() const;

    // Effective values in canonical key order, formatted for the CSV echo.
    std::vector<std::pair<std::string, std::string>> effective() const;
};

// Parses a JSON configuration document.
Config load_config_text(const std::string& text);

Config load_config_file(const std::string& path);

} // namespace pulseblind

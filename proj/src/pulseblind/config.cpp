#include "pulseblind/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pulseblind/errors.hpp"
#include "pulseblind/format.hpp"

namespace pulseblind {

namespace {

std::int64_t to_count(double v, const std::string& key) {
    if (!(v >= 0.0) || std::floor(v) != v)
        fail(Errc::Config, "config key '" + key + "' must be a non-negative integer");
    return static_cast<std::int64_t>(v);
}

void apply(Config& c, const std::string& key, double v) {
    if (key == "mu")
        c.protocol.mu = v;
    else if (key == "nu")
        c.protocol.nu = v;
    else if (key == "q_sift")
        c.protocol.q_sift = v;
    else if (key == "f_ec")
        c.protocol.f_ec = v;
    else if (key == "e0")
        c.protocol.e0 = v;
    else if (key == "e_det")
        c.protocol.e_det = v;
    else if (key == "y0")
        c.protocol.y0 = v;
    else if (key == "eta_bob")
        c.protocol.eta_bob = v;
    else if (key == "loss_coeff_db_per_km")
        c.protocol.loss_coeff_db_per_km = v;
    else if (key == "gate_frequency_hz")
        c.timing.gate_frequency_hz = v;
    else if (key == "dead_time_s")
        c.timing.dead_time_s = v;
    else if (key == "interval_s")
        c.blinding.interval_s = v;
    else if (key == "cycle_count")
        c.blinding.cycle_count = to_count(v, key);
    else if (key == "blinded_period_s")
        c.blinded_period_s = v;
    else if (key == "controllable_gates")
        c.controllable_gates = to_count(v, key);
    else
        fail(Errc::Config, "unknown configuration key '" + key + "'");
}

} // namespace

void Config::select_cycles(std::int64_t cycle_count) {
    const BlindedRangeRow& row = blinded_range_row(cycle_count);
    blinding.cycle_count = row.cycle_count;
    blinded_period_s = row.blinded_period_s;
    controllable_gates = row.controllable_gates;
}

void Config::set(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    in.imbue(std::locale::classic());
    double v = 0.0;
    in >> v;
    if (in.fail() || !in.eof() || !std::isfinite(v))
        fail(Errc::Config, "configuration value for '" + key + "' is not a number: '" + value + "'");
    apply(*this, key, v);
}

void Config::validate_all() const {
    validate(protocol);
    validate(timing);
    validate(blinding, timing);
}

AttackWindowProfile Config::profile() const {
    return derive_window_profile(timing, blinding, blinded_period_s, controllable_gates);
}

std::vector<std::pair<std::string, std::string>> Config::effective() const {
    return {
        {"mu", fmt_sci(protocol.mu)},
        {"nu", fmt_sci(protocol.nu)},
        {"q_sift", fmt_sci(protocol.q_sift)},
        {"f_ec", fmt_sci(protocol.f_ec)},
        {"e0", fmt_sci(protocol.e0)},
        {"e_det", fmt_sci(protocol.e_det)},
        {"y0", fmt_sci(protocol.y0)},
        {"eta_bob", fmt_sci(protocol.eta_bob)},
        {"loss_coeff_db_per_km", fmt_sci(protocol.loss_coeff_db_per_km)},
        {"gate_frequency_hz", fmt_sci(timing.gate_frequency_hz)},
        {"dead_time_s", fmt_sci(timing.dead_time_s)},
        {"interval_s", fmt_sci(blinding.interval_s)},
        {"cycle_count", fmt_int(blinding.cycle_count)},
        {"blinded_period_s", fmt_sci(blinded_period_s)},
        {"controllable_gates", fmt_int(controllable_gates)},
    };
}

Config load_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::Config, std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(Errc::Config, "configuration must be a flat JSON object");

    Config c;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number())
            fail(Errc::Config, "configuration key '" + key + "' must carry a numeric value");
        apply(c, key, value.get<double>());
    }
    try {
        c.validate_all();
    } catch (const Error& e) {
        fail(Errc::Config, std::string("invalid configuration: ") + e.what());
    }
    return c;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str());
}

} // namespace pulseblind

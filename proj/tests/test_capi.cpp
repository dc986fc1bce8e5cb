#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include <doctest.h>

#include "pulseblind.h"

namespace {

struct ConfigDeleter {
    void operator()(pb_config* c) const { pb_config_destroy(c); }
};
using Handle = std::unique_ptr<pb_config, ConfigDeleter>;

struct StringDeleter {
    void operator()(char* s) const { pb_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

Handle make_config() {
    Handle h(pb_config_create());
    REQUIRE(h);
    return h;
}

std::string temp_config_file(const std::string& text) {
    const std::string path = "pb_test_config.json";
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

} // namespace

TEST_CASE("version and error text are always available") {
    CHECK(std::string(pb_version()) == "0.1.0");
    CHECK(pb_last_error() != nullptr);
}

TEST_CASE("null arguments are rejected without crashing") {
    CHECK(pb_config_load_file(nullptr, "x") == PB_ERR_INVALID_ARG);
    CHECK(pb_config_set(nullptr, "mu", "0.6") == PB_ERR_INVALID_ARG);
    CHECK(pb_sweep_csv(nullptr, 0, 1, 1, 0, nullptr) == PB_ERR_INVALID_ARG);
    pb_string_free(nullptr); // no-op
    pb_config_destroy(nullptr);
}

TEST_CASE("configuration loading, overrides and failure codes") {
    auto cfg = make_config();
    CHECK(pb_config_set(cfg.get(), "eta_bob", "0.045") == PB_OK);
    CHECK(pb_config_set(cfg.get(), "bogus", "1") == PB_ERR_CONFIG);
    CHECK(std::string(pb_last_error()).find("bogus") != std::string::npos);
    CHECK(pb_config_select_cycles(cfg.get(), 450) == PB_OK);
    CHECK(pb_config_select_cycles(cfg.get(), 123) == PB_ERR_CONFIG);

    CHECK(pb_config_load_file(cfg.get(), "definitely_missing.json") == PB_ERR_IO);

    const auto path = temp_config_file(R"({"mu": 0.65})");
    CHECK(pb_config_load_file(cfg.get(), path.c_str()) == PB_OK);
    const auto bad = temp_config_file(R"({"mu": 0.65, "oops": 3})");
    CHECK(pb_config_load_file(cfg.get(), bad.c_str()) == PB_ERR_CONFIG);
    std::remove(path.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("sweep CSV echoes the effective configuration and is deterministic") {
    auto cfg = make_config();
    REQUIRE(pb_config_set(cfg.get(), "eta_bob", "0.046") == PB_OK);

    char* csv1 = nullptr;
    char* csv2 = nullptr;
    REQUIRE(pb_sweep_csv(cfg.get(), 0.0, 10.0, 1.0, 0, &csv1) == PB_OK);
    REQUIRE(pb_sweep_csv(cfg.get(), 0.0, 10.0, 1.0, 0, &csv2) == PB_OK);
    ApiString a(csv1), b(csv2);
    const std::string text(csv1);
    CHECK(text == std::string(csv2));
    CHECK(text.find("# eta_bob = 4.60000000e-02\n") != std::string::npos);
    CHECK(text.find("# cycle_count = 500\n") != std::string::npos);
    CHECK(text.find("length_km,case,") != std::string::npos);

    char* na = nullptr;
    REQUIRE(pb_sweep_csv(cfg.get(), 0.0, 10.0, 1.0, 1, &na) == PB_OK);
    ApiString c(na);
    CHECK(std::string(na).find("NO_ATTACK") != std::string::npos);
}

TEST_CASE("crossover JSON carries the four report keys") {
    auto cfg = make_config();
    char* json = nullptr;
    REQUIRE(pb_crossover_json(cfg.get(), 0.0, 170.0, &json) == PB_OK);
    ApiString holder(json);
    const std::string text(json);
    for (const char* key :
         {"l_overestimate_km", "l_insecure_km", "feasible_min_km", "feasible_max_km"})
        CHECK(text.find(key) != std::string::npos);
    CHECK(text.find("NONE") == std::string::npos); // the default profile crosses both
}

TEST_CASE("monte carlo agreement over the C surface") {
    auto cfg = make_config();
    const double lengths[] = {50.0};
    char* json = nullptr;
    int agree = -1;
    REQUIRE(pb_montecarlo_json(cfg.get(), lengths, 1, 3000, 11, &json, &agree) == PB_OK);
    ApiString holder(json);
    CHECK(agree == 1);
    const std::string text(json);
    CHECK(text.find("\"q_mu_emp\"") != std::string::npos);
    CHECK(text.find("\"z_q_mu\"") != std::string::npos);
    CHECK(text.find("\"agree\": true") != std::string::npos);

    // same seed reproduces the document byte for byte
    char* again = nullptr;
    REQUIRE(pb_montecarlo_json(cfg.get(), lengths, 1, 3000, 11, &again, nullptr) == PB_OK);
    ApiString holder2(again);
    CHECK(text == std::string(again));

    // an infeasible point is reported as such rather than failing the run
    const double zero[] = {0.0};
    char* inf_json = nullptr;
    REQUIRE(pb_montecarlo_json(cfg.get(), zero, 1, 100, 11, &inf_json, &agree) == PB_OK);
    ApiString holder3(inf_json);
    CHECK(std::string(inf_json).find("INFEASIBLE") != std::string::npos);
}

TEST_CASE("monitor replay stays silent on the measured profiles") {
    auto cfg = make_config();
    char* csv = nullptr;
    int unexpected = -1;
    REQUIRE(pb_monitor_csv(cfg.get(), &csv, &unexpected) == PB_OK);
    ApiString holder(csv);
    CHECK(unexpected == 0);
    const std::string text(csv);
    CHECK(text.find("cycle_count,interval_s,reported_uA,alarm") != std::string::npos);
    CHECK(text.find("# fitted_charge_per_pulse_c = ") != std::string::npos);
}

TEST_CASE("calibration round-trips over the C surface") {
    auto cfg = make_config();
    REQUIRE(pb_config_select_cycles(cfg.get(), 400) == PB_OK);
    char* csv = nullptr;
    char* verdict = nullptr;
    int ok = -1;
    REQUIRE(pb_calibrate_csv(cfg.get(), 21, &csv, &verdict, &ok) == PB_OK);
    ApiString a(csv), b(verdict);
    CHECK(ok == 1);
    CHECK(std::string(csv).find("gate_index,e_never_j") != std::string::npos);
    CHECK(std::string(verdict).find("\"measured_n_blind\": 4002") != std::string::npos);
}

TEST_CASE("trace CSV over the C surface") {
    auto cfg = make_config();
    REQUIRE(pb_config_set(cfg.get(), "interval_s", "2e-5") == PB_OK);
    REQUIRE(pb_config_set(cfg.get(), "cycle_count", "10") == PB_OK);
    char* csv = nullptr;
    REQUIRE(pb_trace_csv(cfg.get(), 2, 6.25e-9, &csv) == PB_OK);
    ApiString holder(csv);
    CHECK(std::string(csv).find("t_s,i_amp") != std::string::npos);

    // a sample period that cannot resolve the pulse spacing is invalid
    char* bad = nullptr;
    CHECK(pb_trace_csv(cfg.get(), 2, 1e-6, &bad) == PB_ERR_INVALID_ARG);
}

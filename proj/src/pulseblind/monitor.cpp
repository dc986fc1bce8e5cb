#include "pulseblind/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulseblind/errors.hpp"
#include "pulseblind/format.hpp"

namespace pulseblind {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::InvalidArgument, what);
}

constexpr std::int64_t kMaxSamples = std::int64_t{1} << 31;

std::vector<ChargeInjection> pulse_schedule(const DetectorTiming& timing,
                                            const BlindingConfig& blinding, const MonitorParams& m,
                                            std::int64_t n_groups) {
    const double gate_period = 1.0 / timing.gate_frequency_hz;
    const double charge = m.charge_per_pulse_c * (blinding.pulse_energy_j / m.reference_pulse_energy_j);
    std::vector<ChargeInjection> injections;
    injections.reserve(static_cast<std::size_t>(n_groups * blinding.cycle_count));
    for (std::int64_t g = 0; g < n_groups; ++g)
        for (std::int64_t k = 0; k < blinding.cycle_count; ++k)
            injections.push_back({g * blinding.interval_s + k * gate_period, charge});
    return injections;
}

} // namespace

void validate(const MonitorParams& m) {
    require(m.baseline_current_a >= 0.0, "baseline current must be non-negative");
    require(m.baseline_current_a < m.alarm_threshold_a, "baseline must sit below the alarm threshold");
    require(m.alarm_threshold_a < m.constant_blind_threshold_a,
            "alarm threshold must sit below the constant-blinding threshold");
    require(m.charge_per_pulse_c > 0.0, "charge per pulse must be positive");
    require(m.reference_pulse_energy_j > 0.0, "reference pulse energy must be positive");
    require(m.decay_tau_s > 0.0, "decay tau must be positive");
    require(m.cutoff_freq_hz > 0.0, "cutoff frequency must be positive");
}

PhotocurrentTrace synthesize_from_injections(std::span<const ChargeInjection> injections,
                                             const MonitorParams& m, double span_s,
                                             double sample_period_s, double group_interval_s) {
    validate(m);
    require(span_s > 0.0, "trace span must be positive");
    require(sample_period_s > 0.0, "sample period must be positive");

    const double n_samples_f = std::floor(span_s / sample_period_s);
    if (n_samples_f >= static_cast<double>(kMaxSamples))
        fail(Errc::InvalidArgument, "trace would overflow the sample budget");
    const auto n_samples = static_cast<std::int64_t>(n_samples_f);
    require(n_samples >= 1, "trace needs at least one sample");

    const double tau = m.decay_tau_s;
    const double decay = std::exp(-sample_period_s / tau);

    PhotocurrentTrace trace;
    trace.sample_period_s = sample_period_s;
    trace.group_interval_s = group_interval_s;
    trace.samples.resize(static_cast<std::size_t>(n_samples));

    // each sample decays the injected state; pulses landing in the step are
    // added with their exact exponential offset, so samples are point values
    // of the superposed kernel sum
    double state = 0.0;
    std::size_t next = 0;
    for (std::int64_t n = 0; n < n_samples; ++n) {
        const double t = static_cast<double>(n) * sample_period_s;
        if (n > 0) state *= decay;
        while (next < injections.size() && injections[next].time_s <= t) {
            require(injections[next].charge_c >= 0.0, "injected charge must be non-negative");
            if (next > 0)
                require(injections[next].time_s >= injections[next - 1].time_s,
                        "injections must be time-ordered");
            state += injections[next].charge_c / tau * std::exp(-(t - injections[next].time_s) / tau);
            ++next;
        }
        trace.samples[static_cast<std::size_t>(n)] = m.baseline_current_a + state;
    }
    return trace;
}

PhotocurrentTrace synthesize_photocurrent(const DetectorTiming& timing,
                                          const BlindingConfig& blinding, const MonitorParams& m,
                                          std::int64_t n_groups, double sample_period_s) {
    validate(timing);
    validate(blinding, timing);
    require(n_groups >= 1, "need at least one blinding group");
    require(sample_period_s <= 0.25 / timing.gate_frequency_hz,
            "sample period must resolve the pulse spacing (at most a quarter gate period)");

    const auto injections = pulse_schedule(timing, blinding, m, n_groups);
    return synthesize_from_injections(injections, m, n_groups * blinding.interval_s,
                                      sample_period_s, blinding.interval_s);
}

double reported_current(const PhotocurrentTrace& trace, const MonitorParams& m) {
    validate(m);
    require(!trace.samples.empty(), "empty trace");
    require(trace.sample_period_s > 0.0, "trace sample period must be positive");

    const double dt = trace.sample_period_s;
    const std::size_t n = trace.samples.size();
    const double span = static_cast<double>(n) * dt;

    // single-pole low-pass, unit DC gain
    const double a = 1.0 - std::exp(-2.0 * std::numbers::pi * m.cutoff_freq_hz * dt);
    std::vector<double> filtered(n);
    double y = trace.samples.front();
    for (std::size_t i = 0; i < n; ++i) {
        y += a * (trace.samples[i] - y);
        filtered[i] = y;
    }

    std::size_t begin = n / 2;
    if (trace.group_interval_s > 0.0) {
        const double interval = trace.group_interval_s;
        if (span < 5.0 * interval - 0.5 * dt)
            fail(Errc::InsufficientSpan, "trace must span at least five group intervals");
        // discard the filter transient, then average whole periods
        const double tau_f = 1.0 / (2.0 * std::numbers::pi * m.cutoff_freq_hz);
        const double discard = std::max(2.0 * interval, 8.0 * tau_f);
        const auto whole = static_cast<std::int64_t>(std::floor((span - discard) / interval));
        if (whole < 1) fail(Errc::InsufficientSpan, "trace too short for a steady-state average");
        const auto window = static_cast<std::size_t>(
            std::llround(static_cast<double>(whole) * interval / dt));
        begin = n > window ? n - window : 0;
    }

    double sum = 0.0;
    for (std::size_t i = begin; i < n; ++i) sum += filtered[i];
    return sum / static_cast<double>(n - begin);
}

bool alarm(double reported_a, const MonitorParams& m) {
    require(reported_a >= 0.0, "reported current must be non-negative");
    return reported_a >= m.alarm_threshold_a;
}

double fit_charge_per_pulse(std::span<const ReportedCurrentRow> rows, const MonitorParams& m) {
    validate(m);
    require(rows.size() >= 2, "charge fit needs at least two rows");
    bool distinct = false;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].cycle_count != rows[0].cycle_count) distinct = true;
    if (!distinct) fail(Errc::InvalidArgument, "charge fit is singular: all rows share one cycle count");

    // least squares through the baseline: reported - baseline = (cycles/interval) * q
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& r : rows) {
        require(r.interval_s > 0.0, "row interval must be positive");
        const double x = static_cast<double>(r.cycle_count) / r.interval_s;
        sxy += x * (r.reported_a - m.baseline_current_a);
        sxx += x * x;
    }
    if (sxx <= 0.0) fail(Errc::InvalidArgument, "charge fit is singular");
    return sxy / sxx;
}

namespace {

double reported_for_group_energy(double group_energy_j, double interval_s,
                                 std::int64_t cycles_per_group, const MonitorParams& m,
                                 const DetectorTiming& timing) {
    BlindingConfig b;
    b.cycle_count = cycles_per_group;
    b.pulse_energy_j = group_energy_j / static_cast<double>(cycles_per_group);
    b.interval_s = interval_s;

    const double tau_f = 1.0 / (2.0 * std::numbers::pi * m.cutoff_freq_hz);
    const auto n_groups =
        static_cast<std::int64_t>(std::ceil(8.0 * tau_f / interval_s)) + 6;
    const double dt = std::min(0.25 / timing.gate_frequency_hz, interval_s / 64.0);
    const auto trace = synthesize_photocurrent(timing, b, m, n_groups, dt);
    return reported_current(trace, m);
}

} // namespace

double constant_blinding_energy(double interval_s, std::int64_t cycles_per_group,
                                const MonitorParams& m, const DetectorTiming& timing) {
    validate(m);
    validate(timing);
    require(interval_s > 0.0, "interval must be positive");
    require(cycles_per_group >= 1, "cycles per group must be >= 1");
    require(interval_s > static_cast<double>(cycles_per_group) / timing.gate_frequency_hz,
            "interval must exceed the pulse-group duration");

    constexpr double kMaxGroupEnergy = 1e-3; // far past any physical schedule

    auto above = [&](double e) {
        return reported_for_group_energy(e, interval_s, cycles_per_group, m, timing) >=
               m.constant_blind_threshold_a;
    };
    if (!above(kMaxGroupEnergy))
        fail(Errc::NotBlindable, "constant-blinding threshold unreachable within the energy bound");

    // mean-current estimate seeds the upper bracket
    double hi = std::min(4.0 * (m.constant_blind_threshold_a - m.baseline_current_a) *
                             m.reference_pulse_energy_j * interval_s / m.charge_per_pulse_c,
                         kMaxGroupEnergy);
    while (!above(hi)) hi = std::min(hi * 2.0, kMaxGroupEnergy);

    double lo = 0.0;
    while ((hi - lo) / hi > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::string trace_csv(const PhotocurrentTrace& trace, std::span<const std::string> comment_lines) {
    std::string out;
    for (const auto& line : comment_lines) out += "# " + line + "\n";
    out += "t_s,i_amp\n";
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        out += fmt_sci(static_cast<double>(i) * trace.sample_period_s) + ",";
        out += fmt_sci(trace.samples[i]) + "\n";
    }
    return out;
}

std::string monitor_report_csv(std::span<const MonitorReportRow> rows,
                               std::span<const std::string> comment_lines) {
    std::string out;
    for (const auto& line : comment_lines) out += "# " + line + "\n";
    out += "cycle_count,interval_s,reported_uA,alarm\n";
    for (const auto& r : rows) {
        out += fmt_int(r.cycle_count) + ",";
        out += fmt_sci(r.interval_s) + ",";
        out += fmt_sci(r.reported_a * 1e6) + ",";
        out += r.alarmed ? "1" : "0";
        out += "\n";
    }
    return out;
}

} // namespace pulseblind

#include "seap/perf_models.hpp"

#include "seap/codec.hpp"

namespace seap::perf {

namespace {

// One-way pass propagation including atmospheric and processing delays.
constexpr IntRange kOneWayMs{20, 40};
constexpr IntRange kGsVerifyMs{50, 100};

} // namespace

int compute_threshold(int gs_fault_bound, int channel_fault_bound) {
    if (gs_fault_bound < 0 || channel_fault_bound < 0) {
        throw Error(ErrorCode::negative_input, "fault bounds must be non-negative");
    }
    return gs_fault_bound + 2 * channel_fault_bound + 1;
}

LatencyBreakdown latency_model(const CryptoSuite& suite, bool parallel) {
    LatencyBreakdown b;
    b.propagation_ms = kOneWayMs * 3;
    b.gs_verification_ms = kGsVerifyMs;
    IntRange crypto_seq, crypto_par;
    if (suite.id == SuiteId::ecc_p256_class) {
        // Four hardware signatures; independent buses halve the wall time.
        crypto_seq = suite.sign_latency_ms * 4;
        crypto_par = suite.sign_latency_ms * 2;
    } else {
        // Software lattice signing on the single application core dominates
        // and does not parallelize across secure-element buses.
        crypto_seq = {290, 980};
        crypto_par = crypto_seq;
    }
    b.onboard_crypto_ms = parallel ? crypto_par : crypto_seq;
    b.total_sequential_ms = b.propagation_ms + crypto_seq + b.gs_verification_ms;
    b.total_parallel_ms = b.propagation_ms + crypto_par + b.gs_verification_ms;
    return b;
}

CertTimeEstimate cert_time_model(int gs_fault_bound, int channel_fault_bound,
                                 IntRange contacts_per_orbit, std::int64_t orbit_period_ms) {
    if (contacts_per_orbit.lo <= 0) {
        throw Error(ErrorCode::config_invalid, "contacts per orbit must be positive");
    }
    CertTimeEstimate e;
    e.required_endorsements = compute_threshold(gs_fault_bound, channel_fault_bound);
    e.contacts_per_orbit = contacts_per_orbit;
    auto ceil_div = [](std::int64_t a, std::int64_t b) { return (a + b - 1) / b; };
    e.orbits_to_completion = {ceil_div(e.required_endorsements, contacts_per_orbit.hi),
                              ceil_div(e.required_endorsements, contacts_per_orbit.lo)};
    const double period_hours = static_cast<double>(orbit_period_ms) / 3'600'000.0;
    e.wall_clock_hours_lo = static_cast<double>(e.orbits_to_completion.lo) * period_hours;
    e.wall_clock_hours_hi = static_cast<double>(e.orbits_to_completion.hi) * period_hours;
    return e;
}

BandwidthModel bandwidth_model(const CryptoSuite& suite, std::size_t endorsement_count) {
    BandwidthModel m;
    m.hello_bytes = wire_size(MessageKind::hello, suite);
    m.hello_ack_bytes = wire_size(MessageKind::hello_ack, suite);
    m.key_verify_bytes = wire_size(MessageKind::key_verify, suite);
    m.exchange_total_bytes = exchange_total_bytes(suite);
    m.certificate_bytes = wire_size(MessageKind::cert, suite, kDefaultNonceBytes, endorsement_count);
    m.mlkem_setup_bytes = mlkem_channel_setup_bytes();
    return m;
}

} // namespace seap::perf

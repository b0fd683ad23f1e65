#pragma once

#include "seap/crypto.hpp"

namespace seap::perf {

// Per-exchange latency components for one SEAP exchange (hello, hello-ack,
// key-verify = three one-way legs plus four on-board signatures plus
// ground-side verification).
struct LatencyBreakdown {
    IntRange propagation_ms;
    IntRange onboard_crypto_ms; // for the requested scheduling mode
    IntRange gs_verification_ms;
    IntRange total_sequential_ms;
    IntRange total_parallel_ms;

    IntRange total(bool parallel) const { return parallel ? total_parallel_ms : total_sequential_ms; }
};

struct CertTimeEstimate {
    int required_endorsements = 0;
    IntRange contacts_per_orbit;
    IntRange orbits_to_completion;
    double wall_clock_hours_lo = 0.0;
    double wall_clock_hours_hi = 0.0;
};

struct BandwidthModel {
    std::size_t hello_bytes = 0;
    std::size_t hello_ack_bytes = 0;
    std::size_t key_verify_bytes = 0;
    std::size_t exchange_total_bytes = 0;
    std::size_t certificate_bytes = 0; // at the given endorsement count
    std::size_t mlkem_setup_bytes = 0;
};

// t_GS + 2*t_ch + 1. Throws negative_input.
int compute_threshold(int gs_fault_bound, int channel_fault_bound);

LatencyBreakdown latency_model(const CryptoSuite& suite, bool parallel);

// Orbits = ceil(required / contacts), range-wise; hours = orbits * period.
CertTimeEstimate cert_time_model(int gs_fault_bound, int channel_fault_bound,
                                 IntRange contacts_per_orbit, std::int64_t orbit_period_ms);

BandwidthModel bandwidth_model(const CryptoSuite& suite, std::size_t endorsement_count = 7);

} // namespace seap::perf

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seap/perf_models.hpp"

using namespace seap;
using namespace seap::perf;

TEST_CASE("threshold formula") {
    CHECK(compute_threshold(2, 2) == 7);
    CHECK(compute_threshold(3, 3) == 10);
    CHECK(compute_threshold(0, 0) == 1);
    CHECK(compute_threshold(4, 0) == 5);
    CHECK_THROWS_AS(compute_threshold(-1, 2), Error);
    CHECK_THROWS_AS(compute_threshold(2, -1), Error);
    try {
        compute_threshold(-1, 0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::negative_input);
    }
}

TEST_CASE("latency model reproduces the published totals") {
    const auto& ecc = CryptoSuite::get(SuiteId::ecc_p256_class);
    auto seq = latency_model(ecc, false);
    CHECK(seq.total_sequential_ms == IntRange{310, 620});
    CHECK(seq.propagation_ms == IntRange{60, 120});
    CHECK(seq.onboard_crypto_ms == IntRange{200, 400});
    CHECK(seq.gs_verification_ms == IntRange{50, 100});

    auto par = latency_model(ecc, true);
    CHECK(par.total_parallel_ms == IntRange{210, 420});
    CHECK(par.onboard_crypto_ms == IntRange{100, 200});

    // Totals are component sums at both endpoints.
    for (bool parallel : {false, true}) {
        auto m = latency_model(ecc, parallel);
        IntRange total = m.propagation_ms + m.onboard_crypto_ms + m.gs_verification_ms;
        CHECK(total == m.total(parallel));
    }

    const auto& hybrid = CryptoSuite::get(SuiteId::hybrid_ecc_falcon);
    CHECK(latency_model(hybrid, false).total(false) == IntRange{400, 1200});
    CHECK(latency_model(hybrid, true).total(true) == IntRange{400, 1200});
}

TEST_CASE("certificate-time model matches both published columns") {
    const std::int64_t orbit = 5'700'000;

    auto conservative = cert_time_model(2, 2, {1, 2}, orbit);
    CHECK(conservative.required_endorsements == 7);
    CHECK(conservative.orbits_to_completion == IntRange{4, 7});
    CHECK(conservative.wall_clock_hours_lo == doctest::Approx(6.33).epsilon(0.01));
    CHECK(conservative.wall_clock_hours_hi == doctest::Approx(11.08).epsilon(0.01));
    CHECK(conservative.wall_clock_hours_lo >= 6.0);
    CHECK(conservative.wall_clock_hours_hi <= 11.1);

    auto moderate = cert_time_model(3, 3, {2, 3}, orbit);
    CHECK(moderate.required_endorsements == 10);
    CHECK(moderate.orbits_to_completion == IntRange{4, 5});
    CHECK(moderate.wall_clock_hours_hi == doctest::Approx(7.92).epsilon(0.01));

    // Permanent visibility: the whole quorum inside one pass.
    auto geo = cert_time_model(2, 2, {7, 7}, orbit);
    CHECK(geo.orbits_to_completion.hi <= 1);

    CHECK_THROWS_AS(cert_time_model(2, 2, {0, 2}, orbit), Error);
}

TEST_CASE("bandwidth model rows") {
    auto ecc = bandwidth_model(CryptoSuite::get(SuiteId::ecc_p256_class));
    CHECK(ecc.hello_bytes == 200);
    CHECK(ecc.hello_ack_bytes == 1500);
    CHECK(ecc.key_verify_bytes == 150);
    CHECK(ecc.exchange_total_bytes == 1850);
    CHECK(ecc.certificate_bytes >= 2000);
    CHECK(ecc.certificate_bytes <= 3000);
    CHECK(ecc.mlkem_setup_bytes == 2272);

    auto hybrid = bandwidth_model(CryptoSuite::get(SuiteId::hybrid_ecc_falcon));
    CHECK(std::abs(static_cast<double>(hybrid.exchange_total_bytes) - 8000.0) <= 8000.0 * 0.15);
    auto falcon = bandwidth_model(CryptoSuite::get(SuiteId::falcon_only));
    CHECK(std::abs(static_cast<double>(falcon.exchange_total_bytes) - 6500.0) <= 6500.0 * 0.15);
}

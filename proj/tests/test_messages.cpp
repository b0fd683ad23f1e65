#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "seap/codec.hpp"

using namespace seap;

namespace {

// Random-but-structurally-valid message builders for the round-trip and
// injectivity properties.
HelloMsg random_hello(DetRng& rng) {
    HelloMsg m;
    m.nonce = make_nonce(rng);
    m.gs_id = GsId{static_cast<std::uint32_t>(rng.uniform(0, 30))};
    m.signature = rng.bytes(64);
    return m;
}

TeeQuote random_quote(DetRng& rng, const Bytes& vk, const std::string& serial) {
    TeeQuote q;
    q.claimed_public_key = vk;
    q.se_serial = serial;
    q.slot_report.serial = serial;
    q.slot_report.slot_index = 0;
    q.slot_report.origin_internal = true;
    q.slot_report.non_exportable = rng.chance(90);
    q.slot_report.public_key = vk;
    q.slot_report.signature = rng.bytes(64);
    auto h = rng.bytes(32);
    std::copy(h.begin(), h.end(), q.measurement_hash.begin());
    return q;
}

HelloAckMsg random_ack(DetRng& rng) {
    HelloAckMsg m;
    m.nonce = make_nonce(rng);
    m.vk_nxp = rng.bytes(64);
    m.quote_nxp = random_quote(rng, *m.vk_nxp, "00000000000000a1");
    m.sig_nonce_nxp = rng.bytes(64);
    if (rng.chance(80)) { // degraded acks leave the open anchor absent
        m.vk_trop = rng.bytes(64);
        m.quote_trop = random_quote(rng, *m.vk_trop, "00000000000000b2");
        m.sig_nonce_trop = rng.bytes(64);
    }
    return m;
}

KeyVerifyMsg random_kv(DetRng& rng) {
    KeyVerifyMsg m;
    m.timestamp_ms = rng.uniform_i64(0, 1'000'000);
    m.gs_id = GsId{static_cast<std::uint32_t>(rng.uniform(0, 30))};
    m.signature = rng.bytes(64);
    return m;
}

CertificateOfAuthorization random_cert(DetRng& rng, int n) {
    CertificateOfAuthorization c;
    c.vk_s = rng.bytes(64);
    for (int i = 0; i < n; ++i) {
        c.endorsements.push_back(
            {rng.uniform_i64(0, 50'000), GsId{static_cast<std::uint32_t>(i)}, rng.bytes(64)});
    }
    c.tee_signature = rng.bytes(64);
    return c;
}

EatToken random_eat(DetRng& rng) {
    EatToken t;
    t.nonce = make_nonce(rng);
    auto h = rng.bytes(32);
    std::copy(h.begin(), h.end(), t.measurement_hash.begin());
    t.se_serials = {"00000000000000a1", "00000000000000b2"};
    t.sig_nxp = rng.bytes(64);
    if (rng.chance(70)) t.sig_trop = rng.bytes(64);
    t.degraded = !t.sig_trop.has_value();
    t.issued_at_ms = rng.uniform_i64(0, 1'000'000);
    return t;
}

} // namespace

TEST_CASE("round-trip and canonicity over random messages") {
    DetRng rng(1);
    const auto& suite = CryptoSuite::get(SuiteId::ecc_p256_class);
    for (int i = 0; i < 200; ++i) {
        HelloMsg h = random_hello(rng);
        Bytes w = encode(h, suite);
        CHECK(decode_hello(w) == h);
        CHECK(encode(h, suite) == w); // stable bytes for equal values
        CHECK(peek_kind(w) == MessageKind::hello);

        HelloAckMsg a = random_ack(rng);
        CHECK(decode_hello_ack(encode(a, suite)) == a);

        KeyVerifyMsg k = random_kv(rng);
        CHECK(decode_key_verify(encode(k, suite)) == k);

        CertificateOfAuthorization c = random_cert(rng, 1 + static_cast<int>(rng.uniform(0, 9)));
        CHECK(decode_cert(encode(c, suite)) == c);

        EatToken e = random_eat(rng);
        CHECK(decode_eat(encode(e, suite)) == e);
    }
}

TEST_CASE("encoding is injective across distinct messages") {
    DetRng rng(2);
    const auto& suite = CryptoSuite::get(SuiteId::ecc_p256_class);
    std::set<Bytes> seen;
    int unique = 0;
    for (int i = 0; i < 300; ++i) {
        HelloMsg h = random_hello(rng);
        Bytes w = encode(h, suite);
        bool fresh = seen.insert(w).second;
        CHECK(fresh); // random nonces make collisions vanishingly unlikely
        unique += fresh;
    }
    CHECK(unique == 300);
}

TEST_CASE("truncated or padded-wrong bytes raise malformed-message") {
    DetRng rng(3);
    const auto& suite = CryptoSuite::get(SuiteId::ecc_p256_class);
    Bytes w = encode(random_hello(rng), suite);
    Bytes truncated(w.begin(), w.begin() + static_cast<long>(w.size() / 2));
    CHECK_THROWS_AS(decode_hello(truncated), Error);
    Bytes nonzero_pad = w;
    nonzero_pad.back() ^= 0x1;
    CHECK_THROWS_AS(decode_hello(nonzero_pad), Error);
    CHECK_THROWS_AS(decode_key_verify(w), Error); // kind mismatch
    try {
        decode_hello(truncated);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::malformed_message);
    }
}

TEST_CASE("wire sizes reproduce the published per-exchange figures") {
    const auto& ecc = CryptoSuite::get(SuiteId::ecc_p256_class);
    const auto& hybrid = CryptoSuite::get(SuiteId::hybrid_ecc_falcon);
    const auto& falcon = CryptoSuite::get(SuiteId::falcon_only);

    CHECK(wire_size(MessageKind::hello, ecc) == 200);
    CHECK(wire_size(MessageKind::hello_ack, ecc) == 1500);
    CHECK(wire_size(MessageKind::key_verify, ecc) == 150);

    auto within = [](std::size_t actual, double target, double tol) {
        return std::abs(static_cast<double>(actual) - target) <= target * tol;
    };
    CHECK(within(exchange_total_bytes(ecc), 1900.0, 0.15));
    CHECK(within(exchange_total_bytes(hybrid), 8000.0, 0.15));
    CHECK(within(exchange_total_bytes(falcon), 6500.0, 0.15));

    // Per-message figures stay within the published tolerance too.
    CHECK(within(wire_size(MessageKind::hello, hybrid), 930.0, 0.15));
    CHECK(within(wire_size(MessageKind::hello_ack, hybrid), 6200.0, 0.15));
    CHECK(within(wire_size(MessageKind::key_verify, hybrid), 880.0, 0.15));
    CHECK(within(wire_size(MessageKind::hello, falcon), 730.0, 0.15));
    CHECK(within(wire_size(MessageKind::hello_ack, falcon), 5000.0, 0.15));
    CHECK(within(wire_size(MessageKind::key_verify, falcon), 730.0, 0.15));

    CHECK(mlkem_channel_setup_bytes() == 1184 + 1088);
}

TEST_CASE("encoded sizes equal the modeled wire sizes") {
    DetRng rng(4);
    for (SuiteId id : {SuiteId::ecc_p256_class, SuiteId::hybrid_ecc_falcon, SuiteId::falcon_only}) {
        const auto& suite = CryptoSuite::get(id);
        const std::size_t P = suite.public_key_bytes;
        const std::size_t S = suite.signature_bytes;

        HelloMsg h = random_hello(rng);
        h.signature = rng.bytes(S);
        CHECK(encode(h, suite).size() == wire_size(MessageKind::hello, suite));

        HelloAckMsg a;
        a.nonce = make_nonce(rng);
        a.vk_nxp = rng.bytes(P);
        a.quote_nxp = random_quote(rng, *a.vk_nxp, "00000000000000a1");
        a.quote_nxp->slot_report.signature = rng.bytes(S);
        a.sig_nonce_nxp = rng.bytes(S);
        a.vk_trop = rng.bytes(P);
        a.quote_trop = random_quote(rng, *a.vk_trop, "00000000000000b2");
        a.quote_trop->slot_report.signature = rng.bytes(S);
        a.sig_nonce_trop = rng.bytes(S);
        CHECK(encode(a, suite).size() == wire_size(MessageKind::hello_ack, suite));

        KeyVerifyMsg k = random_kv(rng);
        k.signature = rng.bytes(S);
        CHECK(encode(k, suite).size() == wire_size(MessageKind::key_verify, suite));
    }
}

TEST_CASE("certificate encodings land in the published 2-3 kB band") {
    DetRng rng(5);
    const auto& ecc = CryptoSuite::get(SuiteId::ecc_p256_class);
    for (int n : {7, 10}) {
        CertificateOfAuthorization c = random_cert(rng, n);
        const std::size_t size = encode(c, ecc).size();
        CHECK(size >= 2000);
        CHECK(size <= 3000);
    }
}

TEST_CASE("encoder rejects a quote whose keys disagree with the carried vk") {
    DetRng rng(6);
    const auto& suite = CryptoSuite::get(SuiteId::ecc_p256_class);
    HelloAckMsg a = random_ack(rng);
    a.quote_nxp->claimed_public_key = rng.bytes(64); // violates the invariant
    CHECK_THROWS_AS(encode(a, suite), Error);
}

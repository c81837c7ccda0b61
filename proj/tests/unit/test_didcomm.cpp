#include <doctest.h>

#include <json.hpp>

#include "swid/bench.hpp"
#include "swid/ddo_codec.hpp"
#include "swid/didcomm_baseline.hpp"
#include "swid/diotcomm.hpp"
#include "swid/error.hpp"
#include "swid/text_encoding.hpp"
#include "test_support.hpp"

using namespace swid;
using namespace swid::didcomm;
using json = nlohmann::json;

namespace {

Errc error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::invalid_argument;
}

struct Agents {
    SystemRng rng;
    AgentIdentity a = build_identity("coap://a.example/agent", rng);
    AgentIdentity b = build_identity("coap://b.example/agent", rng);
    AgentIdentity c = build_identity("coap://c.example/agent", rng);
    Resolver resolver = make_resolver({a.ddo(), b.ddo(), c.ddo()});
};

json b64_json(const std::string& s) {
    const auto raw = base64url_decode(s);
    return json::parse(raw.begin(), raw.end());
}

} // namespace

TEST_CASE("jws structure and round trip") {
    Agents t;
    const auto p = to_bytes("hello");
    const auto env = jose_sign(p, t.a, t.rng);
    CHECK(env.kind == EnvelopeKind::Signed);
    CHECK(jose_kind(env.text) == EnvelopeKind::Signed);
    CHECK(env.text.find_first_of(" \n") == std::string::npos);

    const auto j = json::parse(env.text);
    const auto header = b64_json(j["signatures"][0]["protected"]);
    CHECK(header["alg"] == "EdDSA");
    CHECK(header["typ"] == kSignedMediaType);
    CHECK(header["kid"] == t.a.did().to_text() + "#" + base58_encode(t.a.ddo().verification_keys()[0].key_id()));
    const auto msg = b64_json(j["payload"]);
    CHECK(msg["from"] == t.a.did().to_text());
    CHECK(msg["type"] == kMessageType);
    CHECK(base64url_decode(msg["body"].get<std::string>()) == p);

    const auto o = jose_verify(env.text, t.resolver);
    CHECK(o.payload == p);
    CHECK(o.sender == t.a.did());
    CHECK(jose_open(env.text, t.b, t.resolver).payload == p);
}

TEST_CASE("json payloads are embedded as the message body") {
    Agents t;
    const auto p = to_bytes(R"({"sensor":"t01","value":2150})");
    const auto env = jose_sign(p, t.a, t.rng);
    const auto msg = b64_json(json::parse(env.text)["payload"]);
    CHECK(msg["body"]["value"] == 2150);
    CHECK(jose_verify(env.text, t.resolver).payload == p);

    // Non-compact JSON cannot be reproduced byte-exactly, so it goes base64url.
    const auto spaced = to_bytes(R"({"a": 1})");
    CHECK(jose_verify(jose_sign(spaced, t.a, t.rng).text, t.resolver).payload == spaced);
}

TEST_CASE("jws errors") {
    Agents t;
    const auto env = jose_sign(to_bytes("x"), t.a, t.rng);
    CHECK(error_of([&] { jose_verify(env.text, make_resolver({t.b.ddo()})); }) == Errc::unknown_sender);
    CHECK(error_of([&] { jose_verify("{}", t.resolver); }) == Errc::malformed_envelope);
    CHECK(error_of([&] { jose_verify("not json", t.resolver); }) == Errc::malformed_envelope);

    auto j = json::parse(env.text);
    auto sig = base64url_decode(j["signatures"][0]["signature"].get<std::string>());
    sig[0] ^= 1;
    j["signatures"][0]["signature"] = base64url_encode(sig);
    CHECK(error_of([&] { jose_verify(j.dump(), t.resolver); }) == Errc::bad_signature);

    // A validly signed message whose "from" names somebody else.
    json header = {{"typ", kSignedMediaType}, {"alg", "EdDSA"},
                   {"kid", t.a.did().to_text() + "#" + base58_encode(t.a.ddo().verification_keys()[0].key_id())}};
    json msg = {{"id", "1"}, {"type", kMessageType}, {"from", t.b.did().to_text()}, {"body", "eA"}};
    const auto h64 = base64url_encode(to_bytes(header.dump()));
    const auto p64 = base64url_encode(to_bytes(msg.dump()));
    const auto& vk = t.a.ddo().verification_keys()[0];
    const auto s = ed25519_sign(t.a.secret(vk.key_id()), to_bytes(h64 + "." + p64));
    json forged = {{"payload", p64}, {"signatures", json::array({{{"protected", h64}, {"signature", base64url_encode(s)}}})}};
    CHECK(error_of([&] { jose_verify(forged.dump(), t.resolver); }) == Errc::sender_mismatch);
}

TEST_CASE("jwe round trip and failures") {
    Agents t;
    const auto p = to_bytes("confidential");
    const auto env = jose_encrypt(p, t.a, t.b.ddo(), t.rng);
    CHECK(jose_kind(env.text) == EnvelopeKind::Encrypted);
    const auto j = json::parse(env.text);
    const auto header = b64_json(j["protected"]);
    CHECK(header["alg"] == "ECDH-SS");
    CHECK(header["enc"] == "A128CCM");
    CHECK(base64url_decode(j["iv"].get<std::string>()).size() == 13);
    CHECK(base64url_decode(j["tag"].get<std::string>()).size() == kCcmTagSize);

    CHECK(jose_decrypt(env.text, t.b, t.resolver).payload == p);
    CHECK(jose_open(env.text, t.b, t.resolver).sender == t.a.did());
    CHECK(error_of([&] { jose_decrypt(env.text, t.c, t.resolver); }) == Errc::aead_failure);

    auto bad = j;
    auto ct = base64url_decode(bad["ciphertext"].get<std::string>());
    ct[0] ^= 1;
    bad["ciphertext"] = base64url_encode(ct);
    CHECK(error_of([&] { jose_decrypt(bad.dump(), t.b, t.resolver); }) == Errc::aead_failure);
}

TEST_CASE("nested jose round trip") {
    Agents t;
    SeededRng prng(40);
    for (std::size_t len : {0u, 1u, 21u, 500u, 4096u}) {
        const auto p = prng.bytes(len);
        const auto env = jose_sign_encrypt(p, t.a, t.b.ddo(), t.rng);
        CHECK(jose_kind(env.text) == EnvelopeKind::SignedThenEncrypted);
        const auto o = jose_open(env.text, t.b, t.resolver);
        CHECK(o.payload == p);
        CHECK(o.sender == t.a.did());
        CHECK(error_of([&] { jose_open(env.text, t.c, t.resolver); }) == Errc::aead_failure);
    }
}

TEST_CASE("jose envelopes are larger than cose envelopes") {
    Agents t;
    SeededRng prng(41);
    for (int i = 0; i < 100; ++i) {
        const auto p = prng.bytes(testing::uniform(prng, 0, 1024));
        REQUIRE(jose_sign(p, t.a, t.rng).text.size() > sign(p, t.a).bytes.size());
        REQUIRE(jose_encrypt(p, t.a, t.b.ddo(), t.rng).text.size() > encrypt(p, t.a, t.b.ddo(), t.rng).bytes.size());
        const auto jose = jose_sign_encrypt(p, t.a, t.b.ddo(), t.rng);
        const auto cose = sign_encrypt(p, t.a, t.b.ddo(), t.rng);
        REQUIRE(overhead(jose, p.size()) > swid::overhead(cose, p.size()));
        // Binary payloads pass through base64url at least twice when nested.
        REQUIRE(jose.text.size() >= p.size() * 16 / 9);
    }
}

TEST_CASE("binary document in a JWS costs more than JSON") {
    const auto id = bench::reference_identity();
    SeededRng rng(42);
    const auto as_json = jose_sign(encode(id.ddo(), WireFormat::json), id, rng);
    const auto as_cbor = jose_sign(encode(id.ddo(), WireFormat::cbor_direct), id, rng);
    const auto as_di = jose_sign(encode(id.ddo(), WireFormat::cbor_di), id, rng);
    CHECK(as_cbor.text.size() > as_json.text.size());
    CHECK(as_json.text.size() > bench::kLoraMaxPacket);
    CHECK(as_di.text.size() > bench::kLoraMaxPacket);
}

TEST_CASE("short message overhead ratio") {
    Agents t;
    const auto p = bench::reference_message();
    REQUIRE(p.size() == 21);
    const auto jose = jose_sign_encrypt(p, t.a, t.b.ddo(), t.rng);
    const auto cose = sign_encrypt(p, t.a, t.b.ddo(), t.rng);
    CHECK(overhead(jose, p.size()) >= 5 * swid::overhead(cose, p.size()));
}

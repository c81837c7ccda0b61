#include "swid/didcomm_baseline.hpp"

#include <algorithm>

#include <json.hpp>

#include "swid/error.hpp"
#include "swid/text_encoding.hpp"

namespace swid::didcomm {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kAlgEdDsa = "EdDSA";
constexpr std::string_view kAlgEcdhSs = "ECDH-SS";
constexpr std::string_view kEncAesCcm = "A128CCM";

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::malformed_envelope, what); }

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
}

const std::string& text_member(const Json& obj, const char* name) {
    if (!obj.is_object()) malformed("expected a JSON object");
    auto it = obj.find(name);
    if (it == obj.end() || !it->is_string()) malformed(std::string("missing member ") + name);
    return it->get_ref<const std::string&>();
}

Bytes b64_member(const Json& obj, const char* name) {
    try {
        return base64url_decode(text_member(obj, name));
    } catch (const Error& e) {
        if (e.code() == Errc::malformed) malformed(std::string("bad base64url in ") + name);
        throw;
    }
}

Json b64_json_member(const Json& obj, const char* name) {
    const Bytes raw = b64_member(obj, name);
    return parse(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
}

std::string uuid_v4(Rng& rng) {
    auto b = rng.array<16>();
    b[6] = static_cast<std::uint8_t>((b[6] & 0x0f) | 0x40);
    b[8] = static_cast<std::uint8_t>((b[8] & 0x3f) | 0x80);
    const std::string hex = to_hex(b);
    return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" + hex.substr(16, 4) + "-" +
           hex.substr(20);
}

std::string key_ref(const SwarmDid& did, const KeyId& key_id) { return did.to_text() + "#" + base58_encode(key_id); }

struct KeyRef {
    SwarmDid did;
    KeyId key_id;
};

KeyRef parse_key_ref(const std::string& ref) {
    auto hash = ref.find('#');
    if (hash == std::string::npos) malformed("kid is not a DID URL");
    try {
        auto did = SwarmDid::parse(std::string_view(ref).substr(0, hash));
        auto raw = base58_decode(std::string_view(ref).substr(hash + 1));
        if (raw.size() != kKeyIdSize) malformed("kid fragment is not an 8-byte key id");
        KeyId id{};
        std::copy(raw.begin(), raw.end(), id.begin());
        return {did, id};
    } catch (const Error& e) {
        if (e.code() == Errc::malformed_envelope) throw;
        malformed(std::string("bad kid: ") + e.what());
    }
}

Json body_for(ByteView payload) {
    if (!payload.empty() && (payload.front() == '{' || payload.front() == '[')) {
        try {
            auto j = Json::parse(payload.begin(), payload.end());
            if (j.dump() == to_string(payload)) return j;
        } catch (const Json::exception&) {
        }
    }
    return base64url_encode(payload);
}

Bytes payload_from(const Json& body) {
    if (body.is_string()) {
        try {
            return base64url_decode(body.get_ref<const std::string&>());
        } catch (const Error&) {
            malformed("bad base64url body");
        }
    }
    if (body.is_object() || body.is_array()) return to_bytes(body.dump());
    malformed("unsupported message body");
}

std::string plaintext_message(ByteView payload, const SwarmDid& from, const std::optional<SwarmDid>& to, Rng& rng) {
    Json msg;
    msg["id"] = uuid_v4(rng);
    msg["type"] = kMessageType;
    msg["from"] = from.to_text();
    if (to) msg["to"] = Json::array({to->to_text()});
    msg["body"] = body_for(payload);
    return msg.dump();
}

Opened open_plaintext(std::string_view text, const SwarmDid& authenticated_sender) {
    const Json msg = parse(text);
    if (text_member(msg, "from") != authenticated_sender.to_text())
        throw Error(Errc::sender_mismatch, "message sender differs from the envelope key owner");
    auto it = msg.find("body");
    if (it == msg.end()) malformed("missing message body");
    return {payload_from(*it), authenticated_sender};
}

DidDocument resolve(const Resolver& resolver, const SwarmDid& did) {
    auto ddo = resolver ? resolver(did) : std::nullopt;
    if (!ddo || ddo->did() != did) throw Error(Errc::unknown_sender, "unknown sender " + did.to_text());
    return std::move(*ddo);
}

JoseEnvelope sign_impl(ByteView payload, const AgentIdentity& sender, const std::optional<SwarmDid>& to, Rng& rng) {
    const auto& key = sender.ddo().verification_keys().front();
    Json header;
    header["typ"] = kSignedMediaType;
    header["alg"] = kAlgEdDsa;
    header["kid"] = key_ref(sender.did(), key.key_id());
    const std::string protected_b64 = base64url_encode(to_bytes(header.dump()));
    const std::string payload_b64 = base64url_encode(to_bytes(plaintext_message(payload, sender.did(), to, rng)));
    const auto sig = ed25519_sign(sender.secret(key.key_id()), to_bytes(protected_b64 + "." + payload_b64));

    Json jws;
    jws["payload"] = payload_b64;
    Json signature;
    signature["protected"] = protected_b64;
    signature["signature"] = base64url_encode(sig);
    jws["signatures"] = Json::array({std::move(signature)});
    return {EnvelopeKind::Signed, jws.dump()};
}

JoseEnvelope encrypt_impl(const std::string& plaintext, const AgentIdentity& sender, const DidDocument& receiver_ddo,
                          Rng& rng, bool nested) {
    if (sender.ddo().agreement_keys().empty() || receiver_ddo.agreement_keys().empty())
        throw Error(Errc::missing_agreement_key, "both parties need an agreement key");
    const auto& own = sender.ddo().agreement_keys().front();
    const auto key = derive_content_key(sender.secret(own.key_id()), receiver_ddo.agreement_keys().front().public_key());

    Json header;
    header["typ"] = kEncryptedMediaType;
    header["alg"] = kAlgEcdhSs;
    header["enc"] = kEncAesCcm;
    header["kid"] = key_ref(sender.did(), own.key_id());
    if (nested) header["cty"] = kSignedMediaType;
    const std::string protected_b64 = base64url_encode(to_bytes(header.dump()));

    const Nonce nonce = rng.array<13>();
    const Bytes sealed = aes_ccm_16_64_128_seal(key, nonce, to_bytes(protected_b64), to_bytes(plaintext));
    const ByteView sealed_view(sealed);

    Json jwe;
    jwe["protected"] = protected_b64;
    jwe["iv"] = base64url_encode(nonce);
    jwe["ciphertext"] = base64url_encode(sealed_view.first(sealed.size() - kCcmTagSize));
    jwe["tag"] = base64url_encode(sealed_view.last(kCcmTagSize));
    return {nested ? EnvelopeKind::SignedThenEncrypted : EnvelopeKind::Encrypted, jwe.dump()};
}

struct Decrypted {
    std::string plaintext;
    SwarmDid sender;
    bool nested;
};

Decrypted decrypt_impl(std::string_view envelope, const AgentIdentity& receiver, const Resolver& resolver) {
    const Json jwe = parse(envelope);
    const std::string& protected_b64 = text_member(jwe, "protected");
    const Json header = b64_json_member(jwe, "protected");
    if (text_member(header, "alg") != kAlgEcdhSs || text_member(header, "enc") != kEncAesCcm)
        malformed("unsupported JWE algorithms");
    bool nested = false;
    if (header.contains("cty")) {
        if (text_member(header, "cty") != kSignedMediaType) malformed("unsupported content type");
        nested = true;
    }
    const auto ref = parse_key_ref(text_member(header, "kid"));
    const Bytes iv = b64_member(jwe, "iv");
    if (iv.size() != 13) malformed("JWE iv is not 13 bytes");
    Bytes sealed = b64_member(jwe, "ciphertext");
    const Bytes tag = b64_member(jwe, "tag");
    if (tag.size() != kCcmTagSize) malformed("JWE tag is not 8 bytes");
    append(sealed, tag);
    Nonce nonce{};
    std::copy(iv.begin(), iv.end(), nonce.begin());

    const auto ddo = resolve(resolver, ref.did);
    const auto* peer = ddo.find_key(ref.key_id);
    if (!peer || peer->role() != KeyRole::agreement)
        throw Error(Errc::missing_agreement_key, "sender agreement key not in its DID Document");

    for (const auto& own : receiver.ddo().agreement_keys()) {
        const auto key = derive_content_key(receiver.secret(own.key_id()), peer->public_key());
        try {
            const Bytes plain = aes_ccm_16_64_128_open(key, nonce, to_bytes(protected_b64), sealed);
            return {to_string(plain), ref.did, nested};
        } catch (const Error& e) {
            if (e.code() != Errc::aead_failure) throw;
        }
    }
    throw Error(Errc::aead_failure, "decryption failed");
}

SwarmDid jws_signer(std::string_view envelope) {
    const Json jws = parse(envelope);
    auto it = jws.find("signatures");
    if (it == jws.end() || !it->is_array() || it->size() != 1) malformed("expected exactly one signature");
    return parse_key_ref(text_member(b64_json_member((*it)[0], "protected"), "kid")).did;
}

} // namespace

JoseEnvelope jose_sign(ByteView payload, const AgentIdentity& sender, Rng& rng) {
    return sign_impl(payload, sender, std::nullopt, rng);
}

Opened jose_verify(std::string_view envelope, const Resolver& resolver) {
    const Json jws = parse(envelope);
    const std::string& payload_b64 = text_member(jws, "payload");
    auto sigs = jws.find("signatures");
    if (sigs == jws.end() || !sigs->is_array() || sigs->size() != 1) malformed("expected exactly one signature");
    const Json& entry = (*sigs)[0];
    const std::string& protected_b64 = text_member(entry, "protected");
    const Json header = b64_json_member(entry, "protected");
    if (text_member(header, "alg") != kAlgEdDsa) malformed("unsupported JWS algorithm");
    const auto ref = parse_key_ref(text_member(header, "kid"));
    const Bytes signature = b64_member(entry, "signature");
    const Bytes message = b64_member(jws, "payload");

    const auto ddo = resolve(resolver, ref.did);
    const auto* key = ddo.find_key(ref.key_id);
    if (!key || key->role() != KeyRole::verification)
        throw Error(Errc::bad_signature, "signing key not in sender DID Document");
    if (!ed25519_verify(key->public_key(), to_bytes(protected_b64 + "." + payload_b64), signature))
        throw Error(Errc::bad_signature, "signature does not verify");
    return open_plaintext(to_string(message), ref.did);
}

JoseEnvelope jose_encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo, Rng& rng) {
    return encrypt_impl(plaintext_message(payload, sender.did(), receiver_ddo.did(), rng), sender, receiver_ddo, rng,
                        false);
}

Opened jose_decrypt(std::string_view envelope, const AgentIdentity& receiver, const Resolver& resolver) {
    auto d = decrypt_impl(envelope, receiver, resolver);
    if (d.nested) return {to_bytes(d.plaintext), d.sender};
    return open_plaintext(d.plaintext, d.sender);
}

JoseEnvelope jose_sign_encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo,
                               Rng& rng) {
    const auto inner = sign_impl(payload, sender, receiver_ddo.did(), rng);
    return encrypt_impl(inner.text, sender, receiver_ddo, rng, true);
}

EnvelopeKind jose_kind(std::string_view envelope) {
    const Json j = parse(envelope);
    if (!j.is_object()) malformed("expected a JSON object");
    if (j.contains("signatures")) return EnvelopeKind::Signed;
    if (j.contains("ciphertext")) {
        const Json header = b64_json_member(j, "protected");
        return header.contains("cty") ? EnvelopeKind::SignedThenEncrypted : EnvelopeKind::Encrypted;
    }
    malformed("not a JOSE envelope");
}

Opened jose_open(std::string_view envelope, const AgentIdentity& receiver, const Resolver& resolver) {
    switch (jose_kind(envelope)) {
    case EnvelopeKind::Signed: return jose_verify(envelope, resolver);
    case EnvelopeKind::Encrypted: return jose_decrypt(envelope, receiver, resolver);
    case EnvelopeKind::SignedThenEncrypted: {
        const auto outer = decrypt_impl(envelope, receiver, resolver);
        if (!outer.nested) malformed("JWE lacks nested content type");
        if (jws_signer(outer.plaintext) != outer.sender)
            throw Error(Errc::sender_mismatch, "inner signer differs from outer sender");
        return jose_verify(outer.plaintext, resolver);
    }
    }
    malformed("unknown envelope kind");
}

} // namespace swid::didcomm

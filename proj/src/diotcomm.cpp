#include "swid/diotcomm.hpp"

#include <algorithm>

#include "swid/cbor.hpp"
#include "swid/error.hpp"

namespace swid {

namespace {

using namespace cose;

const Bytes& recipient_protected() {
    static const Bytes kBytes = cbor::encode(cbor::Map{{kHeaderAlg, kAlgEcdhSsHkdf256}});
    return kBytes;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::malformed_envelope, what); }

// Structural access that reports every shape problem as malformed_envelope.
template <typename F>
auto structural(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == Errc::malformed) malformed(e.what());
        throw;
    }
}

struct ParsedHeaders {
    cbor::Map protected_map;
    cbor::Map unprotected;
};

ParsedHeaders parse_headers(const cbor::Value& protected_bstr, const cbor::Value& unprotected) {
    ParsedHeaders h;
    const auto& raw = protected_bstr.as_bytes();
    if (raw.empty()) malformed("empty protected header");
    h.protected_map = cbor::decode(raw).as_map();
    h.unprotected = unprotected.as_map();
    for (const auto& [label, value] : h.unprotected)
        if (cbor::find(h.protected_map, label)) malformed("header label in both buckets");
    return h;
}

SwarmDid sender_from(const cbor::Map& protected_map) {
    const auto* kid = cbor::find(protected_map, kHeaderKid);
    if (!kid) malformed("missing sender kid");
    const auto& nsi = kid->as_bytes();
    if (nsi.size() != kNsiSize) malformed("sender kid is not a 16-byte NSI");
    return SwarmDid::from_nsi(nsi);
}

void expect_alg(const cbor::Map& headers, int alg) {
    const auto* v = cbor::find(headers, kHeaderAlg);
    if (!v || v->as_int() != alg) malformed("unexpected algorithm");
}

DidDocument resolve_sender(const Resolver& resolver, const SwarmDid& sender) {
    auto ddo = resolver ? resolver(sender) : std::nullopt;
    if (!ddo) throw Error(Errc::unknown_sender, "unknown sender " + sender.to_text());
    if (ddo->did() != sender) throw Error(Errc::unknown_sender, "resolver returned a different DID");
    return std::move(*ddo);
}

const cbor::Array& untag(const cbor::Value& v, std::uint64_t expected_tag, std::size_t arity) {
    const auto& t = v.as_tagged();
    if (t.tag != expected_tag) malformed("unexpected COSE tag " + std::to_string(t.tag));
    const auto& a = t.item->as_array();
    if (a.size() != arity) malformed("wrong COSE array arity");
    return a;
}

Bytes sig_structure(const Bytes& protected_bytes, ByteView payload) {
    return cbor::encode(cbor::Array{"Signature1", protected_bytes, Bytes{}, Bytes(payload.begin(), payload.end())});
}

Bytes enc_structure(const Bytes& protected_bytes) {
    return cbor::encode(cbor::Array{"Encrypt", protected_bytes, Bytes{}});
}

SecureEnvelope encrypt_impl(ByteView plaintext, const AgentIdentity& sender, const DidDocument& receiver_ddo,
                            Rng& rng, bool nested) {
    if (sender.ddo().agreement_keys().empty())
        throw Error(Errc::missing_agreement_key, "sender has no agreement key");
    if (receiver_ddo.agreement_keys().empty())
        throw Error(Errc::missing_agreement_key, "receiver has no agreement key");

    const auto& own = sender.ddo().agreement_keys().front();
    const auto key = derive_content_key(sender.secret(own.key_id()), receiver_ddo.agreement_keys().front().public_key());

    cbor::Map prot{{kHeaderAlg, kAlgAesCcm16_64_128}, {kHeaderKid, to_bytes(sender.did().nsi())}};
    if (nested) prot.emplace_back(kHeaderContentType, kContentTypeSign1);
    const Bytes protected_bytes = cbor::encode(prot);

    const Nonce nonce = rng.array<13>();
    Bytes ciphertext = aes_ccm_16_64_128_seal(key, nonce, enc_structure(protected_bytes), plaintext);

    cbor::Array recipient{recipient_protected(), cbor::Map{}, Bytes{}};
    cbor::Array message{protected_bytes, cbor::Map{{kHeaderIv, to_bytes(nonce)}}, std::move(ciphertext),
                        cbor::Array{std::move(recipient)}};
    return {nested ? EnvelopeKind::SignedThenEncrypted : EnvelopeKind::Encrypted,
            cbor::encode(cbor::tag(kTagEncrypt, std::move(message)))};
}

struct ParsedEncrypt {
    Bytes protected_bytes;
    SwarmDid sender;
    bool nested;
    Nonce nonce;
    Bytes ciphertext;
};

ParsedEncrypt parse_encrypt(ByteView envelope) {
    return structural([&] {
        const auto top = cbor::decode(envelope);
        const auto& msg = untag(top, kTagEncrypt, 4);
        auto headers = parse_headers(msg[0], msg[1]);
        expect_alg(headers.protected_map, kAlgAesCcm16_64_128);

        bool nested = false;
        if (const auto* ct = cbor::find(headers.protected_map, kHeaderContentType)) {
            if (ct->as_int() != kContentTypeSign1) malformed("unsupported content type");
            nested = true;
        }

        const auto* iv = cbor::find(headers.unprotected, kHeaderIv);
        if (!iv || iv->as_bytes().size() != 13) malformed("missing or short nonce");
        Nonce nonce{};
        std::copy(iv->as_bytes().begin(), iv->as_bytes().end(), nonce.begin());

        const auto& recipients = msg[3].as_array();
        if (recipients.size() != 1) malformed("expected exactly one recipient");
        const auto& r = recipients[0].as_array();
        if (r.size() != 3) malformed("wrong recipient arity");
        if (r[0].as_bytes() != recipient_protected()) malformed("unsupported key agreement");
        if (!r[1].as_map().empty() || !r[2].as_bytes().empty()) malformed("unexpected recipient content");

        return ParsedEncrypt{msg[0].as_bytes(), sender_from(headers.protected_map), nested, nonce, msg[2].as_bytes()};
    });
}

SwarmDid signed_sender(ByteView envelope) {
    return structural([&] {
        const auto top = cbor::decode(envelope);
        const auto& msg = untag(top, kTagSign1, 4);
        return sender_from(cbor::decode(msg[0].as_bytes()).as_map());
    });
}

} // namespace

std::string_view to_string(EnvelopeKind kind) {
    switch (kind) {
    case EnvelopeKind::Signed: return "signed";
    case EnvelopeKind::Encrypted: return "encrypted";
    case EnvelopeKind::SignedThenEncrypted: return "signed-then-encrypted";
    }
    return "?";
}

Resolver make_resolver(std::vector<DidDocument> documents) {
    return [docs = std::move(documents)](const SwarmDid& did) -> std::optional<DidDocument> {
        for (const auto& d : docs)
            if (d.did() == did) return d;
        return std::nullopt;
    };
}

ContentKey derive_content_key(const Key32& own_secret, const Key32& peer_public) {
    const Key32 shared = x25519(own_secret, peer_public);
    const cbor::Value none(nullptr);
    const Bytes context = cbor::encode(cbor::Array{
        kAlgAesCcm16_64_128,
        cbor::Array{none, none, none},
        cbor::Array{none, none, none},
        cbor::Array{128, recipient_protected()},
    });
    const Bytes okm = hkdf_sha256(shared, {}, context, 16);
    ContentKey key{};
    std::copy(okm.begin(), okm.end(), key.begin());
    return key;
}

SecureEnvelope sign(ByteView payload, const AgentIdentity& sender, std::optional<KeyId> key_id) {
    const auto& keys = sender.ddo().verification_keys();
    const PublicKeyEntry* signer = &keys.front();
    if (key_id) {
        auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.key_id() == *key_id; });
        if (it == keys.end()) throw Error(Errc::invalid_key, "no verification key with that id");
        signer = &*it;
    }

    const Bytes protected_bytes =
        cbor::encode(cbor::Map{{kHeaderAlg, kAlgEdDsa}, {kHeaderKid, to_bytes(sender.did().nsi())}});
    cbor::Map unprotected;
    if (signer != &keys.front()) unprotected.emplace_back(kHeaderSignerKeyId, to_bytes(signer->key_id()));

    const auto sig = ed25519_sign(sender.secret(signer->key_id()), sig_structure(protected_bytes, payload));
    cbor::Array message{protected_bytes, std::move(unprotected), Bytes(payload.begin(), payload.end()), to_bytes(sig)};
    return {EnvelopeKind::Signed, cbor::encode(cbor::tag(kTagSign1, std::move(message)))};
}

Opened verify(ByteView envelope, const Resolver& resolver) {
    struct Parsed {
        Bytes protected_bytes;
        SwarmDid sender;
        std::optional<KeyId> signer;
        Bytes payload;
        Bytes signature;
    };
    auto parsed = structural([&] {
        const auto top = cbor::decode(envelope);
        const auto& msg = untag(top, kTagSign1, 4);
        auto headers = parse_headers(msg[0], msg[1]);
        expect_alg(headers.protected_map, kAlgEdDsa);
        std::optional<KeyId> signer;
        if (const auto* k = cbor::find(headers.unprotected, kHeaderSignerKeyId)) {
            if (k->as_bytes().size() != kKeyIdSize) malformed("signer key id is not 8 bytes");
            KeyId id{};
            std::copy(k->as_bytes().begin(), k->as_bytes().end(), id.begin());
            signer = id;
        }
        if (msg[3].as_bytes().size() != 64) malformed("signature is not 64 bytes");
        return Parsed{msg[0].as_bytes(), sender_from(headers.protected_map), signer, msg[2].as_bytes(),
                      msg[3].as_bytes()};
    });

    const auto ddo = resolve_sender(resolver, parsed.sender);
    const auto& keys = ddo.verification_keys();
    const PublicKeyEntry* key = keys.empty() ? nullptr : &keys.front();
    if (parsed.signer) {
        auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.key_id() == *parsed.signer; });
        key = it == keys.end() ? nullptr : &*it;
    }
    if (!key) throw Error(Errc::bad_signature, "no matching verification key in sender DID Document");
    if (!ed25519_verify(key->public_key(), sig_structure(parsed.protected_bytes, parsed.payload), parsed.signature))
        throw Error(Errc::bad_signature, "signature does not verify");
    return {std::move(parsed.payload), parsed.sender};
}

Opened unverified_contents(ByteView envelope) {
    return structural([&] {
        const auto top = cbor::decode(envelope);
        const auto& msg = untag(top, kTagSign1, 4);
        return Opened{msg[2].as_bytes(), sender_from(cbor::decode(msg[0].as_bytes()).as_map())};
    });
}

SecureEnvelope encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo, Rng& rng) {
    return encrypt_impl(payload, sender, receiver_ddo, rng, false);
}

Opened decrypt(ByteView envelope, const AgentIdentity& receiver, const Resolver& resolver) {
    const auto parsed = parse_encrypt(envelope);
    const auto ddo = resolve_sender(resolver, parsed.sender);
    if (ddo.agreement_keys().empty()) throw Error(Errc::missing_agreement_key, "sender has no agreement key");
    const auto& peer = ddo.agreement_keys().front().public_key();
    const Bytes aad = enc_structure(parsed.protected_bytes);

    // No receiver id travels on the wire: try each own agreement key.
    for (const auto& own : receiver.ddo().agreement_keys()) {
        const auto key = derive_content_key(receiver.secret(own.key_id()), peer);
        try {
            return {aes_ccm_16_64_128_open(key, parsed.nonce, aad, parsed.ciphertext), parsed.sender};
        } catch (const Error& e) {
            if (e.code() != Errc::aead_failure) throw;
        }
    }
    throw Error(Errc::aead_failure, "decryption failed");
}

SecureEnvelope sign_encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo,
                            Rng& rng) {
    const auto inner = sign(payload, sender);
    return encrypt_impl(inner.bytes, sender, receiver_ddo, rng, true);
}

EnvelopeKind envelope_kind(ByteView envelope) {
    return structural([&] {
        const auto top = cbor::decode(envelope);
        const auto& t = top.as_tagged();
        if (t.tag == kTagSign1) return EnvelopeKind::Signed;
        if (t.tag == kTagEncrypt) return parse_encrypt(envelope).nested ? EnvelopeKind::SignedThenEncrypted
                                                                          : EnvelopeKind::Encrypted;
        malformed("not a DIoTComm envelope");
    });
}

Opened open(ByteView envelope, const AgentIdentity& receiver, const Resolver& resolver) {
    switch (envelope_kind(envelope)) {
    case EnvelopeKind::Signed: return verify(envelope, resolver);
    case EnvelopeKind::Encrypted: return decrypt(envelope, receiver, resolver);
    case EnvelopeKind::SignedThenEncrypted: {
        const auto outer = decrypt(envelope, receiver, resolver);
        if (envelope_kind(outer.payload) != EnvelopeKind::Signed) malformed("nested content is not a signed envelope");
        if (signed_sender(outer.payload) != outer.sender)
            throw Error(Errc::sender_mismatch, "inner signer differs from outer sender");
        return verify(outer.payload, resolver);
    }
    }
    malformed("unknown envelope kind");
}

} // namespace swid

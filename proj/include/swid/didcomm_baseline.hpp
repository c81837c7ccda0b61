#pragma once

// JOSE-based DIDComm-style envelopes, kept as the size baseline for the
// COSE envelopes in diotcomm.hpp. Same keys and primitives (Ed25519,
// static-static X25519 + HKDF, AES-CCM with 13-byte nonce and 8-byte tag),
// different encoding: general JSON serialization with base64url members.
//
// Every payload travels inside a DIDComm plaintext message
//   {"id","type","from"[,"to"],"body"}
// where body is the payload itself when it is a compact JSON object or
// array, and the base64url of the payload otherwise.

#include <string>

#include "swid/diotcomm.hpp"

namespace swid::didcomm {

inline constexpr std::string_view kMessageType = "https://didcomm.org/swarm/1.0/message";
inline constexpr std::string_view kSignedMediaType = "application/didcomm-signed+json";
inline constexpr std::string_view kEncryptedMediaType = "application/didcomm-encrypted+json";

struct JoseEnvelope {
    EnvelopeKind kind;
    std::string text;
};

/// JWS with one signature. The rng supplies the message id.
JoseEnvelope jose_sign(ByteView payload, const AgentIdentity& sender, Rng& rng);
/// Errors: malformed_envelope, unknown_sender, bad_signature, sender_mismatch.
Opened jose_verify(std::string_view envelope, const Resolver& resolver);

/// JWE with the recipient inlined (no recipients array).
JoseEnvelope jose_encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo, Rng& rng);
/// Errors: malformed_envelope, unknown_sender, missing_agreement_key, aead_failure, sender_mismatch.
Opened jose_decrypt(std::string_view envelope, const AgentIdentity& receiver, const Resolver& resolver);

/// JWS nested in a JWE (cty = application/didcomm-signed+json).
JoseEnvelope jose_sign_encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo,
                               Rng& rng);

/// Opens any of the three kinds down to the application payload.
Opened jose_open(std::string_view envelope, const AgentIdentity& receiver, const Resolver& resolver);

EnvelopeKind jose_kind(std::string_view envelope);

inline std::size_t overhead(const JoseEnvelope& env, std::size_t payload_len) { return env.text.size() - payload_len; }

} // namespace swid::didcomm

#pragma once

// COSE-based secure envelopes whose only header is the sender id (the
// sender's 16-byte NSI in the protected "kid" field).
//
//   Signed              COSE_Sign1 (tag 18), EdDSA
//   Encrypted           COSE_Encrypt (tag 96), AES-CCM-16-64-128, one
//                       direct ECDH-SS + HKDF-256 recipient
//   SignedThenEncrypted Encrypted whose plaintext is a Signed envelope,
//                       marked with content type 18 (cose-sign1)

#include <functional>
#include <optional>

#include "swid/bytes.hpp"
#include "swid/crypto.hpp"
#include "swid/identity.hpp"

namespace swid {

enum class EnvelopeKind { Signed, Encrypted, SignedThenEncrypted };

std::string_view to_string(EnvelopeKind kind);

struct SecureEnvelope {
    EnvelopeKind kind;
    Bytes bytes;
};

/// Looks up a DID Document by DID; nullopt when unknown. Must tolerate concurrent calls.
using Resolver = std::function<std::optional<DidDocument>(const SwarmDid&)>;

/// Resolver over a fixed set of documents.
Resolver make_resolver(std::vector<DidDocument> documents);

struct Opened {
    Bytes payload;
    SwarmDid sender;
};

namespace cose {
inline constexpr std::uint64_t kTagSign1 = 18;
inline constexpr std::uint64_t kTagEncrypt = 96;

inline constexpr int kHeaderAlg = 1;
inline constexpr int kHeaderContentType = 3;
inline constexpr int kHeaderKid = 4;
inline constexpr int kHeaderIv = 5;
/// Private-use label naming the signing key when it is not the first verification key.
inline constexpr int kHeaderSignerKeyId = -65537;

inline constexpr int kAlgEdDsa = -8;
inline constexpr int kAlgAesCcm16_64_128 = 10;
inline constexpr int kAlgEcdhSsHkdf256 = -27;

/// CoAP content format of application/cose; cose-type="cose-sign1".
inline constexpr int kContentTypeSign1 = 18;
} // namespace cose

/// Signs with the first verification key, or with `key_id` when given.
SecureEnvelope sign(ByteView payload, const AgentIdentity& sender, std::optional<KeyId> key_id = std::nullopt);

/// Errors: malformed_envelope, unknown_sender, bad_signature.
Opened verify(ByteView envelope, const Resolver& resolver);

/// Payload and claimed sender of a Signed envelope WITHOUT checking the
/// signature. Only for bootstrapping, e.g. when the payload carries the
/// sender's own DID Document.
Opened unverified_contents(ByteView envelope);

/// Errors: missing_agreement_key, payload_too_large.
SecureEnvelope encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo, Rng& rng);

/// Returns the raw plaintext; for a SignedThenEncrypted envelope that is the
/// inner Signed envelope. Errors: malformed_envelope, unknown_sender,
/// missing_agreement_key, aead_failure.
Opened decrypt(ByteView envelope, const AgentIdentity& receiver, const Resolver& resolver);

SecureEnvelope sign_encrypt(ByteView payload, const AgentIdentity& sender, const DidDocument& receiver_ddo, Rng& rng);

/// Opens any envelope kind down to the application payload. For nested
/// envelopes the inner signer must equal the outer sender (sender_mismatch).
Opened open(ByteView envelope, const AgentIdentity& receiver, const Resolver& resolver);

/// Classifies envelope bytes; throws Error(malformed_envelope) otherwise.
EnvelopeKind envelope_kind(ByteView envelope);

inline std::size_t overhead(const SecureEnvelope& env, std::size_t payload_len) { return env.bytes.size() - payload_len; }

/// AES-CCM key shared by a static-static X25519 pair: HKDF-SHA-256 over the
/// shared secret with the COSE_KDF_Context for a 128-bit AES-CCM-16-64-128 key.
ContentKey derive_content_key(const Key32& own_secret, const Key32& peer_public);

} // namespace swid

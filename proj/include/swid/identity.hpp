#pragma once

// The did:sw identifier scheme: 16-byte random identifiers, Ed25519
// verification keys, X25519 agreement keys and in-memory DID Documents.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swid/bytes.hpp"
#include "swid/crypto.hpp"

namespace swid {

inline constexpr std::size_t kNsiSize = 16;
inline constexpr std::size_t kKeyIdSize = 8;
inline constexpr std::size_t kBinaryDidSize = 19;
inline constexpr std::string_view kDidTextPrefix = "did:sw:";
inline constexpr std::string_view kDidBinaryPrefix = "sw:";

using Nsi = std::array<std::uint8_t, kNsiSize>;
using KeyId = std::array<std::uint8_t, kKeyIdSize>;

class SwarmDid {
public:
    explicit SwarmDid(const Nsi& nsi) : nsi_(nsi) {}

    /// Throws Error(bad_nsi_length) unless exactly 16 bytes.
    static SwarmDid from_nsi(ByteView nsi);
    /// Parses "did:sw:<base58>"; errors wrong_method, invalid_base58 or bad_nsi_length.
    static SwarmDid parse(std::string_view text);
    /// Parses the 19-byte "sw:" + NSI form.
    static SwarmDid from_binary(ByteView bytes);

    const Nsi& nsi() const { return nsi_; }
    std::string to_text() const;
    Bytes to_binary() const;

    auto operator<=>(const SwarmDid&) const = default;

private:
    Nsi nsi_;
};

SwarmDid generate_did(Rng& rng);
inline SwarmDid parse_did(std::string_view text) { return SwarmDid::parse(text); }

/// First eight bytes of SHA-256(public_key). Throws Error(invalid_argument) if the key is not 32 bytes.
KeyId derive_key_id(ByteView public_key);

enum class KeyRole { verification, agreement };
enum class Curve { ed25519, x25519 };

std::string_view to_string(KeyRole role);
std::string_view to_string(Curve curve);
Curve curve_for(KeyRole role);

class PublicKeyEntry {
public:
    /// Derives the key id from the public key.
    static PublicKeyEntry create(KeyRole role, const Key32& public_key);
    /// Validates a decoded entry: curve must fit the role (unsupported_curve)
    /// and key_id must match the public key (integrity).
    static PublicKeyEntry from_parts(KeyRole role, Curve curve, const KeyId& key_id, const Key32& public_key);

    const KeyId& key_id() const { return key_id_; }
    KeyRole role() const { return role_; }
    Curve curve() const { return curve_for(role_); }
    const Key32& public_key() const { return public_key_; }

    bool operator==(const PublicKeyEntry&) const = default;

private:
    PublicKeyEntry(KeyRole role, const KeyId& key_id, const Key32& public_key)
        : key_id_(key_id), role_(role), public_key_(public_key) {}

    KeyId key_id_;
    KeyRole role_;
    Key32 public_key_;
};

/// True for RFC 3986 absolute URLs: "scheme:rest" in printable ASCII without spaces.
bool is_absolute_url(std::string_view url);

class ServiceEndpoint {
public:
    /// Throws Error(invalid_endpoint) when url is not an absolute URL or id/type
    /// are empty or contain characters outside printable ASCII.
    static ServiceEndpoint create(std::string url, std::optional<std::string> id = std::nullopt,
                                  std::optional<std::string> type = std::nullopt);

    const std::string& url() const { return url_; }
    const std::optional<std::string>& id() const { return id_; }
    const std::optional<std::string>& type() const { return type_; }

    /// Same endpoint with the optional id and type removed.
    ServiceEndpoint url_only() const { return ServiceEndpoint(url_, std::nullopt, std::nullopt); }

    bool operator==(const ServiceEndpoint&) const = default;

private:
    ServiceEndpoint(std::string url, std::optional<std::string> id, std::optional<std::string> type)
        : url_(std::move(url)), id_(std::move(id)), type_(std::move(type)) {}

    std::string url_;
    std::optional<std::string> id_;
    std::optional<std::string> type_;
};

class DidDocument {
public:
    /// Enforces: keys carry the right role, at least one key of each role and
    /// one endpoint (malformed), unique key ids (duplicate_key_id), unique
    /// endpoint ids (invalid_endpoint).
    static DidDocument create(SwarmDid did, std::vector<PublicKeyEntry> verification_keys,
                              std::vector<PublicKeyEntry> agreement_keys, std::vector<ServiceEndpoint> endpoints);

    const SwarmDid& did() const { return did_; }
    const std::vector<PublicKeyEntry>& verification_keys() const { return verification_keys_; }
    const std::vector<PublicKeyEntry>& agreement_keys() const { return agreement_keys_; }
    const std::vector<ServiceEndpoint>& endpoints() const { return endpoints_; }

    const PublicKeyEntry* find_key(const KeyId& key_id) const;

    bool operator==(const DidDocument&) const = default;

private:
    DidDocument(SwarmDid did, std::vector<PublicKeyEntry> vk, std::vector<PublicKeyEntry> ak,
                std::vector<ServiceEndpoint> ep)
        : did_(did), verification_keys_(std::move(vk)), agreement_keys_(std::move(ak)), endpoints_(std::move(ep)) {}

    SwarmDid did_;
    std::vector<PublicKeyEntry> verification_keys_;
    std::vector<PublicKeyEntry> agreement_keys_;
    std::vector<ServiceEndpoint> endpoints_;
};

struct KeyPair {
    PublicKeyEntry public_entry;
    Key32 secret; // Ed25519 seed or clamped X25519 scalar
};

KeyPair generate_keypair(KeyRole role, Rng& rng);

/// Public key for a stored secret of the given role.
Key32 public_key_from_secret(KeyRole role, const Key32& secret);

/// A DID Document together with the private half of every key in it.
class AgentIdentity {
public:
    /// Throws Error(invalid_key) if a key lacks a secret or a secret does not re-derive its public key.
    static AgentIdentity create(DidDocument ddo, std::map<KeyId, Key32> secrets);

    const DidDocument& ddo() const { return ddo_; }
    const SwarmDid& did() const { return ddo_.did(); }
    const std::map<KeyId, Key32>& secrets() const { return secrets_; }

    /// Throws Error(invalid_key) when the id is unknown.
    const Key32& secret(const KeyId& key_id) const;

private:
    AgentIdentity(DidDocument ddo, std::map<KeyId, Key32> secrets) : ddo_(std::move(ddo)), secrets_(std::move(secrets)) {}

    DidDocument ddo_;
    std::map<KeyId, Key32> secrets_;
};

/// Fresh DID with one verification key, one agreement key and one endpoint.
AgentIdentity build_identity(std::string_view endpoint_url, Rng& rng);

} // namespace swid

#include "swid/identity.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "swid/error.hpp"
#include "swid/text_encoding.hpp"

namespace swid {

SwarmDid SwarmDid::from_nsi(ByteView nsi) {
    if (nsi.size() != kNsiSize)
        throw Error(Errc::bad_nsi_length, "DID NSI must be 16 bytes, got " + std::to_string(nsi.size()));
    Nsi raw{};
    std::copy(nsi.begin(), nsi.end(), raw.begin());
    return SwarmDid(raw);
}

SwarmDid SwarmDid::parse(std::string_view text) {
    if (!text.starts_with(kDidTextPrefix)) {
        throw Error(Errc::wrong_method, "not a did:sw identifier: " + std::string(text.substr(0, 32)));
    }
    auto suffix = text.substr(kDidTextPrefix.size());
    if (suffix.empty()) throw Error(Errc::bad_nsi_length, "empty DID NSI");
    return from_nsi(base58_decode(suffix));
}

SwarmDid SwarmDid::from_binary(ByteView bytes) {
    if (bytes.size() != kBinaryDidSize) throw Error(Errc::bad_nsi_length, "binary DID must be 19 bytes");
    if (!std::equal(kDidBinaryPrefix.begin(), kDidBinaryPrefix.end(), bytes.begin()))
        throw Error(Errc::wrong_method, "binary DID lacks the sw: tag");
    return from_nsi(bytes.subspan(kDidBinaryPrefix.size()));
}

std::string SwarmDid::to_text() const { return std::string(kDidTextPrefix) + base58_encode(nsi_); }

Bytes SwarmDid::to_binary() const {
    Bytes out(kBinaryDidSize);
    auto it = std::copy(kDidBinaryPrefix.begin(), kDidBinaryPrefix.end(), out.begin());
    std::copy(nsi_.begin(), nsi_.end(), it);
    return out;
}

SwarmDid generate_did(Rng& rng) { return SwarmDid(rng.array<kNsiSize>()); }

KeyId derive_key_id(ByteView public_key) {
    if (public_key.size() != 32) throw Error(Errc::invalid_argument, "public key must be 32 bytes");
    auto digest = sha256(public_key);
    KeyId id{};
    std::copy_n(digest.begin(), id.size(), id.begin());
    return id;
}

std::string_view to_string(KeyRole role) {
    return role == KeyRole::verification ? "verification" : "agreement";
}

std::string_view to_string(Curve curve) { return curve == Curve::ed25519 ? "Ed25519" : "X25519"; }

Curve curve_for(KeyRole role) { return role == KeyRole::verification ? Curve::ed25519 : Curve::x25519; }

PublicKeyEntry PublicKeyEntry::create(KeyRole role, const Key32& public_key) {
    return PublicKeyEntry(role, derive_key_id(public_key), public_key);
}

PublicKeyEntry PublicKeyEntry::from_parts(KeyRole role, Curve curve, const KeyId& key_id, const Key32& public_key) {
    if (curve != curve_for(role))
        throw Error(Errc::unsupported_curve,
                    std::string(to_string(curve)) + " is not valid for a " + std::string(to_string(role)) + " key");
    if (derive_key_id(public_key) != key_id) throw Error(Errc::integrity, "key id does not match public key");
    return PublicKeyEntry(role, key_id, public_key);
}

namespace {

bool is_token(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c > ' ' && c <= '~'; });
}

} // namespace

bool is_absolute_url(std::string_view url) {
    static const std::regex kAbsolute(R"(^[A-Za-z][A-Za-z0-9+.\-]*:[!-~]+$)");
    return std::regex_match(url.begin(), url.end(), kAbsolute);
}

ServiceEndpoint ServiceEndpoint::create(std::string url, std::optional<std::string> id,
                                        std::optional<std::string> type) {
    if (url.empty()) throw Error(Errc::invalid_endpoint, "empty endpoint URL");
    if (!is_absolute_url(url)) throw Error(Errc::invalid_endpoint, "endpoint is not an absolute URL: " + url);
    for (const auto* field : {&id, &type})
        if (*field && !is_token(**field)) throw Error(Errc::invalid_endpoint, "endpoint id/type must be printable ASCII");
    return ServiceEndpoint(std::move(url), std::move(id), std::move(type));
}

DidDocument DidDocument::create(SwarmDid did, std::vector<PublicKeyEntry> verification_keys,
                                std::vector<PublicKeyEntry> agreement_keys, std::vector<ServiceEndpoint> endpoints) {
    if (verification_keys.empty()) throw Error(Errc::malformed, "DID Document needs a verification key");
    if (agreement_keys.empty()) throw Error(Errc::malformed, "DID Document needs an agreement key");
    if (endpoints.empty()) throw Error(Errc::malformed, "DID Document needs a service endpoint");

    std::set<KeyId> ids;
    auto admit = [&](const PublicKeyEntry& key, KeyRole expected) {
        if (key.role() != expected) throw Error(Errc::malformed, "key listed under the wrong role");
        if (!ids.insert(key.key_id()).second) throw Error(Errc::duplicate_key_id, "duplicate key id in DID Document");
    };
    for (const auto& k : verification_keys) admit(k, KeyRole::verification);
    for (const auto& k : agreement_keys) admit(k, KeyRole::agreement);

    std::set<std::string> endpoint_ids;
    for (const auto& e : endpoints)
        if (e.id() && !endpoint_ids.insert(*e.id()).second)
            throw Error(Errc::invalid_endpoint, "duplicate endpoint id " + *e.id());

    return DidDocument(did, std::move(verification_keys), std::move(agreement_keys), std::move(endpoints));
}

const PublicKeyEntry* DidDocument::find_key(const KeyId& key_id) const {
    for (const auto* list : {&verification_keys_, &agreement_keys_})
        for (const auto& k : *list)
            if (k.key_id() == key_id) return &k;
    return nullptr;
}

Key32 public_key_from_secret(KeyRole role, const Key32& secret) {
    return role == KeyRole::verification ? ed25519_public_key(secret) : x25519_public_key(secret);
}

KeyPair generate_keypair(KeyRole role, Rng& rng) {
    Key32 secret = rng.array<32>();
    if (role == KeyRole::agreement) secret = x25519_clamp(secret);
    return KeyPair{PublicKeyEntry::create(role, public_key_from_secret(role, secret)), secret};
}

AgentIdentity AgentIdentity::create(DidDocument ddo, std::map<KeyId, Key32> secrets) {
    auto check = [&](const PublicKeyEntry& key) {
        auto it = secrets.find(key.key_id());
        if (it == secrets.end()) throw Error(Errc::invalid_key, "missing private key for a DID Document key");
        if (public_key_from_secret(key.role(), it->second) != key.public_key())
            throw Error(Errc::invalid_key, "private key does not match its public key");
    };
    for (const auto& k : ddo.verification_keys()) check(k);
    for (const auto& k : ddo.agreement_keys()) check(k);
    if (secrets.size() != ddo.verification_keys().size() + ddo.agreement_keys().size())
        throw Error(Errc::invalid_key, "private key without a matching public key");
    return AgentIdentity(std::move(ddo), std::move(secrets));
}

const Key32& AgentIdentity::secret(const KeyId& key_id) const {
    auto it = secrets_.find(key_id);
    if (it == secrets_.end()) throw Error(Errc::invalid_key, "no private key with that id");
    return it->second;
}

AgentIdentity build_identity(std::string_view endpoint_url, Rng& rng) {
    auto endpoint = ServiceEndpoint::create(std::string(endpoint_url));
    auto did = generate_did(rng);
    auto signing = generate_keypair(KeyRole::verification, rng);
    auto agreement = generate_keypair(KeyRole::agreement, rng);
    auto ddo = DidDocument::create(did, {signing.public_entry}, {agreement.public_entry}, {std::move(endpoint)});
    return AgentIdentity::create(std::move(ddo), {{signing.public_entry.key_id(), signing.secret},
                                                  {agreement.public_entry.key_id(), agreement.secret}});
}

} // namespace swid

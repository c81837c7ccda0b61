#pragma once

// On-disk agent state:
//   <dir>/identity.cbor     {"ddo": CBOR-DI bytes, "secrets": [[key_id, secret], ...]}  (mode 0600)
//   <dir>/config.json       {"registry": "<url>"}
//   <dir>/peers/<nsi>.cbor  cached peer DID Documents in CBOR-DI, <nsi> in hex

#include <filesystem>
#include <optional>
#include <string>

#include "swid/diotcomm.hpp"
#include "swid/identity.hpp"

namespace swid::agent {

class AgentStore {
public:
    /// Errors: store_exists when the directory already holds an identity.
    static AgentStore create(const std::filesystem::path& dir, const AgentIdentity& identity);
    /// Errors: store_missing.
    static AgentStore open(const std::filesystem::path& dir);

    const AgentIdentity& identity() const { return identity_; }
    const std::filesystem::path& dir() const { return dir_; }

    /// Whole-file atomic replace of the peer's cache entry.
    void cache_peer(const DidDocument& ddo) const;
    /// Cached document, re-validated on load; nullopt when absent.
    std::optional<DidDocument> find_peer(const SwarmDid& did) const;

    std::optional<std::string> registry_url() const;
    void set_registry_url(const std::string& url) const;

    /// Own document plus the peer cache.
    Resolver local_resolver() const;

private:
    AgentStore(std::filesystem::path dir, AgentIdentity identity) : dir_(std::move(dir)), identity_(std::move(identity)) {}

    std::filesystem::path peer_path(const SwarmDid& did) const;

    std::filesystem::path dir_;
    AgentIdentity identity_;
};

/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, ByteView bytes);
Bytes read_file(const std::filesystem::path& path);

} // namespace swid::agent

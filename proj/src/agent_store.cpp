#include "swid/agent_store.hpp"

#include <fstream>

#include <json.hpp>

#include "swid/cbor.hpp"
#include "swid/ddo_codec.hpp"
#include "swid/error.hpp"

namespace swid::agent {

namespace fs = std::filesystem;

namespace {

constexpr const char* kIdentityFile = "identity.cbor";
constexpr const char* kConfigFile = "config.json";
constexpr const char* kPeersDir = "peers";

Bytes serialize_identity(const AgentIdentity& id) {
    cbor::Array secrets;
    for (const auto& [key_id, secret] : id.secrets()) secrets.push_back(cbor::Array{to_bytes(key_id), to_bytes(secret)});
    return cbor::encode(cbor::Map{{"ddo", encode(id.ddo(), WireFormat::cbor_di)}, {"secrets", std::move(secrets)}});
}

AgentIdentity parse_identity(ByteView bytes) {
    const auto v = cbor::decode(bytes);
    const auto& m = v.as_map();
    const auto* ddo = cbor::find(m, "ddo");
    const auto* secrets = cbor::find(m, "secrets");
    if (!ddo || !secrets) throw Error(Errc::malformed, "identity file lacks ddo or secrets");
    std::map<KeyId, Key32> keys;
    for (const auto& entry : secrets->as_array()) {
        const auto& pair = entry.as_array();
        if (pair.size() != 2 || pair[0].as_bytes().size() != kKeyIdSize || pair[1].as_bytes().size() != 32)
            throw Error(Errc::malformed, "bad secret entry in identity file");
        KeyId id{};
        Key32 secret{};
        std::copy(pair[0].as_bytes().begin(), pair[0].as_bytes().end(), id.begin());
        std::copy(pair[1].as_bytes().begin(), pair[1].as_bytes().end(), secret.begin());
        keys.emplace(id, secret);
    }
    return AgentIdentity::create(decode(ddo->as_bytes(), WireFormat::cbor_di), std::move(keys));
}

} // namespace

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::not_found, "cannot read " + path.string());
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file_atomic(const fs::path& path, ByteView bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(Errc::invalid_argument, "cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

AgentStore AgentStore::create(const fs::path& dir, const AgentIdentity& identity) {
    if (fs::exists(dir / kIdentityFile)) throw Error(Errc::store_exists, "agent store already exists at " + dir.string());
    fs::create_directories(dir / kPeersDir);
    const fs::path file = dir / kIdentityFile;
    write_file_atomic(file, serialize_identity(identity));
    fs::permissions(file, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
    return AgentStore(dir, identity);
}

AgentStore AgentStore::open(const fs::path& dir) {
    const fs::path file = dir / kIdentityFile;
    if (!fs::exists(file)) throw Error(Errc::store_missing, "no agent store at " + dir.string());
    return AgentStore(dir, parse_identity(read_file(file)));
}

fs::path AgentStore::peer_path(const SwarmDid& did) const { return dir_ / kPeersDir / (to_hex(did.nsi()) + ".cbor"); }

void AgentStore::cache_peer(const DidDocument& ddo) const {
    fs::create_directories(dir_ / kPeersDir);
    write_file_atomic(peer_path(ddo.did()), encode(ddo, WireFormat::cbor_di));
}

std::optional<DidDocument> AgentStore::find_peer(const SwarmDid& did) const {
    const fs::path path = peer_path(did);
    if (!fs::exists(path)) return std::nullopt;
    auto ddo = decode(read_file(path), WireFormat::cbor_di);
    if (ddo.did() != did) throw Error(Errc::integrity, "peer cache entry holds a different DID");
    return ddo;
}

std::optional<std::string> AgentStore::registry_url() const {
    const fs::path path = dir_ / kConfigFile;
    if (!fs::exists(path)) return std::nullopt;
    const Bytes raw = read_file(path);
    auto j = nlohmann::json::parse(raw.begin(), raw.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("registry") || !j["registry"].is_string()) return std::nullopt;
    return j["registry"].get<std::string>();
}

void AgentStore::set_registry_url(const std::string& url) const {
    nlohmann::json j;
    j["registry"] = url;
    write_file_atomic(dir_ / kConfigFile, to_bytes(j.dump()));
}

Resolver AgentStore::local_resolver() const {
    return [store = *this](const SwarmDid& did) -> std::optional<DidDocument> {
        if (did == store.identity_.did()) return store.identity_.ddo();
        return store.find_peer(did);
    };
}

} // namespace swid::agent

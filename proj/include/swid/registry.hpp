#pragma once

// Append-only DID Document registry ("blockchain mock"): create and resolve
// only, with the creator proving control of the document it registers.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

#include "swid/bytes.hpp"
#include "swid/ddo_codec.hpp"
#include "swid/error.hpp"
#include "swid/identity.hpp"

namespace httplib {
class Server;
}

namespace swid::registry {

struct Record {
    SwarmDid did;
    Bytes ddo_canonical; // CBOR-DI
    std::chrono::system_clock::time_point registered_at;
};

class Store {
public:
    virtual ~Store() = default;
    /// Atomic create-if-absent. False when the DID already has a record.
    virtual bool insert_if_absent(const Record& record) = 0;
    virtual std::optional<Record> find(const SwarmDid& did) const = 0;
    virtual std::size_t size() const = 0;
};

class MemoryStore : public Store {
public:
    bool insert_if_absent(const Record& record) override;
    std::optional<Record> find(const SwarmDid& did) const override;
    std::size_t size() const override;

protected:
    bool contains_locked(const SwarmDid& did) const { return records_.count(did) != 0; }
    void put_locked(const Record& record) { records_.emplace(record.did, std::make_shared<const Record>(record)); }

    mutable std::shared_mutex mutex_;

private:
    std::map<SwarmDid, std::shared_ptr<const Record>> records_;
};

/// MemoryStore persisted to an append-only journal. Each entry is a 4-byte
/// big-endian length followed by CBOR [nsi, ddo_canonical, registered_at_ms].
/// An incomplete trailing entry (interrupted write) is dropped on open.
class JournalStore final : public MemoryStore {
public:
    explicit JournalStore(std::filesystem::path path);

    bool insert_if_absent(const Record& record) override;

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// HTTP status for a registry error code.
int http_status(Errc code);

class Registry {
public:
    explicit Registry(std::unique_ptr<Store> store) : store_(std::move(store)) {}

    /// Accepts a Signed envelope whose payload is the signer's own CBOR-DI
    /// DID Document. Errors: malformed_payload, kid_mismatch, bad_signature, duplicate_did.
    SwarmDid register_envelope(ByteView envelope);

    /// Errors: not_found.
    Bytes resolve(const SwarmDid& did, WireFormat format) const;

    std::optional<Record> record(const SwarmDid& did) const { return store_->find(did); }
    std::size_t size() const { return store_->size(); }

private:
    std::unique_ptr<Store> store_;
};

/// HTTP front end:
///   POST /dids               application/cose body -> 201 + text DID
///   GET  /dids/{did}?format= json | cbor | cbor-di (default)
///   GET  /healthz
/// Error responses carry the error token as a text/plain body.
class HttpServer {
public:
    explicit HttpServer(Registry& registry);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves on the calling thread until stop().
    void listen();
    /// Serves on a background thread.
    void start();
    void stop();

private:
    Registry& registry_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// Client for HttpServer. Server errors come back as the matching Error
/// code; transport failures as Errc::network.
class Client {
public:
    explicit Client(std::string base_url);

    SwarmDid register_envelope(ByteView envelope) const;
    Bytes resolve(const SwarmDid& did, WireFormat format) const;
    bool healthy() const;

    const std::string& base_url() const { return base_url_; }

private:
    std::string base_url_;
};

} // namespace swid::registry

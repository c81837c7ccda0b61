#include "swid/registry.hpp"

#include "swid/cbor.hpp"
#include "swid/diotcomm.hpp"

namespace swid::registry {

namespace {

std::int64_t to_millis(std::chrono::system_clock::time_point t) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

Bytes journal_entry(const Record& r) {
    Bytes body = cbor::encode(cbor::Array{to_bytes(r.did.nsi()), r.ddo_canonical, to_millis(r.registered_at)});
    Bytes out;
    const auto n = static_cast<std::uint32_t>(body.size());
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(n >> s));
    append(out, body);
    return out;
}

Record parse_entry(ByteView body) {
    const auto v = cbor::decode(body);
    const auto& a = v.as_array();
    if (a.size() != 3) throw Error(Errc::malformed, "bad journal entry");
    Record r{SwarmDid::from_nsi(a[0].as_bytes()), a[1].as_bytes(),
             std::chrono::system_clock::time_point(std::chrono::milliseconds(a[2].as_int()))};
    if (decode(r.ddo_canonical, WireFormat::cbor_di).did() != r.did)
        throw Error(Errc::integrity, "journal entry DID does not match its document");
    return r;
}

} // namespace

bool MemoryStore::insert_if_absent(const Record& record) {
    std::unique_lock lock(mutex_);
    if (contains_locked(record.did)) return false;
    put_locked(record);
    return true;
}

std::optional<Record> MemoryStore::find(const SwarmDid& did) const {
    std::shared_lock lock(mutex_);
    auto it = records_.find(did);
    if (it == records_.end()) return std::nullopt;
    return *it->second;
}

std::size_t MemoryStore::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

JournalStore::JournalStore(std::filesystem::path path) : path_(std::move(path)) {
    std::uintmax_t good = 0;
    if (std::filesystem::exists(path_)) {
        std::ifstream in(path_, std::ios::binary);
        Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::size_t pos = 0;
        while (data.size() - pos >= 4) {
            std::uint32_t n = 0;
            for (int i = 0; i < 4; ++i) n = (n << 8) | data[pos + i];
            if (data.size() - pos - 4 < n) break;
            put_locked(parse_entry(ByteView(data).subspan(pos + 4, n)));
            pos += 4 + n;
        }
        good = pos;
        if (good != data.size()) std::filesystem::resize_file(path_, good);
    }
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw Error(Errc::invalid_argument, "cannot open registry journal " + path_.string());
}

bool JournalStore::insert_if_absent(const Record& record) {
    std::unique_lock lock(mutex_);
    if (contains_locked(record.did)) return false;
    const Bytes entry = journal_entry(record);
    out_.write(reinterpret_cast<const char*>(entry.data()), static_cast<std::streamsize>(entry.size()));
    out_.flush();
    if (!out_) throw Error(Errc::invalid_argument, "registry journal write failed");
    put_locked(record);
    return true;
}

int http_status(Errc code) {
    switch (code) {
    case Errc::bad_signature:
    case Errc::kid_mismatch: return 401;
    case Errc::duplicate_did: return 409;
    case Errc::not_found: return 404;
    default: return 400;
    }
}

SwarmDid Registry::register_envelope(ByteView envelope) {
    Opened claimed = [&] {
        try {
            return unverified_contents(envelope);
        } catch (const Error& e) {
            throw Error(Errc::malformed_payload, std::string("not a signed envelope: ") + e.what());
        }
    }();

    std::optional<DidDocument> ddo;
    try {
        ddo = decode(claimed.payload, WireFormat::cbor_di);
    } catch (const Error& e) {
        throw Error(Errc::malformed_payload, std::string("payload is not a CBOR-DI document: ") + e.what());
    }
    if (ddo->did() != claimed.sender) throw Error(Errc::kid_mismatch, "envelope sender is not the document's DID");

    // The document vouches for itself: verify with its own verification keys.
    try {
        verify(envelope, make_resolver({*ddo}));
    } catch (const Error& e) {
        if (e.code() == Errc::malformed_envelope) throw Error(Errc::malformed_payload, e.what());
        throw Error(Errc::bad_signature, e.what());
    }

    Record record{ddo->did(), encode(*ddo, WireFormat::cbor_di), std::chrono::system_clock::now()};
    if (!store_->insert_if_absent(record))
        throw Error(Errc::duplicate_did, ddo->did().to_text() + " is already registered");
    return ddo->did();
}

Bytes Registry::resolve(const SwarmDid& did, WireFormat format) const {
    auto record = store_->find(did);
    if (!record) throw Error(Errc::not_found, did.to_text() + " is not registered");
    if (format == WireFormat::cbor_di) return record->ddo_canonical;
    return convert(record->ddo_canonical, WireFormat::cbor_di, format);
}

} // namespace swid::registry

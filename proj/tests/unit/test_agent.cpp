#include <doctest.h>

#include <sstream>

#include <sys/stat.h>

#include "swid/agent_store.hpp"
#include "swid/bench.hpp"
#include "swid/ddo_codec.hpp"
#include "swid/diotcomm.hpp"
#include "swid/error.hpp"
#include "test_support.hpp"

using namespace swid;

namespace {

Errc error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::invalid_argument;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        SystemRng rng;
        path = std::filesystem::temp_directory_path() / ("swid-agent-" + to_hex(rng.bytes(6)));
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("agent store lifecycle") {
    TempDir dir;
    SystemRng rng;
    const auto id = build_identity("coap://a.example/agent", rng);
    CHECK(error_of([&] { agent::AgentStore::open(dir.path); }) == Errc::store_missing);

    const auto store = agent::AgentStore::create(dir.path, id);
    CHECK(error_of([&] { agent::AgentStore::create(dir.path, id); }) == Errc::store_exists);

    struct stat st {};
    REQUIRE(::stat((dir.path / "identity.cbor").c_str(), &st) == 0);
    CHECK((st.st_mode & 0777) == 0600);

    const auto reopened = agent::AgentStore::open(dir.path);
    CHECK(reopened.identity().ddo() == testing::url_only(id.ddo()));
    CHECK(reopened.identity().secrets() == id.secrets());

    CHECK_FALSE(reopened.registry_url().has_value());
    reopened.set_registry_url("http://127.0.0.1:9");
    CHECK(agent::AgentStore::open(dir.path).registry_url() == "http://127.0.0.1:9");
}

TEST_CASE("peer cache") {
    TempDir dir;
    SystemRng rng;
    const auto a = build_identity("coap://a.example/agent", rng);
    const auto b = build_identity("coap://b.example/agent", rng);
    const auto store = agent::AgentStore::create(dir.path, a);
    CHECK_FALSE(store.find_peer(b.did()).has_value());
    store.cache_peer(b.ddo());
    CHECK(store.find_peer(b.did()) == b.ddo());

    const auto resolver = store.local_resolver();
    CHECK(resolver(a.did()).has_value());
    CHECK(resolver(b.did()).has_value());
    CHECK_FALSE(resolver(generate_did(rng)).has_value());

    const auto env = sign_encrypt(to_bytes("m"), b, a.ddo(), rng);
    CHECK(open(env.bytes, store.identity(), resolver).sender == b.did());

    // A cache file whose contents belong to another DID is not trusted.
    const auto c = build_identity("coap://c.example/agent", rng);
    agent::write_file_atomic(dir.path / "peers" / (to_hex(c.did().nsi()) + ".cbor"), encode(b.ddo(), WireFormat::cbor_di));
    CHECK(error_of([&] { store.find_peer(c.did()); }) == Errc::integrity);
}

TEST_CASE("file helpers") {
    TempDir dir;
    std::filesystem::create_directories(dir.path);
    const auto f = dir.path / "x.bin";
    agent::write_file_atomic(f, to_bytes("one"));
    agent::write_file_atomic(f, to_bytes("two"));
    CHECK(agent::read_file(f) == to_bytes("two"));
    CHECK(error_of([&] { agent::read_file(dir.path / "missing"); }) == Errc::not_found);
}

TEST_CASE("size report") {
    SeededRng rng(50);
    const auto report = bench::run(rng);
    for (const auto& r : report.rows) {
        CHECK(r.overhead_bytes == r.total_bytes - r.payload_bytes);
        CHECK(r.fits_lora == (r.total_bytes <= bench::kLoraMaxPacket));
    }
    const auto* did = report.find("methods/did:sw/did", "binary", "none");
    REQUIRE(did != nullptr);
    CHECK(did->total_bytes == 19);

    int fitting = 0;
    for (auto env : {"didcomm-sign", "diotcomm-sign"})
        for (auto fmt : kAllWireFormats) {
            const auto* row = report.find("signed-ddo", to_string(fmt), env);
            REQUIRE(row != nullptr);
            if (row->fits_lora) {
                ++fitting;
                CHECK(std::string(env) == "diotcomm-sign");
                CHECK(fmt == WireFormat::cbor_di);
            }
        }
    CHECK(fitting == 1);

    std::ostringstream csv;
    bench::write_csv(report, csv);
    const auto text = csv.str();
    CHECK(text.substr(0, text.find('\n')) == bench::kCsvHeader);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(report.rows.size() + 1));
    CHECK(text.find(std::string(bench::kPublished)) != std::string::npos);
}

TEST_CASE("bench is reproducible with a seed") {
    SeededRng r1(7), r2(7);
    std::ostringstream a, b;
    bench::write_csv(bench::run(r1), a);
    bench::write_csv(bench::run(r2), b);
    CHECK(a.str() == b.str());
}

// swid: agent command line.
//
//   swid identity new --endpoint URL
//   swid identity show [--format F] [--out FILE]
//   swid register [--registry URL]
//   swid resolve DID [--format F] [--offline] [--out FILE]
//   swid msg --to DID --mode M --in FILE --out FILE
//   swid open --in FILE --out FILE
//   swid bench --out CSV [--seed N] [--fixtures DIR] [--table]
//
// Exit codes: 0 ok, 1 usage or invalid input, 2 crypto failure, 3 network, 4 not found.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "swid/agent_store.hpp"
#include "swid/bench.hpp"
#include "swid/ddo_codec.hpp"
#include "swid/didcomm_baseline.hpp"
#include "swid/diotcomm.hpp"
#include "swid/registry.hpp"

namespace fs = std::filesystem;
using namespace swid;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kCrypto = 2, kNetwork = 3, kNotFound = 4 };

int exit_code(Errc code) {
    switch (code) {
    case Errc::bad_signature:
    case Errc::aead_failure:
    case Errc::sender_mismatch:
    case Errc::kid_mismatch:
    case Errc::integrity:
    case Errc::invalid_key:
    case Errc::crypto_failure:
    case Errc::malformed_envelope:
    case Errc::missing_agreement_key:
    case Errc::entropy_unavailable: return kCrypto;
    case Errc::network: return kNetwork;
    case Errc::not_found:
    case Errc::unknown_sender:
    case Errc::store_missing: return kNotFound;
    default: return kUsage;
    }
}

struct Options {
    std::string store = ".swid";
    std::string registry;
    std::optional<std::uint64_t> seed;
};

bool test_mode() {
    const char* v = std::getenv("SWID_TEST_MODE");
    return v && std::string_view(v) == "1";
}

std::unique_ptr<Rng> make_rng(const Options& opt, bool keys) {
    if (opt.seed) {
        if (keys && !test_mode())
            throw Error(Errc::invalid_argument, "--seed for key generation requires SWID_TEST_MODE=1");
        return std::make_unique<SeededRng>(*opt.seed);
    }
    return std::make_unique<SystemRng>();
}

void write_output(const std::string& path, ByteView bytes) {
    if (path.empty() || path == "-") {
        std::cout.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        std::cout.flush();
        return;
    }
    agent::write_file_atomic(path, bytes);
}

std::string registry_for(const Options& opt, const agent::AgentStore& store) {
    if (!opt.registry.empty()) return opt.registry;
    if (auto url = store.registry_url()) return *url;
    throw Error(Errc::invalid_argument, "no registry configured; pass --registry or set SWID_REGISTRY");
}

/// Peer cache first, then the registry (unless offline), caching what it returns.
Resolver network_resolver(const Options& opt, const agent::AgentStore& store, bool offline) {
    auto local = store.local_resolver();
    std::string url;
    if (!offline) {
        if (!opt.registry.empty())
            url = opt.registry;
        else if (auto saved = store.registry_url())
            url = *saved;
    }
    return [local, url, &store](const SwarmDid& did) -> std::optional<DidDocument> {
        if (auto hit = local(did)) return hit;
        if (url.empty()) return std::nullopt;
        try {
            auto ddo = decode(registry::Client(url).resolve(did, WireFormat::cbor_di), WireFormat::cbor_di);
            store.cache_peer(ddo);
            return ddo;
        } catch (const Error& e) {
            if (e.code() == Errc::not_found) return std::nullopt;
            throw;
        }
    };
}

int run(int argc, char** argv) {
    CLI::App app{"Swarm DID agent: identities, registry access, secure envelopes and size benchmarks"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--store", opt.store, "Agent store directory")->envname("SWID_STORE");
    app.add_option("--registry", opt.registry, "Registry base URL, e.g. http://127.0.0.1:8080")->envname("SWID_REGISTRY");
    app.add_option("--seed", opt.seed, "Deterministic RNG seed (key generation needs SWID_TEST_MODE=1)");

    auto* identity = app.add_subcommand("identity", "Manage the local identity");
    identity->require_subcommand(1);
    std::string endpoint;
    auto* identity_new = identity->add_subcommand("new", "Generate a DID, keys and DID Document");
    identity_new->add_option("--endpoint", endpoint, "Service endpoint URL")->required();
    std::string show_format = "json", show_out;
    auto* identity_show = identity->add_subcommand("show", "Print the local DID Document");
    identity_show->add_option("--format", show_format, "json | cbor | cbor-di");
    identity_show->add_option("--out", show_out, "Output file (default stdout)");

    std::string register_url;
    auto* reg = app.add_subcommand("register", "Register the local DID Document");
    reg->add_option("--registry", register_url, "Registry base URL (saved in the store)");

    std::string resolve_did, resolve_format = "cbor-di", resolve_out;
    bool offline = false;
    auto* resolve = app.add_subcommand("resolve", "Fetch a peer DID Document into the peer cache");
    resolve->add_option("did", resolve_did, "Text DID")->required();
    resolve->add_option("--format", resolve_format, "json | cbor | cbor-di");
    resolve->add_flag("--offline", offline, "Only consult the peer cache");
    resolve->add_option("--out", resolve_out, "Output file (default stdout)");

    std::string to_did, mode, in_file, out_file;
    auto* msg = app.add_subcommand("msg", "Protect a payload for a peer");
    msg->add_option("--to", to_did, "Receiver DID (not needed for sign modes)");
    msg->add_option("--mode", mode, "sign | encrypt | sign-encrypt | baseline-sign | baseline-encrypt | baseline-sign-encrypt")
        ->required()
        ->check(CLI::IsMember({"sign", "encrypt", "sign-encrypt", "baseline-sign", "baseline-encrypt",
                               "baseline-sign-encrypt"}));
    msg->add_option("--in", in_file, "Payload file")->required();
    msg->add_option("--out", out_file, "Envelope file")->required();
    bool msg_offline = false;
    msg->add_flag("--offline", msg_offline, "Only consult the peer cache");

    std::string open_in, open_out;
    bool open_offline = false;
    auto* open_cmd = app.add_subcommand("open", "Verify and/or decrypt an envelope");
    open_cmd->add_option("--in", open_in, "Envelope file")->required();
    open_cmd->add_option("--out", open_out, "Payload file")->required();
    open_cmd->add_flag("--offline", open_offline, "Only consult the peer cache");

    std::string csv_out, fixtures_dir;
    bool table = false;
    auto* bench_cmd = app.add_subcommand("bench", "Write the size report");
    bench_cmd->add_option("--out", csv_out, "CSV path")->required();
    bench_cmd->add_option("--seed", opt.seed, "Deterministic RNG seed");
    bench_cmd->add_option("--fixtures", fixtures_dir, "Also write the reference document in every format here");
    bench_cmd->add_flag("--table", table, "Print a text table to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (identity_new->parsed()) {
        auto rng = make_rng(opt, true);
        const auto id = build_identity(endpoint, *rng);
        agent::AgentStore::create(opt.store, id);
        std::cout << id.did().to_text() << '\n';
        return kOk;
    }

    if (identity_show->parsed()) {
        const auto store = agent::AgentStore::open(opt.store);
        write_output(show_out, encode(store.identity().ddo(), parse_wire_format(show_format)));
        return kOk;
    }

    if (reg->parsed()) {
        const auto store = agent::AgentStore::open(opt.store);
        if (!register_url.empty()) opt.registry = register_url;
        const std::string url = registry_for(opt, store);
        const auto& id = store.identity();
        const auto envelope = sign(encode(id.ddo(), WireFormat::cbor_di), id);
        const auto did = registry::Client(url).register_envelope(envelope.bytes);
        store.set_registry_url(url);
        std::cout << "registered " << did.to_text() << " at " << url << '\n';
        return kOk;
    }

    if (resolve->parsed()) {
        const auto store = agent::AgentStore::open(opt.store);
        const auto did = parse_did(resolve_did);
        const auto format = parse_wire_format(resolve_format);
        auto ddo = network_resolver(opt, store, offline)(did);
        if (!ddo) throw Error(Errc::not_found, did.to_text() + " not found");
        write_output(resolve_out, encode(*ddo, format));
        return kOk;
    }

    if (msg->parsed()) {
        const auto store = agent::AgentStore::open(opt.store);
        const Bytes payload = agent::read_file(in_file);
        auto rng = make_rng(opt, false);
        const bool needs_peer = mode != "sign" && mode != "baseline-sign";
        std::optional<DidDocument> peer;
        if (needs_peer) {
            if (to_did.empty()) throw Error(Errc::invalid_argument, "--to is required for mode " + mode);
            peer = network_resolver(opt, store, msg_offline)(parse_did(to_did));
            if (!peer) throw Error(Errc::not_found, to_did + " not found");
        }
        const auto& me = store.identity();
        Bytes out;
        if (mode == "sign") out = sign(payload, me).bytes;
        else if (mode == "encrypt") out = encrypt(payload, me, *peer, *rng).bytes;
        else if (mode == "sign-encrypt") out = sign_encrypt(payload, me, *peer, *rng).bytes;
        else if (mode == "baseline-sign") out = to_bytes(didcomm::jose_sign(payload, me, *rng).text);
        else if (mode == "baseline-encrypt") out = to_bytes(didcomm::jose_encrypt(payload, me, *peer, *rng).text);
        else out = to_bytes(didcomm::jose_sign_encrypt(payload, me, *peer, *rng).text);
        write_output(out_file, out);
        return kOk;
    }

    if (open_cmd->parsed()) {
        const auto store = agent::AgentStore::open(opt.store);
        const Bytes envelope = agent::read_file(open_in);
        const auto resolver = network_resolver(opt, store, open_offline);
        const bool jose = !envelope.empty() && envelope.front() == '{';
        const auto opened = jose ? didcomm::jose_open(to_string(envelope), store.identity(), resolver)
                                 : swid::open(envelope, store.identity(), resolver);
        write_output(open_out, opened.payload);
        std::cout << opened.sender.to_text() << '\n';
        return kOk;
    }

    if (bench_cmd->parsed()) {
        auto rng = make_rng(opt, false);
        const auto report = bench::run(*rng);
        std::ofstream csv(csv_out, std::ios::trunc);
        if (!csv) throw Error(Errc::invalid_argument, "cannot write " + csv_out);
        bench::write_csv(report, csv);
        if (!fixtures_dir.empty()) {
            fs::create_directories(fixtures_dir);
            const auto ddo = bench::reference_document();
            agent::write_file_atomic(fs::path(fixtures_dir) / "reference_ddo.json", encode(ddo, WireFormat::json));
            agent::write_file_atomic(fs::path(fixtures_dir) / "reference_ddo.cbor", encode(ddo, WireFormat::cbor_direct));
            agent::write_file_atomic(fs::path(fixtures_dir) / "reference_ddo.cbordi", encode(ddo, WireFormat::cbor_di));
        }
        if (table) bench::write_table(report, std::cout);
        return kOk;
    }
    return kUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}

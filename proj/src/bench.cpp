#include "swid/bench.hpp"

#include <iomanip>

#include "swid/cbor.hpp"
#include "swid/ddo_codec.hpp"
#include "swid/didcomm_baseline.hpp"
#include "swid/diotcomm.hpp"
#include "swid/text_encoding.hpp"

namespace swid::bench {

namespace {

Key32 key_from_hex(std::string_view hex) {
    const Bytes raw = from_hex(hex);
    Key32 out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

} // namespace

SizeRow make_row(std::string label, std::string serialization, std::string envelope, std::size_t total,
                 std::size_t payload, std::string_view source) {
    return SizeRow{std::move(label), std::move(serialization), std::move(envelope), total, payload,
                   total - payload, total <= kLoraMaxPacket, std::string(source)};
}

const SizeRow* SizeReport::find(std::string_view label, std::string_view serialization,
                                std::string_view envelope) const {
    for (const auto& r : rows)
        if (r.label == label && r.serialization == serialization && r.envelope == envelope) return &r;
    return nullptr;
}

AgentIdentity reference_identity() {
    const auto did = SwarmDid::from_nsi(base58_decode("TTbs19FJKYf6jXzS1dbnqe"));
    const Key32 signing = key_from_hex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
    const Key32 agreement =
        x25519_clamp(key_from_hex("77076d0a7318a57d3c16c17251b26645df4c2f87ebc0992ab177fba51db92c2a"));
    const auto vk = PublicKeyEntry::create(KeyRole::verification, ed25519_public_key(signing));
    const auto ak = PublicKeyEntry::create(KeyRole::agreement, x25519_public_key(agreement));
    auto ddo = DidDocument::create(did, {vk}, {ak},
                                   {ServiceEndpoint::create("coap://example.org/agent1", "#swarm-agent", "SwarmAgent")});
    return AgentIdentity::create(std::move(ddo), {{vk.key_id(), signing}, {ak.key_id(), agreement}});
}

Bytes reference_message() { return cbor::encode(cbor::Map{{"sensor", "t01"}, {"value", 2150}}); }

SizeReport run(Rng& rng) {
    SizeReport report;
    const auto reference = reference_identity();
    const auto& ddo = reference.ddo();

    const auto did_size = ddo.did().to_binary().size();
    const auto di_size = encode(ddo, WireFormat::cbor_di).size();
    report.rows.push_back(make_row("methods/did:sw/did", "binary", "none", did_size, did_size));
    report.rows.push_back(make_row("methods/did:sw/ddo", "cbor-di", "none", di_size, di_size));
    for (const auto& m : kReferenceMethods) {
        const std::string prefix(m.prefix);
        report.rows.push_back(make_row("methods/" + prefix + "/did", "text", "none", m.did_size, m.did_size,
                                       kPublished));
        report.rows.push_back(make_row("methods/" + prefix + "/ddo", "json", "none", m.ddo_size, m.ddo_size,
                                       kPublished));
    }

    for (auto f : kAllWireFormats) {
        const Bytes doc = encode(ddo, f);
        const std::string ser(to_string(f));
        report.rows.push_back(make_row("ddo", ser, "none", doc.size(), doc.size()));
        const auto jose = didcomm::jose_sign(doc, reference, rng);
        report.rows.push_back(make_row("signed-ddo", ser, "didcomm-sign", jose.text.size(), doc.size()));
        const auto cose = sign(doc, reference);
        report.rows.push_back(make_row("signed-ddo", ser, "diotcomm-sign", cose.bytes.size(), doc.size()));
    }

    const auto alice = build_identity("coap://alice.example/swarm", rng);
    const auto bob = build_identity("coap://bob.example/swarm", rng);
    const Bytes message = reference_message();
    const auto jose = didcomm::jose_sign_encrypt(message, alice, bob.ddo(), rng);
    report.rows.push_back(make_row("short-message", "cbor", "didcomm-sign-encrypt", jose.text.size(), message.size()));
    const auto cose = sign_encrypt(message, alice, bob.ddo(), rng);
    report.rows.push_back(make_row("short-message", "cbor", "diotcomm-sign-encrypt", cose.bytes.size(), message.size()));
    return report;
}

void write_csv(const SizeReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows)
        out << r.label << ',' << r.serialization << ',' << r.envelope << ',' << r.total_bytes << ',' << r.payload_bytes
            << ',' << r.overhead_bytes << ',' << (r.fits_lora ? "true" : "false") << ',' << r.source << '\n';
}

void write_table(const SizeReport& report, std::ostream& out) {
    out << std::left << std::setw(24) << "label" << std::setw(9) << "format" << std::setw(24) << "envelope"
        << std::right << std::setw(7) << "total" << std::setw(9) << "payload" << std::setw(10) << "overhead"
        << "  lora  source\n";
    for (const auto& r : report.rows)
        out << std::left << std::setw(24) << r.label << std::setw(9) << r.serialization << std::setw(24) << r.envelope
            << std::right << std::setw(7) << r.total_bytes << std::setw(9) << r.payload_bytes << std::setw(10)
            << r.overhead_bytes << "  " << (r.fits_lora ? "yes " : "no  ") << "  " << r.source << '\n';

    const auto* json = report.find("ddo", "json", "none");
    const auto* di = report.find("ddo", "cbor-di", "none");
    if (json && di)
        out << "\njson / cbor-di document size: " << std::fixed << std::setprecision(2)
            << static_cast<double>(json->total_bytes) / static_cast<double>(di->total_bytes) << "x\n";
    const auto* base = report.find("short-message", "cbor", "didcomm-sign-encrypt");
    const auto* cose = report.find("short-message", "cbor", "diotcomm-sign-encrypt");
    if (base && cose)
        out << "sign-encrypt overhead, didcomm / diotcomm: " << std::fixed << std::setprecision(2)
            << static_cast<double>(base->overhead_bytes) / static_cast<double>(cose->overhead_bytes) << "x\n";
    out << "LoRa budget: " << kLoraMaxPacket << " bytes\n";
}

} // namespace swid::bench

#include "swid/ddo_codec.hpp"

#include <algorithm>

#include <json.hpp>

#include "swid/cbor.hpp"
#include "swid/error.hpp"
#include "swid/text_encoding.hpp"

namespace swid {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- JSON model

std::string key_reference(const SwarmDid& did, const KeyId& key_id) {
    return did.to_text() + "#" + base58_encode(key_id);
}

Json key_to_json(const SwarmDid& did, const PublicKeyEntry& key) {
    Json j;
    j["id"] = key_reference(did, key.key_id());
    j["type"] = key.role() == KeyRole::verification ? kVerificationKeyType : kAgreementKeyType;
    j["publicKeyBase58"] = base58_encode(key.public_key());
    return j;
}

Json to_json_model(const DidDocument& doc) {
    Json j;
    j["id"] = doc.did().to_text();
    j["verificationMethod"] = Json::array();
    for (const auto& k : doc.verification_keys()) j["verificationMethod"].push_back(key_to_json(doc.did(), k));
    j["keyAgreement"] = Json::array();
    for (const auto& k : doc.agreement_keys()) j["keyAgreement"].push_back(key_to_json(doc.did(), k));
    j["service"] = Json::array();
    for (const auto& e : doc.endpoints()) {
        Json s;
        if (e.id()) s["id"] = *e.id();
        if (e.type()) s["type"] = *e.type();
        s["serviceEndpoint"] = e.url();
        j["service"].push_back(std::move(s));
    }
    return j;
}

const Json& member(const Json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) throw Error(Errc::malformed, std::string("missing member ") + name);
    return *it;
}

const std::string& string_member(const Json& obj, const char* name) {
    const Json& v = member(obj, name);
    if (!v.is_string()) throw Error(Errc::malformed, std::string("member ") + name + " is not a string");
    return v.get_ref<const std::string&>();
}

const Json& array_member(const Json& obj, const char* name) {
    const Json& v = member(obj, name);
    if (!v.is_array()) throw Error(Errc::malformed, std::string("member ") + name + " is not an array");
    return v;
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed(ByteView bytes, const char* what) {
    if (bytes.size() != N)
        throw Error(Errc::invalid_key, std::string(what) + " must be " + std::to_string(N) + " bytes");
    std::array<std::uint8_t, N> out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

PublicKeyEntry key_from_json(const Json& j, const SwarmDid& did, KeyRole role) {
    if (!j.is_object()) throw Error(Errc::malformed, "key entry is not an object");
    const auto& type = string_member(j, "type");
    Curve curve;
    if (type == kVerificationKeyType)
        curve = Curve::ed25519;
    else if (type == kAgreementKeyType)
        curve = Curve::x25519;
    else
        throw Error(Errc::unsupported_curve, "unsupported key type " + type);

    const auto& ref = string_member(j, "id");
    auto hash = ref.find('#');
    if (hash == std::string::npos) throw Error(Errc::malformed, "key id lacks a fragment");
    if (SwarmDid::parse(std::string_view(ref).substr(0, hash)) != did)
        throw Error(Errc::integrity, "key id refers to a different DID");
    auto key_id = fixed<kKeyIdSize>(base58_decode(std::string_view(ref).substr(hash + 1)), "key id");
    auto pk = fixed<32>(base58_decode(string_member(j, "publicKeyBase58")), "public key");
    return PublicKeyEntry::from_parts(role, curve, key_id, pk);
}

DidDocument from_json_model(const Json& j) {
    if (!j.is_object()) throw Error(Errc::malformed, "DID Document is not an object");
    auto did = SwarmDid::parse(string_member(j, "id"));

    std::vector<PublicKeyEntry> vks, aks;
    for (const auto& k : array_member(j, "verificationMethod")) vks.push_back(key_from_json(k, did, KeyRole::verification));
    for (const auto& k : array_member(j, "keyAgreement")) aks.push_back(key_from_json(k, did, KeyRole::agreement));

    std::vector<ServiceEndpoint> endpoints;
    for (const auto& s : array_member(j, "service")) {
        if (!s.is_object()) throw Error(Errc::malformed, "service entry is not an object");
        std::optional<std::string> id, type;
        if (s.contains("id")) id = string_member(s, "id");
        if (s.contains("type")) type = string_member(s, "type");
        endpoints.push_back(ServiceEndpoint::create(string_member(s, "serviceEndpoint"), id, type));
    }
    return DidDocument::create(did, std::move(vks), std::move(aks), std::move(endpoints));
}

// ------------------------------------------------------- direct JSON <-> CBOR

cbor::Value json_to_cbor(const Json& j) {
    switch (j.type()) {
    case Json::value_t::null: return cbor::Value(nullptr);
    case Json::value_t::boolean: return cbor::Value(j.get<bool>());
    case Json::value_t::number_integer: return cbor::Value(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return cbor::Value(static_cast<std::int64_t>(j.get<std::uint64_t>()));
    case Json::value_t::string: return cbor::Value(j.get<std::string>());
    case Json::value_t::array: {
        cbor::Array a;
        for (const auto& item : j) a.push_back(json_to_cbor(item));
        return cbor::Value(std::move(a));
    }
    case Json::value_t::object: {
        cbor::Map m;
        for (const auto& [k, v] : j.items()) m.emplace_back(cbor::Value(k), json_to_cbor(v));
        return cbor::Value(std::move(m));
    }
    default: throw Error(Errc::invalid_argument, "JSON value has no direct CBOR mapping");
    }
}

Json cbor_to_json(const cbor::Value& v) {
    if (v.is_null()) return nullptr;
    if (const auto* b = std::get_if<bool>(&v.data)) return *b;
    if (v.is_int()) return v.as_int();
    if (v.is_text()) return v.as_text();
    if (v.is_array()) {
        Json a = Json::array();
        for (const auto& item : v.as_array()) a.push_back(cbor_to_json(item));
        return a;
    }
    if (v.is_map()) {
        Json o = Json::object();
        for (const auto& [k, val] : v.as_map()) {
            if (!k.is_text()) throw Error(Errc::malformed, "direct CBOR map key is not text");
            o[k.as_text()] = cbor_to_json(val);
        }
        return o;
    }
    throw Error(Errc::malformed, "direct CBOR document contains a byte string or tag");
}

// ------------------------------------------------------------------ CBOR-DI

cbor::Value cose_key(const PublicKeyEntry& key) {
    const int crv = key.curve() == Curve::ed25519 ? kCoseCrvEd25519 : kCoseCrvX25519;
    // The key id is re-derived from x on decode, so it is not written.
    return cbor::Map{
        {kCoseKeyKty, kCoseKtyOkp},
        {kCoseKeyCrv, crv},
        {kCoseKeyX, to_bytes(key.public_key())},
    };
}

PublicKeyEntry key_from_cose(const cbor::Value& v, KeyRole role) {
    const auto& m = v.as_map();
    const auto* kty = cbor::find(m, kCoseKeyKty);
    const auto* crv = cbor::find(m, kCoseKeyCrv);
    const auto* x = cbor::find(m, kCoseKeyX);
    if (!kty || !crv || !x) throw Error(Errc::malformed, "COSE_Key lacks kty, crv or x");
    if (kty->as_int() != kCoseKtyOkp) throw Error(Errc::unsupported_curve, "COSE_Key kty is not OKP");

    Curve curve;
    switch (crv->as_int()) {
    case kCoseCrvEd25519: curve = Curve::ed25519; break;
    case kCoseCrvX25519: curve = Curve::x25519; break;
    default: throw Error(Errc::unsupported_curve, "unsupported COSE curve " + std::to_string(crv->as_int()));
    }

    auto pk = fixed<32>(x->as_bytes(), "public key");
    KeyId key_id = derive_key_id(pk);
    if (const auto* kid = cbor::find(m, kCoseKeyKid)) key_id = fixed<kKeyIdSize>(kid->as_bytes(), "key id");
    return PublicKeyEntry::from_parts(role, curve, key_id, pk);
}

cbor::Value to_cbor_di(const DidDocument& doc) {
    cbor::Array vks, aks, urls;
    for (const auto& k : doc.verification_keys()) vks.push_back(cose_key(k));
    for (const auto& k : doc.agreement_keys()) aks.push_back(cose_key(k));
    for (const auto& e : doc.endpoints()) urls.emplace_back(e.url());
    return cbor::Array{doc.did().to_binary(), std::move(vks), std::move(aks), std::move(urls)};
}

DidDocument from_cbor_di(const cbor::Value& v) {
    const auto& top = v.as_array();
    if (top.size() != 4)
        throw Error(Errc::wrong_arity, "CBOR-DI document must be a 4-element array, got " + std::to_string(top.size()));
    auto did = SwarmDid::from_binary(top[0].as_bytes());

    std::vector<PublicKeyEntry> vks, aks;
    for (const auto& k : top[1].as_array()) vks.push_back(key_from_cose(k, KeyRole::verification));
    for (const auto& k : top[2].as_array()) aks.push_back(key_from_cose(k, KeyRole::agreement));
    std::vector<ServiceEndpoint> endpoints;
    for (const auto& u : top[3].as_array()) endpoints.push_back(ServiceEndpoint::create(u.as_text()));
    return DidDocument::create(did, std::move(vks), std::move(aks), std::move(endpoints));
}

Json parse_json(ByteView bytes) {
    try {
        return Json::parse(bytes.begin(), bytes.end());
    } catch (const Json::exception& e) {
        throw Error(Errc::malformed, std::string("invalid JSON: ") + e.what());
    }
}

} // namespace

std::string_view to_string(WireFormat format) {
    switch (format) {
    case WireFormat::json: return "json";
    case WireFormat::cbor_direct: return "cbor";
    case WireFormat::cbor_di: return "cbor-di";
    }
    return "?";
}

WireFormat parse_wire_format(std::string_view token) {
    for (auto f : kAllWireFormats)
        if (to_string(f) == token) return f;
    throw Error(Errc::bad_format, "unknown DID Document format '" + std::string(token) + "'");
}

Bytes encode(const DidDocument& doc, WireFormat format) {
    switch (format) {
    case WireFormat::json: return to_bytes(to_json_model(doc).dump());
    case WireFormat::cbor_direct: return cbor::encode(json_to_cbor(to_json_model(doc)));
    case WireFormat::cbor_di: return cbor::encode(to_cbor_di(doc));
    }
    throw Error(Errc::bad_format);
}

DidDocument decode(ByteView bytes, WireFormat format) {
    switch (format) {
    case WireFormat::json: return from_json_model(parse_json(bytes));
    case WireFormat::cbor_direct: return from_json_model(cbor_to_json(cbor::decode(bytes)));
    case WireFormat::cbor_di: return from_cbor_di(cbor::decode(bytes));
    }
    throw Error(Errc::bad_format);
}

Bytes convert(ByteView bytes, WireFormat from, WireFormat to) { return encode(decode(bytes, from), to); }

std::map<WireFormat, std::size_t> measure(const DidDocument& doc) {
    std::map<WireFormat, std::size_t> sizes;
    for (auto f : kAllWireFormats) sizes[f] = encode(doc, f).size();
    return sizes;
}

} // namespace swid

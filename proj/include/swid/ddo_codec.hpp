#pragma once

#include <map>
#include <string_view>

#include "swid/bytes.hpp"
#include "swid/identity.hpp"

namespace swid {

/// JSON, the mechanical JSON-to-CBOR mapping, and the compact CBOR-DI array.
enum class WireFormat { json, cbor_direct, cbor_di };

inline constexpr WireFormat kAllWireFormats[] = {WireFormat::json, WireFormat::cbor_direct, WireFormat::cbor_di};

/// "json", "cbor", "cbor-di".
std::string_view to_string(WireFormat format);
/// Throws Error(bad_format) for any other token.
WireFormat parse_wire_format(std::string_view token);

// JSON member vocabulary.
inline constexpr std::string_view kVerificationKeyType = "Ed25519VerificationKey2019";
inline constexpr std::string_view kAgreementKeyType = "X25519KeyAgreementKey2019";

// COSE_Key labels and values used by CBOR-DI.
inline constexpr int kCoseKeyKty = 1;
inline constexpr int kCoseKeyKid = 2;
inline constexpr int kCoseKeyCrv = -1;
inline constexpr int kCoseKeyX = -2;
inline constexpr int kCoseKtyOkp = 1;
inline constexpr int kCoseCrvX25519 = 4;
inline constexpr int kCoseCrvEd25519 = 6;

/// Deterministic for a given (doc, format). CBOR-DI keeps only the endpoint URLs.
Bytes encode(const DidDocument& doc, WireFormat format);

/// Inverse of encode. Errors: malformed (container or member shape),
/// wrong_arity (CBOR-DI top-level array), unsupported_curve, invalid_key
/// (key or key-id length), integrity (key id not derived from its key or
/// bound to a different DID), plus identifier and endpoint errors.
DidDocument decode(ByteView bytes, WireFormat format);

/// encode(decode(bytes, from), to). Endpoint id/type are lost when targeting CBOR-DI.
Bytes convert(ByteView bytes, WireFormat from, WireFormat to);

std::map<WireFormat, std::size_t> measure(const DidDocument& doc);

} // namespace swid

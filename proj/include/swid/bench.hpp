#pragma once

// Size benchmark: identifier and document sizes per serialization, and the
// byte overhead of the COSE envelopes against the JOSE baseline.

#include <ostream>
#include <string>
#include <vector>

#include "swid/crypto.hpp"
#include "swid/identity.hpp"

namespace swid::bench {

/// Largest LoRaWAN packet at data rate 6.
inline constexpr std::size_t kLoraMaxPacket = 242;

inline constexpr std::string_view kMeasured = "measured";
inline constexpr std::string_view kPublished = "published";

struct SizeRow {
    std::string label;
    std::string serialization;
    std::string envelope; // "none", "diotcomm-sign", "didcomm-sign", ...
    std::size_t total_bytes = 0;
    std::size_t payload_bytes = 0;
    std::size_t overhead_bytes = 0;
    bool fits_lora = false;
    std::string source;
};

/// Fills overhead and fits_lora from total and payload.
SizeRow make_row(std::string label, std::string serialization, std::string envelope, std::size_t total,
                 std::size_t payload, std::string_view source = kMeasured);

struct SizeReport {
    std::vector<SizeRow> rows;

    const SizeRow* find(std::string_view label, std::string_view serialization, std::string_view envelope) const;
};

/// Published identifier/document sizes of other DID methods (not measured here).
struct ReferenceMethod {
    std::string_view prefix;
    std::size_t did_size;
    std::size_t ddo_size;
};
inline constexpr ReferenceMethod kReferenceMethods[] = {
    {"did:sov", 30, 499}, {"did:ockam", 39, 779}, {"did:io", 49, 1112}, {"did:v1", 54, 1182}, {"did:tangle", 92, 853},
};

/// Frozen reference agent: DID did:sw:TTbs19FJKYf6jXzS1dbnqe, the RFC 8032
/// test 1 Ed25519 seed, the RFC 7748 Alice X25519 key and one 25-character
/// endpoint URL with a short id and type.
AgentIdentity reference_identity();
inline DidDocument reference_document() { return reference_identity().ddo(); }

/// The 21-byte CBOR application message {"sensor": "t01", "value": 2150}.
Bytes reference_message();

/// Table rows for did:sw and the reference methods, the three raw document
/// encodings, the reference document signed with both envelope families,
/// and the reference message signed-then-encrypted between two fresh agents.
SizeReport run(Rng& rng);

inline constexpr std::string_view kCsvHeader =
    "label,serialization,envelope,total_bytes,payload_bytes,overhead_bytes,fits_lora,source";

void write_csv(const SizeReport& report, std::ostream& out);
void write_table(const SizeReport& report, std::ostream& out);

} // namespace swid::bench

#include "swid/error.hpp"

namespace swid {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::entropy_unavailable: return "entropy-unavailable";
    case Errc::crypto_failure: return "crypto-failure";
    case Errc::wrong_method: return "wrong-method";
    case Errc::invalid_base58: return "invalid-base58";
    case Errc::bad_nsi_length: return "bad-nsi-length";
    case Errc::invalid_endpoint: return "invalid-endpoint";
    case Errc::invalid_key: return "invalid-key";
    case Errc::duplicate_key_id: return "duplicate-key-id";
    case Errc::malformed: return "malformed";
    case Errc::wrong_arity: return "wrong-arity";
    case Errc::unsupported_curve: return "unsupported-curve";
    case Errc::integrity: return "integrity";
    case Errc::malformed_envelope: return "malformed-envelope";
    case Errc::unknown_sender: return "unknown-sender";
    case Errc::bad_signature: return "bad-signature";
    case Errc::aead_failure: return "aead-failure";
    case Errc::sender_mismatch: return "sender-mismatch";
    case Errc::missing_agreement_key: return "missing-agreement-key";
    case Errc::payload_too_large: return "payload-too-large";
    case Errc::malformed_payload: return "malformed-payload";
    case Errc::kid_mismatch: return "kid-mismatch";
    case Errc::duplicate_did: return "duplicate-did";
    case Errc::not_found: return "not-found";
    case Errc::bad_format: return "bad-format";
    case Errc::network: return "network";
    case Errc::store_exists: return "store-exists";
    case Errc::store_missing: return "store-missing";
    }
    return "unknown";
}

} // namespace swid

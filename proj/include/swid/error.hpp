#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swid {

enum class Errc {
    invalid_argument,
    entropy_unavailable,
    crypto_failure,
    // identifiers
    wrong_method,
    invalid_base58,
    bad_nsi_length,
    invalid_endpoint,
    invalid_key,
    duplicate_key_id,
    // document codecs
    malformed,
    wrong_arity,
    unsupported_curve,
    integrity,
    // envelopes
    malformed_envelope,
    unknown_sender,
    bad_signature,
    aead_failure,
    sender_mismatch,
    missing_agreement_key,
    payload_too_large,
    // registry
    malformed_payload,
    kid_mismatch,
    duplicate_did,
    not_found,
    bad_format,
    network,
    // agent store
    store_exists,
    store_missing,
};

/// Stable kebab-case token, used in HTTP error bodies and CLI messages.
std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    explicit Error(Errc code) : Error(code, std::string(to_string(code))) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace swid

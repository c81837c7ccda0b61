#pragma once

#include <string>
#include <string_view>

#include "swid/bytes.hpp"

namespace swid {

/// Base58 with the Bitcoin alphabet. Leading zero bytes map to leading '1's.
std::string base58_encode(ByteView bytes);
Bytes base58_decode(std::string_view text);

/// RFC 4648 base64url without padding, as used by JOSE.
std::string base64url_encode(ByteView bytes);
Bytes base64url_decode(std::string_view text);

} // namespace swid

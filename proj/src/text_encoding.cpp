#include "swid/text_encoding.hpp"

#include <algorithm>
#include <array>

#include "swid/error.hpp"

namespace swid {

namespace {

constexpr std::string_view kBase58Alphabet =
    "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

constexpr std::string_view kBase64UrlAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

constexpr std::array<int, 256> make_reverse(std::string_view alphabet) {
    std::array<int, 256> table{};
    for (auto& v : table) v = -1;
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        table[static_cast<unsigned char>(alphabet[i])] = static_cast<int>(i);
    return table;
}

constexpr auto kBase58Reverse = make_reverse(kBase58Alphabet);
constexpr auto kBase64UrlReverse = make_reverse(kBase64UrlAlphabet);

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(Errc::invalid_argument, "hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::invalid_argument, "invalid hex digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string base58_encode(ByteView bytes) {
    std::size_t zeros = 0;
    while (zeros < bytes.size() && bytes[zeros] == 0) ++zeros;

    // Base-58 digits, least significant first. log(256)/log(58) < 1.38.
    std::vector<std::uint8_t> digits;
    digits.reserve((bytes.size() - zeros) * 138 / 100 + 1);
    for (std::size_t i = zeros; i < bytes.size(); ++i) {
        unsigned carry = bytes[i];
        for (auto& d : digits) {
            carry += static_cast<unsigned>(d) << 8;
            d = static_cast<std::uint8_t>(carry % 58);
            carry /= 58;
        }
        while (carry > 0) {
            digits.push_back(static_cast<std::uint8_t>(carry % 58));
            carry /= 58;
        }
    }

    std::string out(zeros, '1');
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) out.push_back(kBase58Alphabet[*it]);
    return out;
}

Bytes base58_decode(std::string_view text) {
    std::size_t ones = 0;
    while (ones < text.size() && text[ones] == '1') ++ones;

    // Base-256 bytes, least significant first.
    std::vector<std::uint8_t> bytes;
    for (std::size_t i = ones; i < text.size(); ++i) {
        int value = kBase58Reverse[static_cast<unsigned char>(text[i])];
        if (value < 0)
            throw Error(Errc::invalid_base58, "invalid base58 character '" + std::string(1, text[i]) + "'");
        unsigned carry = static_cast<unsigned>(value);
        for (auto& b : bytes) {
            carry += static_cast<unsigned>(b) * 58;
            b = static_cast<std::uint8_t>(carry & 0xff);
            carry >>= 8;
        }
        while (carry > 0) {
            bytes.push_back(static_cast<std::uint8_t>(carry & 0xff));
            carry >>= 8;
        }
    }

    Bytes out(ones, 0);
    out.insert(out.end(), bytes.rbegin(), bytes.rend());
    return out;
}

std::string base64url_encode(ByteView bytes) {
    std::string out;
    out.reserve((bytes.size() * 4 + 2) / 3);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kBase64UrlAlphabet[(n >> 18) & 63]);
        out.push_back(kBase64UrlAlphabet[(n >> 12) & 63]);
        out.push_back(kBase64UrlAlphabet[(n >> 6) & 63]);
        out.push_back(kBase64UrlAlphabet[n & 63]);
    }
    std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        std::uint32_t n = bytes[i] << 16;
        out.push_back(kBase64UrlAlphabet[(n >> 18) & 63]);
        out.push_back(kBase64UrlAlphabet[(n >> 12) & 63]);
    } else if (rest == 2) {
        std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kBase64UrlAlphabet[(n >> 18) & 63]);
        out.push_back(kBase64UrlAlphabet[(n >> 12) & 63]);
        out.push_back(kBase64UrlAlphabet[(n >> 6) & 63]);
    }
    return out;
}

Bytes base64url_decode(std::string_view text) {
    if (text.size() % 4 == 1) throw Error(Errc::malformed, "invalid base64url length");
    Bytes out;
    out.reserve(text.size() * 3 / 4);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        int value = kBase64UrlReverse[static_cast<unsigned char>(c)];
        if (value < 0) throw Error(Errc::malformed, "invalid base64url character");
        acc = (acc << 6) | static_cast<std::uint32_t>(value);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
        }
    }
    // Non-canonical trailing bits would let two strings decode to the same bytes.
    if (bits > 0 && (acc & ((1u << bits) - 1)) != 0) throw Error(Errc::malformed, "non-canonical base64url");
    return out;
}

} // namespace swid

#pragma once

// Thin wrappers over OpenSSL for the primitives the envelopes need:
// SHA-256, Ed25519, X25519, HKDF-SHA-256 and AES-CCM-16-64-128.

#include <array>
#include <cstdint>
#include <random>
#include <span>

#include "swid/bytes.hpp"

namespace swid {

using Key32 = std::array<std::uint8_t, 32>;
using Digest = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;
using ContentKey = std::array<std::uint8_t, 16>;
using Nonce = std::array<std::uint8_t, 13>;

inline constexpr std::size_t kCcmTagSize = 8;
inline constexpr std::size_t kCcmMaxPlaintext = 0xffff; // 2-byte length field with a 13-byte nonce

/// Source of randomness for identifiers, keys and nonces.
class Rng {
public:
    virtual ~Rng() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }

    template <std::size_t N>
    std::array<std::uint8_t, N> array() {
        std::array<std::uint8_t, N> out{};
        fill(out);
        return out;
    }
};

/// OpenSSL CSPRNG. Throws Error(entropy_unavailable) if the pool cannot be seeded.
class SystemRng final : public Rng {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic generator for tests and reproducible benchmarks. Not a CSPRNG.
class SeededRng final : public Rng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    void fill(std::span<std::uint8_t> out) override;

private:
    std::mt19937_64 engine_;
};

Digest sha256(ByteView data);

Key32 ed25519_public_key(const Key32& seed);
Signature ed25519_sign(const Key32& seed, ByteView message);
bool ed25519_verify(const Key32& public_key, ByteView message, ByteView signature);

/// RFC 7748 scalar clamping.
Key32 x25519_clamp(Key32 scalar);
Key32 x25519_public_key(const Key32& private_key);
/// Throws Error(crypto_failure) when the shared secret is all-zero (small-order peer key).
Key32 x25519(const Key32& private_key, const Key32& peer_public_key);

Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length);

/// Returns ciphertext || 8-byte tag.
Bytes aes_ccm_16_64_128_seal(const ContentKey& key, const Nonce& nonce, ByteView aad, ByteView plaintext);
/// Throws Error(aead_failure) when authentication fails.
Bytes aes_ccm_16_64_128_open(const ContentKey& key, const Nonce& nonce, ByteView aad, ByteView sealed);

} // namespace swid

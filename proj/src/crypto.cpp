#include "swid/crypto.hpp"

#include <memory>

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>

#include "swid/error.hpp"

namespace swid {

namespace {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct PkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
struct KdfDeleter {
    void operator()(EVP_KDF* p) const { EVP_KDF_free(p); }
};
struct KdfCtxDeleter {
    void operator()(EVP_KDF_CTX* p) const { EVP_KDF_CTX_free(p); }
};

using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

[[noreturn]] void fail(const char* what) { throw Error(Errc::crypto_failure, what); }

void check(int rc, const char* what) {
    if (rc != 1) fail(what);
}

Pkey private_key(int type, const Key32& raw) {
    Pkey key(EVP_PKEY_new_raw_private_key(type, nullptr, raw.data(), raw.size()));
    if (!key) fail("cannot load private key");
    return key;
}

Pkey public_key(int type, const Key32& raw) {
    Pkey key(EVP_PKEY_new_raw_public_key(type, nullptr, raw.data(), raw.size()));
    if (!key) fail("cannot load public key");
    return key;
}

Key32 raw_public(const Pkey& key) {
    Key32 out{};
    std::size_t len = out.size();
    check(EVP_PKEY_get_raw_public_key(key.get(), out.data(), &len), "cannot export public key");
    return out;
}

} // namespace

void SystemRng::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        throw Error(Errc::entropy_unavailable, "system random generator unavailable");
}

void SeededRng::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t word = engine_();
        for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
            out[i] = static_cast<std::uint8_t>(word);
            word >>= 8;
        }
    }
}

Digest sha256(ByteView data) {
    Digest out{};
    unsigned int len = 0;
    check(EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr), "sha256 failed");
    return out;
}

Key32 ed25519_public_key(const Key32& seed) { return raw_public(private_key(EVP_PKEY_ED25519, seed)); }

Signature ed25519_sign(const Key32& seed, ByteView message) {
    auto key = private_key(EVP_PKEY_ED25519, seed);
    MdCtx ctx(EVP_MD_CTX_new());
    if (!ctx) fail("out of memory");
    check(EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()), "sign init failed");
    Signature sig{};
    std::size_t len = sig.size();
    check(EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()), "sign failed");
    return sig;
}

bool ed25519_verify(const Key32& public_key_bytes, ByteView message, ByteView signature) {
    if (signature.size() != 64) return false;
    Pkey key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key_bytes.data(),
                                         public_key_bytes.size()));
    if (!key) return false;
    MdCtx ctx(EVP_MD_CTX_new());
    if (!ctx) fail("out of memory");
    if (EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

Key32 x25519_clamp(Key32 scalar) {
    scalar[0] &= 248;
    scalar[31] &= 127;
    scalar[31] |= 64;
    return scalar;
}

Key32 x25519_public_key(const Key32& private_key_bytes) {
    return raw_public(private_key(EVP_PKEY_X25519, private_key_bytes));
}

Key32 x25519(const Key32& private_key_bytes, const Key32& peer_public_key) {
    auto mine = private_key(EVP_PKEY_X25519, private_key_bytes);
    auto peer = public_key(EVP_PKEY_X25519, peer_public_key);
    PkeyCtx ctx(EVP_PKEY_CTX_new(mine.get(), nullptr));
    if (!ctx) fail("out of memory");
    check(EVP_PKEY_derive_init(ctx.get()), "derive init failed");
    check(EVP_PKEY_derive_set_peer(ctx.get(), peer.get()), "invalid peer key");
    Key32 secret{};
    std::size_t len = secret.size();
    // OpenSSL rejects an all-zero result here.
    check(EVP_PKEY_derive(ctx.get(), secret.data(), &len), "x25519 derive failed");
    return secret;
}

Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length) {
    std::unique_ptr<EVP_KDF, KdfDeleter> kdf(EVP_KDF_fetch(nullptr, "HKDF", nullptr));
    if (!kdf) fail("HKDF unavailable");
    std::unique_ptr<EVP_KDF_CTX, KdfCtxDeleter> ctx(EVP_KDF_CTX_new(kdf.get()));
    if (!ctx) fail("out of memory");

    char digest[] = "SHA256";
    // OpenSSL wants non-const pointers; the buffers are only read.
    auto* key = const_cast<std::uint8_t*>(ikm.data());
    auto* salt_ptr = const_cast<std::uint8_t*>(salt.data());
    auto* info_ptr = const_cast<std::uint8_t*>(info.data());
    OSSL_PARAM params[5];
    int n = 0;
    params[n++] = OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest, 0);
    params[n++] = OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY, key, ikm.size());
    if (!salt.empty()) params[n++] = OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_SALT, salt_ptr, salt.size());
    if (!info.empty()) params[n++] = OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_INFO, info_ptr, info.size());
    params[n] = OSSL_PARAM_construct_end();

    Bytes out(length);
    check(EVP_KDF_derive(ctx.get(), out.data(), out.size(), params), "HKDF derive failed");
    return out;
}

Bytes aes_ccm_16_64_128_seal(const ContentKey& key, const Nonce& nonce, ByteView aad, ByteView plaintext) {
    if (plaintext.size() > kCcmMaxPlaintext) throw Error(Errc::payload_too_large, "plaintext exceeds AES-CCM limit");
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) fail("out of memory");
    int len = 0;
    check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ccm(), nullptr, nullptr, nullptr), "ccm init failed");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN, static_cast<int>(nonce.size()), nullptr),
          "ccm ivlen failed");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, static_cast<int>(kCcmTagSize), nullptr),
          "ccm taglen failed");
    check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()), "ccm key failed");
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, nullptr, static_cast<int>(plaintext.size())),
          "ccm length failed");
    if (!aad.empty())
        check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "ccm aad failed");

    Bytes out(plaintext.size() + kCcmTagSize);
    static const std::uint8_t kEmpty = 0;
    const std::uint8_t* in = plaintext.empty() ? &kEmpty : plaintext.data();
    check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, in, static_cast<int>(plaintext.size())), "ccm encrypt failed");
    check(EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &len), "ccm final failed");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, static_cast<int>(kCcmTagSize),
                              out.data() + plaintext.size()),
          "ccm tag failed");
    return out;
}

Bytes aes_ccm_16_64_128_open(const ContentKey& key, const Nonce& nonce, ByteView aad, ByteView sealed) {
    if (sealed.size() < kCcmTagSize) throw Error(Errc::aead_failure, "ciphertext shorter than tag");
    const std::size_t body = sealed.size() - kCcmTagSize;
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) fail("out of memory");
    int len = 0;
    Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(body), sealed.end());
    check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_ccm(), nullptr, nullptr, nullptr), "ccm init failed");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN, static_cast<int>(nonce.size()), nullptr),
          "ccm ivlen failed");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, static_cast<int>(tag.size()), tag.data()),
          "ccm tag failed");
    check(EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()), "ccm key failed");
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, nullptr, static_cast<int>(body)), "ccm length failed");
    if (!aad.empty())
        check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "ccm aad failed");

    Bytes out(body + 1); // never hand OpenSSL a null output pointer
    static const std::uint8_t kEmpty = 0;
    const std::uint8_t* in = body == 0 ? &kEmpty : sealed.data();
    if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, in, static_cast<int>(body)) != 1)
        throw Error(Errc::aead_failure, "AES-CCM authentication failed");
    out.resize(body);
    return out;
}

} // namespace swid

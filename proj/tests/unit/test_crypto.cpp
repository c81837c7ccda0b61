#include <doctest.h>

#include <set>

#include "swid/bytes.hpp"
#include "swid/crypto.hpp"
#include "swid/error.hpp"

using namespace swid;

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> arr(std::string_view h) {
    auto b = from_hex(h);
    REQUIRE(b.size() == N);
    std::array<std::uint8_t, N> out{};
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

struct Ed25519Vector {
    std::string_view seed, pub, msg, sig;
};

// RFC 8032 section 7.1, tests 1-3.
constexpr Ed25519Vector kEd25519[] = {
    {"9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
     "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a", "",
     "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b"},
    {"4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb",
     "3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c", "72",
     "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da085ac1e43e15996e458f3613d0f11d8c387b2eaeb4302aeeb00d291612bb0c00"},
    {"c5aa8df43f9f837bedb7442f31dcb7b166d38535076f094b85ce3a2e0b4458f7",
     "fc51cd8e6218a1a38da47ed00230f0580816ed13ba3303ac5deb911548908025", "af82",
     "6291d657deec24024827e69c3abe01a30ce548a284743a445e3680d7db5ac3ac18ff9b538d16f290ae67f760984dc6594a7c15e9716ed28dc027beceea1ec40a"},
};

} // namespace

TEST_CASE("sha256") {
    CHECK(to_hex(sha256(Bytes{})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(sha256(to_bytes("abc"))) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("ed25519 published vectors") {
    for (const auto& v : kEd25519) {
        const auto seed = arr<32>(v.seed);
        const auto msg = from_hex(v.msg);
        CHECK(to_hex(ed25519_public_key(seed)) == v.pub);
        const auto sig = ed25519_sign(seed, msg);
        CHECK(to_hex(sig) == v.sig);
        CHECK(ed25519_verify(arr<32>(v.pub), msg, sig));
        auto bad = sig;
        bad[10] ^= 1;
        CHECK_FALSE(ed25519_verify(arr<32>(v.pub), msg, bad));
        CHECK_FALSE(ed25519_verify(arr<32>(v.pub), to_bytes("other"), sig));
        CHECK_FALSE(ed25519_verify(arr<32>(v.pub), msg, ByteView(sig).first(63)));
    }
}

TEST_CASE("x25519 published vectors") {
    // RFC 7748 section 5.2.
    CHECK(to_hex(x25519(arr<32>("a546e36bf0527c9d3b16154b82465edd62144c0ac1fc5a18506a2244ba449ac4"),
                        arr<32>("e6db6867583030db3594c1a424b15f7c726624ec26b3353b10a903a6d0ab1c4c"))) ==
          "c3da55379de9c6908e94ea4df28d084f32eccf03491c71f754b4075577a28552");

    // RFC 7748 section 6.1.
    const auto alice = arr<32>("77076d0a7318a57d3c16c17251b26645df4c2f87ebc0992ab177fba51db92c2a");
    const auto bob = arr<32>("5dab087e624a8a4b79e17f8b83800ee66f3bb1292618b6fd1c2f8b27ff88e0eb");
    const auto alice_pub = x25519_public_key(alice);
    const auto bob_pub = x25519_public_key(bob);
    CHECK(to_hex(alice_pub) == "8520f0098930a754748b7ddcb43ef75a0dbf3a0d26381af4eba4a98eaa9b4e6a");
    CHECK(to_hex(bob_pub) == "de9edb7d7b7dc1b4d35b61c2ece435373f8343c85b78674dadfc7e146f882b4f");
    const auto shared = "4a5d9d5ba4ce2de1728e3bf480350f25e07e21c947d19e3376f09b3c1e161742";
    CHECK(to_hex(x25519(alice, bob_pub)) == shared);
    CHECK(to_hex(x25519(bob, alice_pub)) == shared);
    CHECK(x25519_public_key(x25519_clamp(alice)) == alice_pub);
}

TEST_CASE("x25519 rejects small-order peer") {
    SeededRng rng(4);
    const auto sk = rng.array<32>();
    Key32 zero{};
    CHECK_THROWS_AS(x25519(sk, zero), Error);
}

TEST_CASE("x25519 clamp") {
    Key32 k;
    k.fill(0xff);
    const auto c = x25519_clamp(k);
    CHECK(c[0] == 0xf8);
    CHECK(c[31] == 0x7f);
}

TEST_CASE("hkdf-sha256 published vectors") {
    // RFC 5869 appendix A, cases 1 and 3.
    const Bytes ikm(22, 0x0b);
    CHECK(to_hex(hkdf_sha256(ikm, from_hex("000102030405060708090a0b0c"), from_hex("f0f1f2f3f4f5f6f7f8f9"), 42)) ==
          "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865");
    CHECK(to_hex(hkdf_sha256(ikm, {}, {}, 42)) ==
          "8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d9d201395faa4b61a96c8");
}

TEST_CASE("aes-ccm published vector") {
    // RFC 3610 packet vector #1 (M = 8, L = 2).
    const auto key = arr<16>("c0c1c2c3c4c5c6c7c8c9cacbcccdcecf");
    const auto nonce = arr<13>("00000003020100a0a1a2a3a4a5");
    const auto aad = from_hex("0001020304050607");
    const auto pt = from_hex("08090a0b0c0d0e0f101112131415161718191a1b1c1d1e");
    const auto sealed = aes_ccm_16_64_128_seal(key, nonce, aad, pt);
    CHECK(to_hex(sealed) == "588c979a61c663d2f066d0c2c0f989806d5f6b61dac38417e8d12cfdf926e0");
    CHECK(aes_ccm_16_64_128_open(key, nonce, aad, sealed) == pt);
}

TEST_CASE("aes-ccm tamper and sizes") {
    SeededRng rng(5);
    const auto key = rng.array<16>();
    const auto nonce = rng.array<13>();
    for (std::size_t len : {0u, 1u, 15u, 16u, 17u, 300u}) {
        const auto pt = rng.bytes(len);
        const auto aad = rng.bytes(7);
        auto sealed = aes_ccm_16_64_128_seal(key, nonce, aad, pt);
        REQUIRE(sealed.size() == len + kCcmTagSize);
        CHECK(aes_ccm_16_64_128_open(key, nonce, aad, sealed) == pt);
        for (std::size_t i = 0; i < sealed.size(); ++i) {
            auto bad = sealed;
            bad[i] ^= 0x80;
            try {
                aes_ccm_16_64_128_open(key, nonce, aad, bad);
                FAIL("tampered ciphertext accepted");
            } catch (const Error& e) {
                CHECK(e.code() == Errc::aead_failure);
            }
        }
        auto other_aad = aad;
        other_aad[0] ^= 1;
        CHECK_THROWS_AS(aes_ccm_16_64_128_open(key, nonce, other_aad, sealed), Error);
        CHECK_THROWS_AS(aes_ccm_16_64_128_open(key, nonce, aad, ByteView(sealed).first(kCcmTagSize - 1)), Error);
    }
}

TEST_CASE("rngs") {
    SystemRng sys;
    std::set<Bytes> seen;
    for (int i = 0; i < 100; ++i) seen.insert(sys.bytes(16));
    CHECK(seen.size() == 100);

    SeededRng a(7), b(7), c(8);
    CHECK(a.bytes(32) == b.bytes(32));
    CHECK(a.bytes(32) != c.bytes(32));
}

#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "swid/bytes.hpp"
#include "swid/cbor.hpp"
#include "swid/error.hpp"
#include "swid/text_encoding.hpp"
#include "test_support.hpp"

using namespace swid;
using boost::multiprecision::cpp_int;

namespace {

// Reference Base58: interpret the bytes as one big-endian integer.
std::string base58_oracle(ByteView bytes) {
    static constexpr char kAlphabet[] = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
    cpp_int n = 0;
    for (auto b : bytes) n = n * 256 + b;
    std::string out;
    while (n > 0) {
        out.insert(out.begin(), kAlphabet[static_cast<int>(n % 58)]);
        n /= 58;
    }
    for (auto b : bytes) {
        if (b != 0) break;
        out.insert(out.begin(), '1');
    }
    return out;
}

Errc error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::invalid_argument;
}

Bytes hex(std::string_view h) { return from_hex(h); }

} // namespace

TEST_CASE("base58 known values") {
    CHECK(base58_encode(Bytes{}) == "");
    CHECK(base58_encode(Bytes(16, 0)) == "1111111111111111");
    CHECK(base58_encode(to_bytes("hello world")) == "StV1DL6CwTryKyV");
    CHECK(base58_encode(hex("0000287fb4cd")) == "11233QC4");
    CHECK(base58_decode("StV1DL6CwTryKyV") == to_bytes("hello world"));
    CHECK(base58_decode("11233QC4") == hex("0000287fb4cd"));
}

TEST_CASE("base58 matches big-integer oracle") {
    SeededRng rng(1);
    for (int i = 0; i < 2000; ++i) {
        auto b = rng.bytes(testing::uniform(rng, 0, 40));
        if (i % 5 == 0 && !b.empty()) b[0] = 0;
        if (i % 10 == 0 && b.size() > 1) b[1] = 0;
        const auto text = base58_encode(b);
        REQUIRE(text == base58_oracle(b));
        REQUIRE(base58_decode(text) == b);
    }
}

TEST_CASE("base58 rejects characters outside the alphabet") {
    for (std::string_view bad : {"0", "O", "I", "l", "abc+", " 2", "é"})
        CHECK(error_of([&] { base58_decode(bad); }) == Errc::invalid_base58);
}

TEST_CASE("base64url") {
    CHECK(base64url_encode(Bytes{}) == "");
    CHECK(base64url_encode(to_bytes("f")) == "Zg");
    CHECK(base64url_encode(to_bytes("fo")) == "Zm8");
    CHECK(base64url_encode(to_bytes("foo")) == "Zm9v");
    CHECK(base64url_encode(to_bytes("foobar")) == "Zm9vYmFy");
    CHECK(base64url_encode(hex("fbff")) == "-_8");
    CHECK(base64url_decode("-_8") == hex("fbff"));

    SeededRng rng(2);
    for (int i = 0; i < 500; ++i) {
        auto b = rng.bytes(testing::uniform(rng, 0, 100));
        auto t = base64url_encode(b);
        REQUIRE(t.size() == (b.size() * 4 + 2) / 3);
        REQUIRE(base64url_decode(t) == b);
    }

    CHECK(error_of([] { base64url_decode("Z"); }) == Errc::malformed);
    CHECK(error_of([] { base64url_decode("Zh"); }) == Errc::malformed); // non-zero trailing bits
    CHECK(error_of([] { base64url_decode("Zg=="); }) == Errc::malformed);
    CHECK(error_of([] { base64url_decode("Z+8"); }) == Errc::malformed);
}

TEST_CASE("hex") {
    CHECK(to_hex(hex("00ff10AB")) == "00ff10ab");
    CHECK(error_of([] { from_hex("abc"); }) == Errc::invalid_argument);
    CHECK(error_of([] { from_hex("zz"); }) == Errc::invalid_argument);
}

TEST_CASE("cbor encoding vectors") {
    using cbor::Value;
    const std::pair<Value, std::string_view> cases[] = {
        {0, "00"},
        {23, "17"},
        {24, "1818"},
        {100, "1864"},
        {1000, "1903e8"},
        {std::int64_t{1000000}, "1a000f4240"},
        {std::int64_t{1000000000000}, "1b000000e8d4a51000"},
        {-1, "20"},
        {-10, "29"},
        {-100, "3863"},
        {-1000, "3903e7"},
        {false, "f4"},
        {true, "f5"},
        {nullptr, "f6"},
        {Bytes{}, "40"},
        {hex("01020304"), "4401020304"},
        {"", "60"},
        {"a", "6161"},
        {"IETF", "6449455446"},
        {cbor::Array{}, "80"},
        {cbor::Array{1, 2, 3}, "83010203"},
        {cbor::Map{}, "a0"},
        {cbor::Map{{1, 2}, {3, 4}}, "a201020304"},
        {cbor::tag(1, std::int64_t{1363896240}), "c11a514b67b0"},
    };
    for (const auto& [v, h] : cases) {
        CAPTURE(h);
        CHECK(to_hex(cbor::encode(v)) == h);
        CHECK(cbor::decode(hex(h)) == v);
    }
}

TEST_CASE("cbor map keys sorted by encoded bytes") {
    using cbor::Map;
    // Order by encoded key: 0x0a < 0x20 (-1) < 0x61 "a" < 0x62 "aa".
    const Map m{{"aa", 1}, {-1, 2}, {"a", 3}, {10, 4}};
    CHECK(to_hex(cbor::encode(m)) == "a40a0420026161036261610" "1");
    CHECK(cbor::encode(m) == cbor::encode(Map{{10, 4}, {"a", 3}, {-1, 2}, {"aa", 1}}));
}

TEST_CASE("cbor rejects non-deterministic or broken input") {
    const std::string_view bad[] = {
        "",           // empty
        "18",         // truncated head
        "4401",       // truncated bytes
        "0000",       // trailing data
        "9f01ff",     // indefinite array
        "5f4101ff",   // indefinite bytes
        "a201020103", // duplicate key
        "f93c00",     // half float
        "fb3ff0000000000000",
        "1bffffffffffffffff", // beyond int64
        "f7",                 // undefined
        "1c",                 // reserved additional info
    };
    for (auto h : bad) {
        CAPTURE(h);
        CHECK(error_of([&] { cbor::decode(hex(h)); }) == Errc::malformed);
    }
    std::string deep(65 * 2, '8');
    for (std::size_t i = 1; i < deep.size(); i += 2) deep[i] = '1';
    deep += "00";
    CHECK(error_of([&] { cbor::decode(hex(deep)); }) == Errc::malformed);
}

TEST_CASE("cbor random round trip") {
    SeededRng rng(3);
    std::function<cbor::Value(int)> gen = [&](int depth) -> cbor::Value {
        switch (testing::uniform(rng, 0, depth > 3 ? 4 : 7)) {
        case 0: return static_cast<std::int64_t>(testing::uniform(rng, 0, UINT64_MAX) >> testing::uniform(rng, 1, 63));
        case 1: return -static_cast<std::int64_t>(testing::uniform(rng, 0, 1u << 20));
        case 2: return rng.bytes(testing::uniform(rng, 0, 30));
        case 3: return testing::random_token(rng, 0, 30);
        case 4: return testing::uniform(rng, 0, 1) == 1;
        case 5: {
            cbor::Array a;
            for (auto n = testing::uniform(rng, 0, 4); n > 0; --n) a.push_back(gen(depth + 1));
            return a;
        }
        case 6: {
            cbor::Map m;
            for (auto n = testing::uniform(rng, 0, 4); n > 0; --n) {
                cbor::Value k = static_cast<std::int64_t>(n) * 7;
                m.emplace_back(k, gen(depth + 1));
            }
            return m;
        }
        default: return cbor::tag(testing::uniform(rng, 0, 1000), gen(depth + 1));
        }
    };
    for (int i = 0; i < 1000; ++i) {
        const auto v = gen(0);
        const auto e = cbor::encode(v);
        const auto d = cbor::decode(e);
        REQUIRE(cbor::encode(d) == e);
    }
}

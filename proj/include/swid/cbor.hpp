#pragma once

// Minimal CBOR data model with deterministic encoding: definite lengths,
// shortest-form heads and map entries ordered by their encoded key bytes.
// Floating point and indefinite-length items are not supported.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "swid/bytes.hpp"

namespace swid::cbor {

struct Value;

using Array = std::vector<Value>;
using Map = std::vector<std::pair<Value, Value>>;

struct Tagged {
    std::uint64_t tag = 0;
    std::shared_ptr<const Value> item;

    bool operator==(const Tagged& other) const;
};

struct Value {
    using Storage = std::variant<std::nullptr_t, bool, std::int64_t, Bytes, std::string, Array, Map, Tagged>;
    Storage data;

    Value() : data(nullptr) {}
    Value(std::nullptr_t) : data(nullptr) {}
    Value(bool b) : data(b) {}
    Value(int v) : data(std::int64_t{v}) {}
    Value(std::int64_t v) : data(v) {}
    Value(Bytes b) : data(std::move(b)) {}
    Value(std::string s) : data(std::move(s)) {}
    Value(const char* s) : data(std::string(s)) {}
    Value(Array a) : data(std::move(a)) {}
    Value(Map m) : data(std::move(m)) {}
    Value(Tagged t) : data(std::move(t)) {}

    bool operator==(const Value& other) const = default;

    bool is_null() const { return std::holds_alternative<std::nullptr_t>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_bytes() const { return std::holds_alternative<Bytes>(data); }
    bool is_text() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_map() const { return std::holds_alternative<Map>(data); }
    bool is_tagged() const { return std::holds_alternative<Tagged>(data); }

    // Accessors throw Error(malformed) on a type mismatch.
    std::int64_t as_int() const;
    const Bytes& as_bytes() const;
    const std::string& as_text() const;
    const Array& as_array() const;
    const Map& as_map() const;
    const Tagged& as_tagged() const;
};

Value tag(std::uint64_t tag, Value item);

/// Looks up a map entry by key; nullptr when absent.
const Value* find(const Map& map, const Value& key);

Bytes encode(const Value& value);

/// Decodes exactly one item spanning all of `bytes`. Throws Error(malformed)
/// on truncation, trailing data, indefinite lengths, duplicate map keys,
/// unsupported simple values or nesting deeper than 64.
Value decode(ByteView bytes);

} // namespace swid::cbor

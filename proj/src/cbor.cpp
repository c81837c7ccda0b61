#include "swid/cbor.hpp"

#include <algorithm>
#include <limits>

#include "swid/error.hpp"

namespace swid::cbor {

namespace {

enum Major : std::uint8_t {
    kUnsigned = 0,
    kNegative = 1,
    kByteString = 2,
    kTextString = 3,
    kArray = 4,
    kMap = 5,
    kTag = 6,
    kSimple = 7,
};

constexpr int kMaxDepth = 64;

void write_head(Bytes& out, std::uint8_t major, std::uint64_t arg) {
    const std::uint8_t m = static_cast<std::uint8_t>(major << 5);
    if (arg < 24) {
        out.push_back(m | static_cast<std::uint8_t>(arg));
    } else if (arg <= 0xff) {
        out.push_back(m | 24);
        out.push_back(static_cast<std::uint8_t>(arg));
    } else if (arg <= 0xffff) {
        out.push_back(m | 25);
        for (int s = 8; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(arg >> s));
    } else if (arg <= 0xffffffffULL) {
        out.push_back(m | 26);
        for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(arg >> s));
    } else {
        out.push_back(m | 27);
        for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(arg >> s));
    }
}

void write(Bytes& out, const Value& value);

struct Writer {
    Bytes& out;

    void operator()(std::nullptr_t) const { out.push_back(0xf6); }
    void operator()(bool b) const { out.push_back(b ? 0xf5 : 0xf4); }
    void operator()(std::int64_t v) const {
        if (v >= 0)
            write_head(out, kUnsigned, static_cast<std::uint64_t>(v));
        else
            write_head(out, kNegative, static_cast<std::uint64_t>(-(v + 1)));
    }
    void operator()(const Bytes& b) const {
        write_head(out, kByteString, b.size());
        append(out, b);
    }
    void operator()(const std::string& s) const {
        write_head(out, kTextString, s.size());
        out.insert(out.end(), s.begin(), s.end());
    }
    void operator()(const Array& a) const {
        write_head(out, kArray, a.size());
        for (const auto& item : a) write(out, item);
    }
    void operator()(const Map& m) const {
        std::vector<std::pair<Bytes, const Value*>> entries;
        entries.reserve(m.size());
        for (const auto& [k, v] : m) entries.emplace_back(encode(k), &v);
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].first == entries[i - 1].first)
                throw Error(Errc::invalid_argument, "duplicate CBOR map key");
        write_head(out, kMap, entries.size());
        for (const auto& [key, v] : entries) {
            append(out, key);
            write(out, *v);
        }
    }
    void operator()(const Tagged& t) const {
        write_head(out, kTag, t.tag);
        write(out, t.item ? *t.item : Value{});
    }
};

void write(Bytes& out, const Value& value) { std::visit(Writer{out}, value.data); }

class Reader {
public:
    explicit Reader(ByteView in) : in_(in) {}

    Value read(int depth) {
        if (depth > kMaxDepth) throw Error(Errc::malformed, "CBOR nesting too deep");
        const std::uint8_t initial = byte();
        const std::uint8_t major = initial >> 5;
        const std::uint8_t info = initial & 0x1f;

        if (major == kSimple) {
            switch (info) {
            case 20: return Value(false);
            case 21: return Value(true);
            case 22: return Value(nullptr);
            default: throw Error(Errc::malformed, "unsupported CBOR simple/float value");
            }
        }

        const std::uint64_t arg = argument(info);
        switch (major) {
        case kUnsigned:
            if (arg > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                throw Error(Errc::malformed, "CBOR integer out of range");
            return Value(static_cast<std::int64_t>(arg));
        case kNegative:
            if (arg > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                throw Error(Errc::malformed, "CBOR integer out of range");
            return Value(-1 - static_cast<std::int64_t>(arg));
        case kByteString: {
            auto span = take(arg);
            return Value(Bytes(span.begin(), span.end()));
        }
        case kTextString: {
            auto span = take(arg);
            return Value(std::string(span.begin(), span.end()));
        }
        case kArray: {
            check_count(arg);
            Array items;
            items.reserve(arg);
            for (std::uint64_t i = 0; i < arg; ++i) items.push_back(read(depth + 1));
            return Value(std::move(items));
        }
        case kMap: {
            check_count(arg);
            Map entries;
            entries.reserve(arg);
            for (std::uint64_t i = 0; i < arg; ++i) {
                Value key = read(depth + 1);
                for (const auto& e : entries)
                    if (e.first == key) throw Error(Errc::malformed, "duplicate CBOR map key");
                Value val = read(depth + 1);
                entries.emplace_back(std::move(key), std::move(val));
            }
            return Value(std::move(entries));
        }
        case kTag:
            return tag(arg, read(depth + 1));
        }
        throw Error(Errc::malformed, "unreachable CBOR major type");
    }

    bool at_end() const { return pos_ == in_.size(); }

private:
    std::uint8_t byte() {
        if (pos_ >= in_.size()) throw Error(Errc::malformed, "truncated CBOR");
        return in_[pos_++];
    }

    std::uint64_t argument(std::uint8_t info) {
        if (info < 24) return info;
        int width = 0;
        switch (info) {
        case 24: width = 1; break;
        case 25: width = 2; break;
        case 26: width = 4; break;
        case 27: width = 8; break;
        default: throw Error(Errc::malformed, "indefinite or reserved CBOR length");
        }
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v = (v << 8) | byte();
        return v;
    }

    ByteView take(std::uint64_t n) {
        if (n > in_.size() - pos_) throw Error(Errc::malformed, "truncated CBOR string");
        auto span = in_.subspan(pos_, static_cast<std::size_t>(n));
        pos_ += static_cast<std::size_t>(n);
        return span;
    }

    // Every element takes at least one byte.
    void check_count(std::uint64_t n) const {
        if (n > in_.size() - pos_) throw Error(Errc::malformed, "truncated CBOR container");
    }

    ByteView in_;
    std::size_t pos_ = 0;
};

template <typename T>
const T& get_as(const Value& v, const char* what) {
    if (const auto* p = std::get_if<T>(&v.data)) return *p;
    throw Error(Errc::malformed, std::string("expected CBOR ") + what);
}

} // namespace

bool Tagged::operator==(const Tagged& other) const {
    if (tag != other.tag) return false;
    if (!item || !other.item) return item == other.item;
    return *item == *other.item;
}

std::int64_t Value::as_int() const { return get_as<std::int64_t>(*this, "integer"); }
const Bytes& Value::as_bytes() const { return get_as<Bytes>(*this, "byte string"); }
const std::string& Value::as_text() const { return get_as<std::string>(*this, "text string"); }
const Array& Value::as_array() const { return get_as<Array>(*this, "array"); }
const Map& Value::as_map() const { return get_as<Map>(*this, "map"); }
const Tagged& Value::as_tagged() const { return get_as<Tagged>(*this, "tag"); }

Value tag(std::uint64_t tag, Value item) {
    return Value(Tagged{tag, std::make_shared<const Value>(std::move(item))});
}

const Value* find(const Map& map, const Value& key) {
    for (const auto& [k, v] : map)
        if (k == key) return &v;
    return nullptr;
}

Bytes encode(const Value& value) {
    Bytes out;
    write(out, value);
    return out;
}

Value decode(ByteView bytes) {
    Reader reader(bytes);
    Value v = reader.read(0);
    if (!reader.at_end()) throw Error(Errc::malformed, "trailing bytes after CBOR item");
    return v;
}

} // namespace swid::cbor

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace poslo {

using Bytes = std::vector<uint8_t>;

// Seed length in bytes (kappa = 128 bits).
inline constexpr size_t kSeedBytes = 16;
inline constexpr size_t kScalarBytes = 32;
inline constexpr size_t kPointBytes = 32;

using Seed = std::array<uint8_t, kSeedBytes>;

// Thrown on malformed input: wrong lengths, bad encodings, broken files.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an operation is asked for something its state cannot provide
// (exhausted epochs, missing commitments, out-of-order distillation).
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by seed retrieval when the queried epoch is not yet disclosed.
// Distinct from "signature invalid": the verifier simply cannot decide yet.
struct SeedNotDisclosed : std::runtime_error {
    explicit SeedNotDisclosed(uint32_t epoch)
        : std::runtime_error("seed for epoch " + std::to_string(epoch) +
                             " not yet disclosed"),
          epoch(epoch) {}
    uint32_t epoch;
};

inline void put_be32(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void store_be32(uint8_t* p, uint32_t v) {
    p[0] = static_cast<uint8_t>(v >> 24);
    p[1] = static_cast<uint8_t>(v >> 16);
    p[2] = static_cast<uint8_t>(v >> 8);
    p[3] = static_cast<uint8_t>(v);
}

inline uint32_t load_be32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) |
           (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

// Cursor over a byte buffer for wire-format parsing.
class Reader {
public:
    Reader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit Reader(const Bytes& b) : Reader(b.data(), b.size()) {}

    size_t remaining() const { return size_ - pos_; }

    const uint8_t* take(size_t n) {
        if (remaining() < n) throw FormatError("truncated input");
        const uint8_t* p = data_ + pos_;
        pos_ += n;
        return p;
    }

    uint8_t u8() { return *take(1); }
    uint32_t be32() { return load_be32(take(4)); }

    void expect_magic(const char* magic) {
        const uint8_t* p = take(4);
        if (std::memcmp(p, magic, 4) != 0)
            throw FormatError(std::string("bad magic, expected ") + magic);
    }

    void expect_end() const {
        if (pos_ != size_) throw FormatError("trailing bytes");
    }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

}  // namespace poslo

#include "poslo/primitives.hpp"

#include <openssl/aes.h>
#include <openssl/sha.h>

namespace poslo {

namespace {

// Single-block AES-128 encryption. MMO rekeys the cipher with the chaining
// value on every block, so the per-call key schedule is the hot path; the
// direct AES interface beats an EVP re-init by ~5x here.
void aes128_block(const uint8_t key[16], const uint8_t in[16],
                  uint8_t out[16]) {
    AES_KEY ks;
    if (AES_set_encrypt_key(key, 128, &ks) != 0)
        throw std::runtime_error("AES key schedule failed");
    AES_encrypt(in, out, &ks);
}

void sha256(const uint8_t* m, size_t len, uint8_t out[32]) {
    SHA256(m, len, out);
}

// 10* padding to 16-byte blocks; always at least one pad bit, so a message
// ending on a boundary grows by a full block. Short messages (the seed/tree
// hot path) pad into a stack buffer to keep the heap out of the inner loop.
struct Padded {
    uint8_t local[128];
    Bytes heap;
    const uint8_t* data;
    size_t len;

    Padded(const uint8_t* m, size_t mlen) {
        len = (mlen / 16 + 1) * 16;
        uint8_t* dst;
        if (len <= sizeof local) {
            dst = local;
        } else {
            heap.resize(len);
            dst = heap.data();
        }
        std::memcpy(dst, m, mlen);
        dst[mlen] = 0x80;
        std::memset(dst + mlen + 1, 0, len - mlen - 1);
        data = dst;
    }
};

constexpr uint8_t kMmoIv = 0x52;   // h0
constexpr uint8_t kMdc2Iv2 = 0x25; // h0'

bool is_aes_suite(SuiteId s) {
    return s == SuiteId::MmoMdc2 || s == SuiteId::MmoAddQ;
}

}  // namespace

uint32_t SuiteConfig::depth() const {
    uint32_t d = 0;
    for (uint32_t v = n1; v > 1; v >>= 1) d++;
    return d;
}

void SuiteConfig::validate() const {
    if (suite != SuiteId::Sha256 && suite != SuiteId::MmoMdc2 &&
        suite != SuiteId::MmoAddQ)
        throw FormatError("unknown suite id");
    if (n1 < 2 || (n1 & (n1 - 1)) != 0)
        throw FormatError("n1 must be a power of two >= 2");
    if (n2 < 1) throw FormatError("n2 must be positive");
    if (n_u < 1 || n1 % n_u != 0)
        throw FormatError("n_u must be positive and divide n1");
}

std::array<uint8_t, 16> mmo_hash(const uint8_t* m, size_t len) {
    if (len == 0) throw FormatError("mmo_hash: empty message");
    Padded buf(m, len);
    std::array<uint8_t, 16> h;
    h.fill(kMmoIv);
    uint8_t e[16];
    for (size_t off = 0; off < buf.len; off += 16) {
        aes128_block(h.data(), buf.data + off, e);
        for (int k = 0; k < 16; k++) h[k] = e[k] ^ buf.data[off + k];
    }
    return h;
}

std::array<uint8_t, 32> mdc2_hash(const uint8_t* m, size_t len) {
    if (len == 0) throw FormatError("mdc2_hash: empty message");
    Padded buf(m, len);
    uint8_t h[16], h2[16], e[16];
    std::memset(h, kMmoIv, 16);
    std::memset(h2, kMdc2Iv2, 16);
    for (size_t off = 0; off < buf.len; off += 16) {
        uint8_t a[16], b[16];
        aes128_block(h, buf.data + off, e);
        for (int k = 0; k < 16; k++) a[k] = e[k] ^ buf.data[off + k];
        aes128_block(h2, buf.data + off, e);
        for (int k = 0; k < 16; k++) b[k] = e[k] ^ buf.data[off + k];
        // Cross-swap the second halves of the two chains.
        std::memcpy(h, a, 8);
        std::memcpy(h + 8, b + 8, 8);
        std::memcpy(h2, b, 8);
        std::memcpy(h2 + 8, a + 8, 8);
    }
    std::array<uint8_t, 32> out;
    std::memcpy(out.data(), h, 16);
    std::memcpy(out.data() + 16, h2, 16);
    return out;
}

Seed prf(SuiteId suite, int j, const Seed& x) {
    uint8_t in[kSeedBytes + 1];
    std::memcpy(in, x.data(), kSeedBytes);
    in[kSeedBytes] = static_cast<uint8_t>(j & 1);
    Seed out;
    if (is_aes_suite(suite)) {
        auto d = mmo_hash(in, sizeof in);
        std::memcpy(out.data(), d.data(), kSeedBytes);
    } else {
        uint8_t d[32];
        sha256(in, sizeof in, d);
        std::memcpy(out.data(), d, kSeedBytes);
    }
    return out;
}

void expand_wide(SuiteId suite, const uint8_t* msg, size_t len,
                 uint8_t out[64]) {
    Bytes buf(msg, msg + len);
    buf.push_back(0x00);
    if (is_aes_suite(suite)) {
        auto d0 = mdc2_hash(buf.data(), buf.size());
        buf.back() = 0x01;
        auto d1 = mdc2_hash(buf.data(), buf.size());
        std::memcpy(out, d0.data(), 32);
        std::memcpy(out + 32, d1.data(), 32);
    } else {
        uint8_t d0[32], d1[32];
        sha256(buf.data(), buf.size(), d0);
        buf.back() = 0x01;
        sha256(buf.data(), buf.size(), d1);
        std::memcpy(out, d0, 32);
        std::memcpy(out + 32, d1, 32);
    }
}

Scalar hash_to_scalar(SuiteId suite, const uint8_t* m, size_t mlen,
                      const Seed& x) {
    switch (suite) {
        case SuiteId::Sha256:
        case SuiteId::MmoMdc2: {
            // layout [0x01 | m | x]: the untagged pass starts at offset 1
            uint8_t local[96];
            Bytes heap;
            uint8_t* buf = local;
            if (1 + mlen + kSeedBytes > sizeof local) {
                heap.resize(1 + mlen + kSeedBytes);
                buf = heap.data();
            }
            buf[0] = 0x01;
            std::memcpy(buf + 1, m, mlen);
            std::memcpy(buf + 1 + mlen, x.data(), kSeedBytes);
            size_t n = mlen + kSeedBytes;
            uint8_t wide[64];
            if (suite == SuiteId::Sha256) {
                sha256(buf + 1, n, wide);
                sha256(buf, n + 1, wide + 32);
            } else {
                auto d0 = mdc2_hash(buf + 1, n);
                auto d1 = mdc2_hash(buf, n + 1);
                std::memcpy(wide, d0.data(), 32);
                std::memcpy(wide + 32, d1.data(), 32);
            }
            return Scalar::reduce_wide_be(wide, 64);
        }
        case SuiteId::MmoAddQ: {
            if (mlen > kAddQMaxEntry)
                throw FormatError(
                    "modular-addition hash: entry too long for this suite");
            // e = (int(m) + int(x)) mod q, both big-endian integers.
            uint8_t wide[64] = {0};
            std::memcpy(wide + 64 - mlen, m, mlen);
            Scalar em = Scalar::reduce_wide_be(wide, 64);
            std::memset(wide, 0, 64);
            std::memcpy(wide + 64 - kSeedBytes, x.data(), kSeedBytes);
            Scalar ex = Scalar::reduce_wide_be(wide, 64);
            return em.add(ex);
        }
    }
    throw FormatError("unknown suite id");
}

Scalar nonce_to_scalar(SuiteId suite, const Seed& r, uint32_t i, uint32_t j) {
    uint8_t msg[kSeedBytes + 4 + 4 + 1];
    std::memcpy(msg, r.data(), kSeedBytes);
    store_be32(msg + kSeedBytes, i);
    store_be32(msg + kSeedBytes + 4, j);
    for (uint32_t counter = 0;; counter++) {
        msg[kSeedBytes + 8] = static_cast<uint8_t>(counter);
        uint8_t wide[64];
        expand_wide(suite, msg, sizeof msg, wide);
        Scalar s = Scalar::reduce_wide_be(wide, 64);
        if (!s.is_zero()) return s;
    }
}

Seed onetime_seed(SuiteId suite, const Seed& x0_i, uint32_t j) {
    uint8_t in[kSeedBytes + 4];
    std::memcpy(in, x0_i.data(), kSeedBytes);
    store_be32(in + kSeedBytes, j);
    Seed out;
    if (is_aes_suite(suite)) {
        auto d = mmo_hash(in, sizeof in);
        std::memcpy(out.data(), d.data(), kSeedBytes);
    } else {
        uint8_t d[32];
        sha256(in, sizeof in, d);
        std::memcpy(out.data(), d, kSeedBytes);
    }
    return out;
}

}  // namespace poslo

#include "poslo/group.hpp"

#include <sodium.h>

#include <algorithm>
#include <atomic>
#include <mutex>

namespace poslo {

namespace {

std::atomic<uint64_t> g_exp_base{0};
std::atomic<uint64_t> g_exp_var{0};
std::atomic<uint64_t> g_double_exp{0};
std::atomic<uint64_t> g_combine{0};

void ensure_sodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0)
            throw std::runtime_error("libsodium initialization failed");
    });
}

std::array<uint8_t, 32> reversed(const uint8_t* p) {
    std::array<uint8_t, 32> out;
    for (size_t i = 0; i < 32; i++) out[i] = p[31 - i];
    return out;
}

}  // namespace

Scalar Scalar::from_canonical_le(const uint8_t* p) {
    ensure_sodium();
    // Reject non-reduced values: reduce and compare.
    uint8_t wide[64] = {0};
    std::memcpy(wide, p, 32);
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.v_.data(), wide);
    if (std::memcmp(s.v_.data(), p, 32) != 0)
        throw FormatError("non-canonical scalar");
    return s;
}

Scalar Scalar::from_be_bytes(const uint8_t* p) {
    auto le = reversed(p);
    return from_canonical_le(le.data());
}

Scalar Scalar::reduce_wide_be(const uint8_t* p, size_t len) {
    ensure_sodium();
    if (len != 64) throw FormatError("wide reduction needs exactly 64 bytes");
    uint8_t le[64];
    for (size_t i = 0; i < 64; i++) le[i] = p[63 - i];
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.v_.data(), le);
    return s;
}

Scalar Scalar::random() {
    ensure_sodium();
    Scalar s;
    crypto_core_ristretto255_scalar_random(s.v_.data());
    return s;
}

Scalar Scalar::add(const Scalar& o) const {
    ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_add(r.v_.data(), v_.data(), o.v_.data());
    return r;
}

Scalar Scalar::sub(const Scalar& o) const {
    ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_sub(r.v_.data(), v_.data(), o.v_.data());
    return r;
}

Scalar Scalar::mul(const Scalar& o) const {
    ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_mul(r.v_.data(), v_.data(), o.v_.data());
    return r;
}

bool Scalar::is_zero() const {
    uint8_t acc = 0;
    for (uint8_t b : v_) acc |= b;
    return acc == 0;
}

std::array<uint8_t, kScalarBytes> Scalar::be_bytes() const {
    return reversed(v_.data());
}

GroupElement GroupElement::generator() {
    static const GroupElement g = exp_base([] {
        uint8_t one[32] = {1};
        return Scalar::from_canonical_le(one);
    }());
    return g;
}

GroupElement GroupElement::from_bytes(const uint8_t* p) {
    ensure_sodium();
    GroupElement e;
    std::memcpy(e.v_.data(), p, kPointBytes);
    if (!crypto_core_ristretto255_is_valid_point(e.v_.data()))
        throw FormatError("invalid group element encoding");
    return e;
}

bool GroupElement::is_identity() const {
    uint8_t acc = 0;
    for (uint8_t b : v_) acc |= b;
    return acc == 0;
}

GroupElement exp_base(const Scalar& s) {
    ensure_sodium();
    g_exp_base.fetch_add(1, std::memory_order_relaxed);
    GroupElement r;
    if (s.is_zero()) return r;  // libsodium refuses identity outputs
    if (crypto_scalarmult_ristretto255_base(r.v_.data(),
                                            s.le_bytes().data()) != 0)
        return GroupElement::identity();
    return r;
}

GroupElement exp(const GroupElement& base, const Scalar& s) {
    ensure_sodium();
    g_exp_var.fetch_add(1, std::memory_order_relaxed);
    GroupElement r;
    if (s.is_zero() || base.is_identity()) return r;
    if (crypto_scalarmult_ristretto255(r.v_.data(), s.le_bytes().data(),
                                       base.bytes().data()) != 0)
        return GroupElement::identity();
    return r;
}

GroupElement commit_check(const GroupElement& y, const Scalar& e,
                          const Scalar& s) {
    g_double_exp.fetch_add(1, std::memory_order_relaxed);
    // Two exponentiations plus one combine; counted once as a double-exp,
    // the inner ops are excluded from the counters.
    ensure_sodium();
    GroupElement ye, as;
    if (!e.is_zero() && !y.is_identity()) {
        if (crypto_scalarmult_ristretto255(ye.v_.data(), e.le_bytes().data(),
                                           y.bytes().data()) != 0)
            ye = GroupElement::identity();
    }
    if (!s.is_zero()) {
        if (crypto_scalarmult_ristretto255_base(as.v_.data(),
                                                s.le_bytes().data()) != 0)
            as = GroupElement::identity();
    }
    if (ye.is_identity()) return as;
    if (as.is_identity()) return ye;
    GroupElement r;
    crypto_core_ristretto255_add(r.v_.data(), ye.bytes().data(),
                                 as.bytes().data());
    return r;
}

GroupElement group_combine(const GroupElement& a, const GroupElement& b) {
    ensure_sodium();
    g_combine.fetch_add(1, std::memory_order_relaxed);
    if (a.is_identity()) return b;
    if (b.is_identity()) return a;
    GroupElement r;
    crypto_core_ristretto255_add(r.v_.data(), a.bytes().data(),
                                 b.bytes().data());
    return r;
}

GroupOpCounts group_op_counts() {
    GroupOpCounts c;
    c.exp_base = g_exp_base.load(std::memory_order_relaxed);
    c.exp_var = g_exp_var.load(std::memory_order_relaxed);
    c.double_exp = g_double_exp.load(std::memory_order_relaxed);
    c.combine = g_combine.load(std::memory_order_relaxed);
    return c;
}

void reset_group_op_counts() {
    g_exp_base.store(0, std::memory_order_relaxed);
    g_exp_var.store(0, std::memory_order_relaxed);
    g_double_exp.store(0, std::memory_order_relaxed);
    g_combine.store(0, std::memory_order_relaxed);
}

}  // namespace poslo

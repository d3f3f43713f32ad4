#pragma once

// Scalar field Z_q and prime-order group <alpha> used by all signing and
// verification arithmetic. Backed by ristretto255: a prime-order group with
// 32-byte canonical encodings and built-in membership validation. q is the
// ristretto255 group order (a 253-bit prime); scalars are kept in canonical
// reduced form at all times.

#include "poslo/common.hpp"

namespace poslo {

class Scalar {
public:
    // Zero scalar.
    Scalar() : v_{} {}

    // Canonical little-endian 32-byte representation, value < q.
    static Scalar from_canonical_le(const uint8_t* p);

    // 32-byte big-endian encoding (the external wire form).
    static Scalar from_be_bytes(const uint8_t* p);

    // Wide reduction of a 64-byte big-endian integer mod q. Bias-free
    // mapping for digests and nonces.
    static Scalar reduce_wide_be(const uint8_t* p, size_t len);

    static Scalar random();

    Scalar add(const Scalar& o) const;
    Scalar sub(const Scalar& o) const;
    Scalar mul(const Scalar& o) const;

    bool is_zero() const;
    bool operator==(const Scalar& o) const { return v_ == o.v_; }

    // Little-endian canonical bytes (native form).
    const std::array<uint8_t, kScalarBytes>& le_bytes() const { return v_; }
    // Big-endian 32-byte serialization.
    std::array<uint8_t, kScalarBytes> be_bytes() const;

private:
    std::array<uint8_t, kScalarBytes> v_;
};

class GroupElement {
public:
    // Identity element.
    GroupElement() : v_{} {}

    static GroupElement identity() { return GroupElement(); }
    static GroupElement generator();

    // Deserialize with membership validation; throws FormatError on a
    // non-canonical or off-group encoding.
    static GroupElement from_bytes(const uint8_t* p);

    bool is_identity() const;
    bool operator==(const GroupElement& o) const { return v_ == o.v_; }

    const std::array<uint8_t, kPointBytes>& bytes() const { return v_; }

private:
    friend GroupElement exp_base(const Scalar& s);
    friend GroupElement exp(const GroupElement& base, const Scalar& s);
    friend GroupElement group_combine(const GroupElement& a,
                                      const GroupElement& b);
    friend GroupElement commit_check(const GroupElement& y, const Scalar& e,
                                     const Scalar& s);
    std::array<uint8_t, kPointBytes> v_;
};

// alpha^s.
GroupElement exp_base(const Scalar& s);

// base^s (variable-base exponentiation).
GroupElement exp(const GroupElement& base, const Scalar& s);

// Y^e * alpha^s, the single expensive step of batch verification.
GroupElement commit_check(const GroupElement& y, const Scalar& e,
                          const Scalar& s);

// The group operation; associative and commutative.
GroupElement group_combine(const GroupElement& a, const GroupElement& b);

// Operation counters for the cost assertions (signer optimality, constant
// EC cost of batch verification). Cheap relaxed atomics, safe to read from
// any thread.
struct GroupOpCounts {
    uint64_t exp_base = 0;      // fixed-base exponentiations
    uint64_t exp_var = 0;       // variable-base exponentiations
    uint64_t double_exp = 0;    // commit_check invocations
    uint64_t combine = 0;       // group operations
};

GroupOpCounts group_op_counts();
void reset_group_op_counts();

}  // namespace poslo

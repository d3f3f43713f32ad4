#pragma once

// Pluggable PRF / message-hash primitives behind the three suites:
//   1: SHA-256 PRF, SHA-256 message hash
//   2: MMO-AES-128 PRF, MDC-2-AES-128 message hash
//   3: MMO-AES-128 PRF, modular addition (small entries only)

#include "poslo/common.hpp"
#include "poslo/group.hpp"

namespace poslo {

enum class SuiteId : uint8_t {
    Sha256 = 0x01,
    MmoMdc2 = 0x02,
    MmoAddQ = 0x03,
};

struct SuiteConfig {
    SuiteId suite = SuiteId::Sha256;
    uint32_t n1 = 0;        // epochs, power of two
    uint32_t n2 = 0;        // entries per epoch
    uint32_t n_u = 1;       // umbrella count, divides n1
    uint32_t depth() const; // D = log2(n1)

    // Throws FormatError if the parameter invariants do not hold.
    void validate() const;
};

// Maximum entry length for the modular-addition hash (entries must encode
// integers below q, so anything shorter than a scalar works).
inline constexpr size_t kAddQMaxEntry = 31;

// PRF_j(x) = F(x || j), j in {0,1} encoded as one byte; output kappa bits.
Seed prf(SuiteId suite, int j, const Seed& x);

// Matyas-Meyer-Oseas over AES-128. 10* padding: append 0x80 then zeros to
// the block boundary; messages ending on a boundary get a full pad block.
std::array<uint8_t, 16> mmo_hash(const uint8_t* m, size_t len);

// MDC-2 over AES-128: two MMO chains with per-block half-swaps; 32 bytes.
std::array<uint8_t, 32> mdc2_hash(const uint8_t* m, size_t len);

// Suite message hash H(m || x) mod q.
Scalar hash_to_scalar(SuiteId suite, const uint8_t* m, size_t mlen,
                      const Seed& x);

// Per-entry signing nonce r_i^j, derived from the master nonce seed.
// Never returns zero: a zero draw re-derives with an incremented counter.
Scalar nonce_to_scalar(SuiteId suite, const Seed& r, uint32_t i, uint32_t j);

// kappa-bit one-time seed used in place of the commitment: PRF chain over
// (x0_i || enc32(j)).
Seed onetime_seed(SuiteId suite, const Seed& x0_i, uint32_t j);

// 64-byte expansion used for nonce derivation: two invocations of the
// suite's 256-bit primitive (SHA-256, or MDC-2 for the AES suites) with a
// one-byte chunk tag.
void expand_wide(SuiteId suite, const uint8_t* msg, size_t len,
                 uint8_t out[64]);

}  // namespace poslo

#pragma once

// Fine-grained variant: per-entry signatures carrying their commitment,
// constant-size public key, commitments produced by subset-sum
// precomputation (or direct exponentiation when the table is disabled).

#include <optional>
#include <variant>

#include "poslo/poslo_c.hpp"

namespace poslo {

struct BpvTable {
    uint32_t v = 0;  // table size
    uint32_t k = 0;  // subset size
    std::vector<std::pair<Scalar, GroupElement>> pairs;

    // v independent (r_i, alpha^{r_i}) pairs.
    static BpvTable offline(uint32_t v, uint32_t k);

    // One-time commitment pair from a random k-subset sum. Exactly k group
    // combinations, no full exponentiation.
    std::pair<Scalar, GroupElement> online() const;
};

struct FineSignature {
    Scalar s;
    GroupElement r;
    // Seed for mid-epoch entries; the disclosed-seed stack on the last
    // entry of an epoch.
    std::variant<Seed, SeedStack> tail;

    bool carries_ds() const { return tail.index() == 1; }

    Bytes serialize() const;
    static FineSignature deserialize(Reader& rd, uint32_t depth);
};

struct PoslofPublicKey {
    SuiteConfig suite;
    GroupElement y;  // the whole public key: one group element

    Bytes serialize() const;
    static PoslofPublicKey deserialize(const Bytes& in);
};

class PoslofSecretKey {
public:
    // bpv with v = 0 disables the table; commitments then cost one full
    // exponentiation each.
    static std::pair<PoslofSecretKey, PoslofPublicKey> kg(
        const SuiteConfig& suite, uint32_t bpv_v, uint32_t bpv_k);

    // Signs entry t (global 0-based counter); epoch i = t / n2, j = t % n2.
    FineSignature sig_one(const Bytes& msg);

    uint32_t next_entry() const { return t_; }
    const SuiteConfig& suite() const { return suite_; }
    bool has_bpv() const { return gamma_.has_value(); }

    Bytes serialize() const;
    static PoslofSecretKey deserialize(const Bytes& in);

    const Scalar& y() const { return y_; }
    const Seed& nonce_seed() const { return r_; }
    const SeedNode& root() const { return root_; }
    const std::optional<BpvTable>& gamma() const { return gamma_; }

private:
    PoslofSecretKey() = default;
    SuiteConfig suite_;
    Scalar y_;
    Seed r_{};
    SeedNode root_;
    std::optional<BpvTable> gamma_;
    uint32_t t_ = 0;
    SeedStack ds_;
    Seed x0_cur_{};  // epoch seed cached between entries of one epoch
};

// Single-entry verification using the attached seed.
bool aver_f_single(const PoslofPublicKey& pk, const Bytes& msg,
                   const FineSignature& sig);

// Batch verification of aggregated fine signatures: s and R are the
// aggregates of the individual components, ds must cover every epoch in
// `entries` (map of global entry index -> message).
bool aver_f_batch(const PoslofPublicKey& pk,
                  const std::map<uint32_t, Bytes>& entries, const Scalar& s,
                  const GroupElement& r, const SeedStack& ds);

}  // namespace poslo

#pragma once

// Coarse-grained signer-optimal scheme: per-epoch aggregate signatures with
// zero group exponentiations on the signing path.

#include <map>
#include <optional>

#include "poslo/group.hpp"
#include "poslo/seed_manager.hpp"

namespace poslo {

struct EpochSignature {
    Scalar s_hat;
    std::optional<GroupElement> r_hat;  // attached by distillation only
    SeedStack ds;                       // state after this epoch

    Bytes serialize() const;
    static EpochSignature deserialize(Reader& r, uint32_t depth);
};

struct PoslocPublicKey {
    SuiteConfig suite;
    GroupElement y;
    // Epoch-indexed so distillation can drop entries without reindexing.
    std::map<uint32_t, GroupElement> r_hats;

    Bytes serialize() const;
    static PoslocPublicKey deserialize(const Bytes& in);
};

class PoslocSecretKey {
public:
    // Samples a fresh key pair and precomputes the per-epoch commitments.
    static std::pair<PoslocSecretKey, PoslocPublicKey> kg(
        const SuiteConfig& suite);

    // Signs the next epoch; msgs must hold exactly n2 entries. Throws
    // StateError when the epochs are exhausted or the batch size is wrong.
    EpochSignature sig_epoch(const std::vector<Bytes>& msgs);

    uint32_t next_epoch() const { return next_epoch_; }
    const SuiteConfig& suite() const { return suite_; }

    Bytes serialize() const;
    static PoslocSecretKey deserialize(const Bytes& in);

    // Test access: the long-term key and nonce seed are needed by the
    // scalar-arithmetic oracles.
    const Scalar& y() const { return y_; }
    const Seed& nonce_seed() const { return r_; }
    const SeedNode& root() const { return root_; }

private:
    PoslocSecretKey() = default;
    SuiteConfig suite_;
    Scalar y_;
    Seed r_{};
    SeedNode root_;
    uint32_t next_epoch_ = 0;
    SeedStack ds_;
};

// Keyless dual-mode aggregation. Empty input folds to the monoid identity.
Scalar agg_scalars(const std::vector<Scalar>& parts);
GroupElement agg_elements(const std::vector<GroupElement>& parts);

// Batch verification over a set of epochs. `r_hat_agg` overrides the public
// key's commitment list (the distilled path); without it every queried
// epoch must still be present in pk.r_hats. Throws SeedNotDisclosed for an
// epoch the stack cannot answer and StateError for missing commitments;
// returns false only for an actual mismatch.
bool aver(const PoslocPublicKey& pk,
          const std::map<uint32_t, std::vector<Bytes>>& batches,
          const Scalar& s_hat, const std::optional<GroupElement>& r_hat_agg,
          const SeedStack& ds);

inline bool aver(const PoslocPublicKey& pk,
                 const std::map<uint32_t, std::vector<Bytes>>& batches,
                 const EpochSignature& sig) {
    return aver(pk, batches, sig.s_hat, sig.r_hat, sig.ds);
}

// Aggregate ephemeral key over the given batches (sum of per-entry
// challenge scalars); shared by the sequential and parallel verifiers.
Scalar aggregate_ekey(const SuiteConfig& suite,
                      const std::map<uint32_t, std::vector<Bytes>>& batches,
                      const SeedStack& ds);

}  // namespace poslo

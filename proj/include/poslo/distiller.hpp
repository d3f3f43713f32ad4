#pragma once

// Verify-then-compress pipeline: valid aggregate, umbrella sub-aggregates,
// individual invalid tags, and the latest disclosed-seed stack.

#include "poslo/poslo_c.hpp"
#include "poslo/poslo_f.hpp"

namespace poslo {

enum class SebverMode { V, U, I };

enum class CcdScheme : uint8_t { Coarse = 'C', Fine = 'F' };

struct AggregatePair {
    Scalar s;
    GroupElement r;
};

struct UmbrellaRecord {
    uint32_t index = 0;  // umbrella index, epoch range [index*w, (index+1)*w)
    AggregatePair sig;
};

struct InvalidRecord {
    uint32_t index = 0;  // epoch index (coarse) or entry index (fine)
    AggregatePair sig;
};

class ColdCryptoData {
public:
    ColdCryptoData() = default;
    ColdCryptoData(CcdScheme scheme, const SuiteConfig& suite);

    CcdScheme scheme() const { return scheme_; }
    const SuiteConfig& suite() const { return suite_; }
    uint32_t epochs_distilled() const { return next_epoch_; }
    bool has_valid() const { return has_valid_; }
    const AggregatePair& valid() const;
    const std::vector<UmbrellaRecord>& umbrellas() const { return umbrellas_; }
    const std::vector<InvalidRecord>& invalid() const { return invalid_; }
    const SeedStack& ds() const { return ds_; }

    // Folds one verified epoch into the running aggregates. Epochs must
    // arrive in order. Consumes the matching commitment from pk.
    void distill_epoch(PoslocPublicKey& pk, const std::vector<Bytes>& msgs,
                       const EpochSignature& sig);

    // Fine-grained counterpart: verifies each entry signature of the epoch
    // individually; invalid entries are recorded at entry granularity.
    void distill_epoch_fine(const PoslofPublicKey& pk,
                            const std::vector<Bytes>& msgs,
                            const std::vector<FineSignature>& sigs);

    // Flushes a partial umbrella accumulator when a stream ends before an
    // umbrella boundary. Full streams need no finalization.
    void finalize();

    // Mode V: one bit for the whole valid aggregate. Mode U: one bit per
    // umbrella. Mode I: one bit per invalid record. `all_msgs` maps epoch
    // index -> the epoch's n2 entries.
    std::vector<bool> sebver(
        const GroupElement& y,
        const std::map<uint32_t, std::vector<Bytes>>& all_msgs,
        SebverMode mode) const;

    Bytes serialize() const;
    static ColdCryptoData deserialize(const Bytes& in);

    // Test hook: direct mutation for corruption experiments.
    AggregatePair& valid_mut() { return valid_; }
    std::vector<UmbrellaRecord>& umbrellas_mut() { return umbrellas_; }

private:
    uint32_t umbrella_width() const { return suite_.n1 / suite_.n_u; }
    void fold_valid(const Scalar& s, const GroupElement& r, uint32_t epoch);
    void record_invalid(uint32_t index, const Scalar& s,
                        const GroupElement& r);
    bool epoch_invalid(uint32_t epoch) const;
    std::map<uint32_t, std::vector<Bytes>> collect_epochs(
        const std::map<uint32_t, std::vector<Bytes>>& all_msgs, uint32_t lo,
        uint32_t hi) const;
    bool verify_range(const GroupElement& y,
                      const std::map<uint32_t, std::vector<Bytes>>& all_msgs,
                      uint32_t lo, uint32_t hi,
                      const AggregatePair& sig) const;

    CcdScheme scheme_ = CcdScheme::Coarse;
    SuiteConfig suite_;
    uint32_t next_epoch_ = 0;
    bool has_valid_ = false;
    AggregatePair valid_;
    AggregatePair umb_acc_;
    bool umb_acc_nonempty_ = false;
    std::vector<UmbrellaRecord> umbrellas_;
    std::vector<InvalidRecord> invalid_;
    SeedStack ds_;
};

}  // namespace poslo

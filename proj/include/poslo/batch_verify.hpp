#pragma once

// Parallel batch verification: the per-epoch ephemeral-key aggregation is
// embarrassingly parallel, the final fold and the single commitment check
// stay sequential.

#include "poslo/poslo_c.hpp"

namespace poslo {

struct EpochKeyAggregate {
    uint32_t epoch = 0;
    Scalar e;  // sum of the epoch's per-entry challenge scalars
};

// Computes one EpochKeyAggregate per queried epoch on a pool of `workers`
// threads. Output is ordered by ascending epoch regardless of scheduling.
// Throws StateError for workers == 0; worker exceptions (SeedNotDisclosed,
// FormatError) propagate to the caller.
std::vector<EpochKeyAggregate> agg_ekeys(
    const SuiteConfig& suite,
    const std::map<uint32_t, std::vector<Bytes>>& batches, const SeedStack& ds,
    unsigned workers);

// Drop-in parallel replacement for aver: identical result on identical
// input, one commitment check total.
bool paver(const PoslocPublicKey& pk,
           const std::map<uint32_t, std::vector<Bytes>>& batches,
           const Scalar& s_hat, const std::optional<GroupElement>& r_hat_agg,
           const SeedStack& ds, unsigned workers);

}  // namespace poslo

#include "poslo/batch_verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace poslo {

std::vector<EpochKeyAggregate> agg_ekeys(
    const SuiteConfig& suite,
    const std::map<uint32_t, std::vector<Bytes>>& batches, const SeedStack& ds,
    unsigned workers) {
    if (workers == 0) throw StateError("worker count must be at least 1");

    struct Job {
        uint32_t epoch;
        const std::vector<Bytes>* msgs;
    };
    std::vector<Job> jobs;
    jobs.reserve(batches.size());
    for (const auto& [i, msgs] : batches) jobs.push_back({i, &msgs});

    std::vector<EpochKeyAggregate> out(jobs.size());
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mtx;

    auto run = [&] {
        try {
            for (size_t k = cursor.fetch_add(1); k < jobs.size();
                 k = cursor.fetch_add(1)) {
                const Job& job = jobs[k];
                Seed x0_i = sr(suite.suite, ds, job.epoch);
                Scalar e;
                for (uint32_t j = 0; j < job.msgs->size(); j++) {
                    Seed x_ij = onetime_seed(suite.suite, x0_i, j);
                    const Bytes& m = (*job.msgs)[j];
                    e = e.add(
                        hash_to_scalar(suite.suite, m.data(), m.size(), x_ij));
                }
                out[k] = EpochKeyAggregate{job.epoch, e};
            }
        } catch (...) {
            std::lock_guard lock(error_mtx);
            if (!first_error) first_error = std::current_exception();
        }
    };

    unsigned spawn = std::min<size_t>(workers, std::max<size_t>(jobs.size(), 1));
    if (spawn <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(spawn);
        for (unsigned w = 0; w < spawn; w++) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;  // jobs came from an ordered map, so out is epoch-ascending
}

bool paver(const PoslocPublicKey& pk,
           const std::map<uint32_t, std::vector<Bytes>>& batches,
           const Scalar& s_hat, const std::optional<GroupElement>& r_hat_agg,
           const SeedStack& ds, unsigned workers) {
    for (const auto& [i, msgs] : batches)
        if (msgs.size() != pk.suite.n2)
            throw StateError("every batch must hold exactly n2 entries");
    GroupElement r_hat;
    if (r_hat_agg) {
        r_hat = *r_hat_agg;
    } else {
        for (const auto& [i, msgs] : batches) {
            auto it = pk.r_hats.find(i);
            if (it == pk.r_hats.end())
                throw StateError("commitment for epoch " + std::to_string(i) +
                                 " no longer in public key");
            r_hat = group_combine(r_hat, it->second);
        }
    }
    auto parts = agg_ekeys(pk.suite, batches, ds, workers);
    Scalar e_hat;
    for (const auto& p : parts) e_hat = e_hat.add(p.e);
    return commit_check(pk.y, e_hat, s_hat) == r_hat;
}

}  // namespace poslo

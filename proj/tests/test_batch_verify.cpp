#include <doctest.h>

#include "poslo/batch_verify.hpp"
#include "test_util.hpp"

using namespace poslo;

namespace {

struct Instance {
    PoslocPublicKey pk;
    std::map<uint32_t, std::vector<Bytes>> batches;
    Scalar s_hat;
    SeedStack ds;
};

Instance make_instance(SuiteConfig suite) {
    auto [sk, pk] = PoslocSecretKey::kg(suite);
    Instance inst{pk, {}, {}, SeedStack(suite.depth())};
    for (uint32_t i = 0; i < suite.n1; i++) {
        std::vector<Bytes> epoch;
        for (uint32_t j = 0; j < suite.n2; j++)
            epoch.push_back(random_bytes(1 + test_rng()() % 24));
        EpochSignature sig = sk.sig_epoch(epoch);
        inst.s_hat = inst.s_hat.add(sig.s_hat);
        inst.ds = sig.ds;
        inst.batches.emplace(i, std::move(epoch));
    }
    return inst;
}

}  // namespace

TEST_CASE("parallel verification is bit-exact with the sequential one") {
    for (int trial = 0; trial < 20; trial++) {
        Instance inst = make_instance({SuiteId::Sha256, 4, 2, 2});
        bool tampered = trial % 2 == 1;
        if (tampered) inst.batches.at(test_rng()() % 4)[0][0] ^= 0x01;

        bool seq = aver(inst.pk, inst.batches, inst.s_hat, std::nullopt, inst.ds);
        Scalar e_seq = aggregate_ekey(inst.pk.suite, inst.batches, inst.ds);
        CHECK(seq == !tampered);
        for (unsigned workers : {1u, 2u, 4u, 8u}) {
            CHECK(paver(inst.pk, inst.batches, inst.s_hat, std::nullopt,
                        inst.ds, workers) == seq);
            auto parts = agg_ekeys(inst.pk.suite, inst.batches, inst.ds, workers);
            Scalar e_par;
            for (const auto& p : parts) e_par = e_par.add(p.e);
            CHECK(e_par == e_seq);
        }
    }
}

TEST_CASE("per-epoch aggregates come back in ascending epoch order") {
    Instance inst = make_instance({SuiteId::MmoMdc2, 8, 2, 2});
    auto parts = agg_ekeys(inst.pk.suite, inst.batches, inst.ds, 3);
    REQUIRE(parts.size() == 8);
    for (uint32_t i = 0; i < 8; i++) CHECK(parts[i].epoch == i);
    // each slot matches the sequential single-epoch aggregation
    for (uint32_t i = 0; i < 8; i++) {
        std::map<uint32_t, std::vector<Bytes>> one{{i, inst.batches.at(i)}};
        CHECK(parts[i].e == aggregate_ekey(inst.pk.suite, one, inst.ds));
    }
}

TEST_CASE("a zero worker count is a parameter error") {
    Instance inst = make_instance({SuiteId::Sha256, 2, 2, 1});
    CHECK_THROWS_AS(agg_ekeys(inst.pk.suite, inst.batches, inst.ds, 0),
                    StateError);
    CHECK_THROWS_AS(
        paver(inst.pk, inst.batches, inst.s_hat, std::nullopt, inst.ds, 0),
        StateError);
}

TEST_CASE("worker exceptions surface to the caller") {
    Instance inst = make_instance({SuiteId::Sha256, 2, 2, 1});
    inst.batches.emplace(5u, inst.batches.at(0));  // epoch 5 never disclosed
    CHECK_THROWS_AS(agg_ekeys(inst.pk.suite, inst.batches, inst.ds, 4),
                    SeedNotDisclosed);
}

TEST_CASE("one commitment check regardless of epoch count and workers") {
    for (uint32_t n1 : {2u, 8u}) {
        Instance inst = make_instance({SuiteId::Sha256, n1, 2, 2});
        for (unsigned workers : {1u, 4u}) {
            reset_group_op_counts();
            CHECK(paver(inst.pk, inst.batches, inst.s_hat, std::nullopt,
                        inst.ds, workers));
            auto c = group_op_counts();
            CHECK(c.double_exp == 1);
            CHECK(c.exp_base == 0);
            CHECK(c.exp_var == 0);
        }
    }
}

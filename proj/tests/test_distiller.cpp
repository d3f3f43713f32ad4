#include <doctest.h>

#include "poslo/distiller.hpp"
#include "test_util.hpp"

using namespace poslo;

namespace {

struct CoarseStream {
    SuiteConfig suite;
    PoslocPublicKey pk;
    std::map<uint32_t, std::vector<Bytes>> msgs;
    std::vector<EpochSignature> sigs;
};

CoarseStream make_stream(SuiteConfig suite) {
    auto [sk, pk] = PoslocSecretKey::kg(suite);
    CoarseStream st{suite, pk, {}, {}};
    for (uint32_t i = 0; i < suite.n1; i++) {
        std::vector<Bytes> epoch;
        size_t max_len = suite.suite == SuiteId::MmoAddQ ? 16 : 32;
        for (uint32_t j = 0; j < suite.n2; j++)
            epoch.push_back(random_bytes(1 + test_rng()() % max_len));
        st.sigs.push_back(sk.sig_epoch(epoch));
        st.msgs.emplace(i, std::move(epoch));
    }
    return st;
}

ColdCryptoData distill_all(CoarseStream& st) {
    ColdCryptoData ccd(CcdScheme::Coarse, st.suite);
    PoslocPublicKey pk = st.pk;
    for (uint32_t i = 0; i < st.suite.n1; i++)
        ccd.distill_epoch(pk, st.msgs.at(i), st.sigs[i]);
    ccd.finalize();
    return ccd;
}

}  // namespace

TEST_CASE("clean stream distills with no invalid records, all modes pass") {
    CoarseStream st = make_stream({SuiteId::Sha256, 8, 3, 4});
    ColdCryptoData ccd = distill_all(st);
    CHECK(ccd.invalid().empty());
    CHECK(ccd.umbrellas().size() == 4);
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::V) == std::vector<bool>{true});
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::U) ==
          std::vector<bool>(4, true));
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::I).empty());
}

TEST_CASE("a tampered epoch is isolated at distillation time") {
    CoarseStream st = make_stream({SuiteId::MmoMdc2, 8, 2, 4});
    st.msgs.at(3)[1][0] ^= 0x40;  // corrupt one entry of epoch 3
    ColdCryptoData ccd = distill_all(st);
    REQUIRE(ccd.invalid().size() == 1);
    CHECK(ccd.invalid()[0].index == 3);
    // remaining aggregate still verifies
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::V) == std::vector<bool>{true});
    // only the umbrella containing epoch 3 excludes it, all umbrellas pass
    auto u = ccd.sebver(st.pk.y, st.msgs, SebverMode::U);
    CHECK(u == std::vector<bool>(4, true));
    // mode I re-checks the quarantined epoch against the (bad) messages
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::I) == std::vector<bool>{false});
    // against the original message it verifies: the log was bad, not the tag
    st.msgs.at(3)[1][0] ^= 0x40;
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::I) == std::vector<bool>{true});
}

TEST_CASE("conservation: umbrellas plus invalid records rebuild the whole") {
    CoarseStream st = make_stream({SuiteId::Sha256, 8, 2, 2});
    st.msgs.at(1)[0][0] ^= 0x01;
    st.msgs.at(6)[1][2] ^= 0x10;
    ColdCryptoData ccd = distill_all(st);
    REQUIRE(ccd.invalid().size() == 2);

    Scalar s_total;
    GroupElement r_total;
    for (const auto& u : ccd.umbrellas()) {
        s_total = s_total.add(u.sig.s);
        r_total = group_combine(r_total, u.sig.r);
    }
    CHECK(s_total == ccd.valid().s);  // umbrellas partition the valid fold
    CHECK(r_total == ccd.valid().r);
    for (const auto& rec : ccd.invalid()) {
        s_total = s_total.add(rec.sig.s);
        r_total = group_combine(r_total, rec.sig.r);
    }
    Scalar s_all;
    GroupElement r_all;
    for (uint32_t i = 0; i < st.suite.n1; i++) {
        s_all = s_all.add(st.sigs[i].s_hat);
        r_all = group_combine(r_all, st.pk.r_hats.at(i));
    }
    CHECK(s_total == s_all);
    CHECK(r_total == r_all);
}

TEST_CASE("post-distillation log corruption is localized to one umbrella") {
    CoarseStream st = make_stream({SuiteId::Sha256, 8, 2, 4});
    ColdCryptoData ccd = distill_all(st);
    // umbrella width 2: corrupt a message inside umbrella 2 (epochs 4-5)
    st.msgs.at(5)[0][0] ^= 0x02;
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::V) ==
          std::vector<bool>{false});
    CHECK(ccd.sebver(st.pk.y, st.msgs, SebverMode::U) ==
          std::vector<bool>{true, true, false, true});
}

TEST_CASE("fine-grained distillation quarantines single entries") {
    SuiteConfig suite{SuiteId::Sha256, 4, 3, 2};
    auto [sk, pk] = PoslofSecretKey::kg(suite, 16, 2);
    std::map<uint32_t, std::vector<Bytes>> msgs;
    std::vector<std::vector<FineSignature>> sigs(suite.n1);
    for (uint32_t i = 0; i < suite.n1; i++)
        for (uint32_t j = 0; j < suite.n2; j++) {
            msgs[i].push_back(random_bytes(20));
            sigs[i].push_back(sk.sig_one(msgs[i][j]));
        }
    msgs.at(2)[1][5] ^= 0x08;  // global entry index 7

    ColdCryptoData ccd(CcdScheme::Fine, suite);
    for (uint32_t i = 0; i < suite.n1; i++)
        ccd.distill_epoch_fine(pk, msgs.at(i), sigs[i]);
    ccd.finalize();

    REQUIRE(ccd.invalid().size() == 1);
    CHECK(ccd.invalid()[0].index == 7);
    CHECK(ccd.sebver(pk.y, msgs, SebverMode::V) == std::vector<bool>{true});
    CHECK(ccd.sebver(pk.y, msgs, SebverMode::U) == std::vector<bool>(2, true));
    CHECK(ccd.sebver(pk.y, msgs, SebverMode::I) == std::vector<bool>{false});
    msgs.at(2)[1][5] ^= 0x08;
    CHECK(ccd.sebver(pk.y, msgs, SebverMode::I) == std::vector<bool>{true});
}

TEST_CASE("cold data round-trips byte-identically and is checksummed") {
    CoarseStream st = make_stream({SuiteId::MmoAddQ, 4, 2, 2});
    st.msgs.at(0)[0][0] ^= 0x01;
    ColdCryptoData ccd = distill_all(st);
    Bytes wire = ccd.serialize();
    ColdCryptoData back = ColdCryptoData::deserialize(wire);
    CHECK(back.serialize() == wire);
    CHECK(back.epochs_distilled() == 4);
    CHECK(back.invalid().size() == 1);
    CHECK(back.sebver(st.pk.y, st.msgs, SebverMode::V) ==
          ccd.sebver(st.pk.y, st.msgs, SebverMode::V));

    Bytes bad = wire;
    bad[10] ^= 0x01;
    CHECK_THROWS_AS(ColdCryptoData::deserialize(bad), FormatError);
    Bytes trunc(wire.begin(), wire.end() - 5);
    CHECK_THROWS_AS(ColdCryptoData::deserialize(trunc), FormatError);
}

TEST_CASE("partial streams flush a trailing umbrella on finalize") {
    CoarseStream st = make_stream({SuiteId::Sha256, 8, 2, 4});
    ColdCryptoData ccd(CcdScheme::Coarse, st.suite);
    PoslocPublicKey pk = st.pk;
    for (uint32_t i = 0; i < 5; i++)  // stop mid-umbrella
        ccd.distill_epoch(pk, st.msgs.at(i), st.sigs[i]);
    ccd.finalize();
    REQUIRE(ccd.umbrellas().size() == 3);
    CHECK(ccd.umbrellas().back().index == 2);
    // conservation still holds over the distilled prefix
    Scalar s_total;
    for (const auto& u : ccd.umbrellas()) s_total = s_total.add(u.sig.s);
    CHECK(s_total == ccd.valid().s);
}

TEST_CASE("cold-data size does not grow with the stream length") {
    CoarseStream a = make_stream({SuiteId::Sha256, 4, 2, 4});
    CoarseStream b = make_stream({SuiteId::Sha256, 16, 2, 4});
    ColdCryptoData ca = distill_all(a), cb = distill_all(b);
    CHECK(ca.serialize().size() == cb.serialize().size());
}

TEST_CASE("distillation guards its stream discipline") {
    CoarseStream st = make_stream({SuiteId::Sha256, 2, 2, 1});
    ColdCryptoData ccd = distill_all(st);
    PoslocPublicKey pk = st.pk;
    CHECK_THROWS_AS(ccd.distill_epoch(pk, st.msgs.at(0), st.sigs[0]),
                    StateError);
    ColdCryptoData fresh(CcdScheme::Coarse, st.suite);
    PoslocPublicKey stripped = st.pk;
    stripped.r_hats.erase(0);
    CHECK_THROWS_AS(fresh.distill_epoch(stripped, st.msgs.at(0), st.sigs[0]),
                    StateError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gmp.h>

#include "poslo/group.hpp"
#include "test_util.hpp"

using namespace poslo;

namespace {

// Group order of ristretto255: 2^252 + 27742317777372353535851937790883648493.
void set_order(mpz_t q) {
    mpz_set_str(q,
                "1000000000000000000000000000000014def9dea2f79cd65812631a5cf5d3ed",
                16);
}

void mpz_from_le(mpz_t out, const uint8_t* p, size_t len) {
    mpz_import(out, len, -1, 1, 0, 0, p);
}

Scalar scalar_from_mpz(const mpz_t v) {
    std::array<uint8_t, 64> be{};
    size_t count = 0;
    mpz_export(be.data(), &count, 1, 1, 0, 0, v);
    // right-align into the last 64 bytes
    std::array<uint8_t, 64> buf{};
    std::copy(be.begin(), be.begin() + count, buf.begin() + (64 - count));
    return Scalar::reduce_wide_be(buf.data(), 64);
}

Scalar random_scalar_and_mpz(mpz_t out, const mpz_t q) {
    Scalar s = Scalar::random();
    mpz_from_le(out, s.le_bytes().data(), 32);
    REQUIRE(mpz_cmp(out, q) < 0);
    return s;
}

}  // namespace

TEST_CASE("scalar add/sub/mul match big-integer arithmetic mod q") {
    mpz_t q, a, b, r, got;
    mpz_inits(q, a, b, r, got, nullptr);
    set_order(q);
    for (int trial = 0; trial < 200; trial++) {
        Scalar sa = random_scalar_and_mpz(a, q);
        Scalar sb = random_scalar_and_mpz(b, q);

        mpz_add(r, a, b);
        mpz_mod(r, r, q);
        mpz_from_le(got, sa.add(sb).le_bytes().data(), 32);
        CHECK(mpz_cmp(got, r) == 0);

        mpz_sub(r, a, b);
        mpz_mod(r, r, q);
        mpz_from_le(got, sa.sub(sb).le_bytes().data(), 32);
        CHECK(mpz_cmp(got, r) == 0);

        mpz_mul(r, a, b);
        mpz_mod(r, r, q);
        mpz_from_le(got, sa.mul(sb).le_bytes().data(), 32);
        CHECK(mpz_cmp(got, r) == 0);
    }
    mpz_clears(q, a, b, r, got, nullptr);
}

TEST_CASE("wide reduction matches big-integer mod q") {
    mpz_t q, v, r, got;
    mpz_inits(q, v, r, got, nullptr);
    set_order(q);
    for (int trial = 0; trial < 200; trial++) {
        Bytes wide = random_bytes(64);
        mpz_import(v, wide.size(), 1, 1, 0, 0, wide.data());
        mpz_mod(r, v, q);
        Scalar s = Scalar::reduce_wide_be(wide.data(), wide.size());
        mpz_from_le(got, s.le_bytes().data(), 32);
        CHECK(mpz_cmp(got, r) == 0);
    }
    mpz_clears(q, v, r, got, nullptr);
}

TEST_CASE("scalar big-endian serialization round-trips") {
    for (int trial = 0; trial < 50; trial++) {
        Scalar s = Scalar::random();
        auto be = s.be_bytes();
        CHECK(Scalar::from_be_bytes(be.data()) == s);
    }
}

TEST_CASE("non-canonical scalar encodings are rejected") {
    std::array<uint8_t, 32> q_le = {
        // little-endian group order: exactly q, the smallest bad value
        0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7,
        0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10};
    CHECK_THROWS_AS(Scalar::from_canonical_le(q_le.data()), FormatError);
    q_le[0] = 0xec;  // q - 1 is canonical
    CHECK_NOTHROW(Scalar::from_canonical_le(q_le.data()));
}

TEST_CASE("exponentiation is a homomorphism from Z_q") {
    mpz_t q, a, b, r;
    mpz_inits(q, a, b, r, nullptr);
    set_order(q);
    for (int trial = 0; trial < 20; trial++) {
        Scalar sa = random_scalar_and_mpz(a, q);
        Scalar sb = random_scalar_and_mpz(b, q);
        CHECK(exp_base(sa.add(sb)) ==
              group_combine(exp_base(sa), exp_base(sb)));
        CHECK(exp(exp_base(sa), sb) == exp_base(sa.mul(sb)));
    }
    mpz_clears(q, a, b, r, nullptr);
}

TEST_CASE("exponentiation by repeated addition (small exponents)") {
    for (uint32_t n : {0u, 1u, 2u, 3u, 7u, 33u}) {
        std::array<uint8_t, 64> be{};
        store_be32(be.data() + 60, n);
        Scalar sn = Scalar::reduce_wide_be(be.data(), 64);
        GroupElement expect;  // identity
        for (uint32_t k = 0; k < n; k++)
            expect = group_combine(expect, GroupElement::generator());
        CHECK(exp_base(sn) == expect);

        GroupElement p = exp_base(Scalar::random());
        GroupElement expect_var;
        for (uint32_t k = 0; k < n; k++) expect_var = group_combine(expect_var, p);
        CHECK(exp(p, sn) == expect_var);
    }
}

TEST_CASE("identity behavior") {
    Scalar zero;
    CHECK(exp_base(zero).is_identity());
    GroupElement p = exp_base(Scalar::random());
    CHECK(group_combine(p, GroupElement::identity()) == p);
    CHECK(group_combine(GroupElement::identity(), p) == p);
    CHECK(exp(p, zero).is_identity());
    CHECK(exp(GroupElement::identity(), Scalar::random()).is_identity());
}

TEST_CASE("commit_check equals Y^e * alpha^s built from primitive ops") {
    for (int trial = 0; trial < 20; trial++) {
        Scalar y = Scalar::random(), e = Scalar::random(), s = Scalar::random();
        GroupElement big_y = exp_base(y);
        GroupElement expect = group_combine(exp(big_y, e), exp_base(s));
        CHECK(commit_check(big_y, e, s) == expect);
    }
}

TEST_CASE("point encoding validation rejects junk") {
    std::array<uint8_t, 32> junk;
    junk.fill(0xff);
    CHECK_THROWS_AS(GroupElement::from_bytes(junk.data()), FormatError);
    GroupElement p = exp_base(Scalar::random());
    CHECK(GroupElement::from_bytes(p.bytes().data()) == p);
    std::array<uint8_t, 32> id{};
    CHECK(GroupElement::from_bytes(id.data()).is_identity());
}

TEST_CASE("operation counters are precise") {
    reset_group_op_counts();
    Scalar a = Scalar::random(), b = Scalar::random();
    auto c0 = group_op_counts();
    CHECK(c0.exp_base == 0);
    GroupElement p = exp_base(a);
    GroupElement r = exp(p, b);
    group_combine(p, r);
    commit_check(p, a, b);
    auto c1 = group_op_counts();
    CHECK(c1.exp_base == 1);
    CHECK(c1.exp_var == 1);
    CHECK(c1.combine == 1);
    CHECK(c1.double_exp == 1);
    reset_group_op_counts();
    CHECK(group_op_counts().exp_base == 0);
}

TEST_CASE("random scalars are nonzero and distinct") {
    Scalar a = Scalar::random(), b = Scalar::random();
    CHECK(!a.is_zero());
    CHECK(!(a == b));
}

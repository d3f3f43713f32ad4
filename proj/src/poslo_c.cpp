#include "poslo/poslo_c.hpp"

#include <sodium.h>

namespace poslo {

namespace {

constexpr char kSigMagic[] = "PSC1";
constexpr char kSkMagic[] = "PSKC";
constexpr char kPkMagic[] = "PPKC";

void put_suite_params(Bytes& out, const SuiteConfig& s) {
    out.push_back(static_cast<uint8_t>(s.suite));
    put_be32(out, s.n1);
    put_be32(out, s.n2);
    put_be32(out, s.n_u);
}

SuiteConfig read_suite_params(Reader& r) {
    SuiteConfig s;
    s.suite = static_cast<SuiteId>(r.u8());
    s.n1 = r.be32();
    s.n2 = r.be32();
    s.n_u = r.be32();
    s.validate();
    return s;
}

Seed random_seed() {
    Seed s;
    randombytes_buf(s.data(), s.size());
    return s;
}

}  // namespace

Bytes EpochSignature::serialize() const {
    Bytes out;
    out.insert(out.end(), kSigMagic, kSigMagic + 4);
    auto sb = s_hat.be_bytes();
    out.insert(out.end(), sb.begin(), sb.end());
    out.push_back(r_hat ? 0x01 : 0x00);
    if (r_hat)
        out.insert(out.end(), r_hat->bytes().begin(), r_hat->bytes().end());
    ds.serialize(out);
    return out;
}

EpochSignature EpochSignature::deserialize(Reader& r, uint32_t depth) {
    r.expect_magic(kSigMagic);
    EpochSignature sig;
    sig.s_hat = Scalar::from_be_bytes(r.take(kScalarBytes));
    uint8_t flag = r.u8();
    if (flag == 0x01)
        sig.r_hat = GroupElement::from_bytes(r.take(kPointBytes));
    else if (flag != 0x00)
        throw FormatError("bad commitment presence flag");
    sig.ds = SeedStack::deserialize(r, depth);
    return sig;
}

Bytes PoslocPublicKey::serialize() const {
    Bytes out;
    out.insert(out.end(), kPkMagic, kPkMagic + 4);
    put_suite_params(out, suite);
    out.insert(out.end(), y.bytes().begin(), y.bytes().end());
    put_be32(out, static_cast<uint32_t>(r_hats.size()));
    for (const auto& [i, r] : r_hats) {
        put_be32(out, i);
        out.insert(out.end(), r.bytes().begin(), r.bytes().end());
    }
    return out;
}

PoslocPublicKey PoslocPublicKey::deserialize(const Bytes& in) {
    Reader r(in);
    r.expect_magic(kPkMagic);
    PoslocPublicKey pk;
    pk.suite = read_suite_params(r);
    pk.y = GroupElement::from_bytes(r.take(kPointBytes));
    uint32_t count = r.be32();
    for (uint32_t k = 0; k < count; k++) {
        uint32_t i = r.be32();
        pk.r_hats.emplace(i, GroupElement::from_bytes(r.take(kPointBytes)));
    }
    r.expect_end();
    return pk;
}

std::pair<PoslocSecretKey, PoslocPublicKey> PoslocSecretKey::kg(
    const SuiteConfig& suite) {
    suite.validate();
    PoslocSecretKey sk;
    sk.suite_ = suite;
    do {
        sk.y_ = Scalar::random();
    } while (sk.y_.is_zero());
    sk.r_ = random_seed();
    sk.root_ = SeedNode{static_cast<uint8_t>(suite.depth()), 0, random_seed()};
    sk.ds_ = SeedStack(suite.depth());

    PoslocPublicKey pk;
    pk.suite = suite;
    pk.y = exp_base(sk.y_);
    for (uint32_t i = 0; i < suite.n1; i++) {
        Scalar r_sum;
        for (uint32_t j = 0; j < suite.n2; j++)
            r_sum = r_sum.add(nonce_to_scalar(suite.suite, sk.r_, i, j));
        pk.r_hats.emplace(i, exp_base(r_sum));
    }
    return {std::move(sk), std::move(pk)};
}

EpochSignature PoslocSecretKey::sig_epoch(const std::vector<Bytes>& msgs) {
    if (next_epoch_ >= suite_.n1) throw StateError("epochs exhausted");
    if (msgs.size() != suite_.n2)
        throw StateError("epoch batch must hold exactly n2 entries");
    uint32_t i = next_epoch_;
    Seed x0_i = so(suite_.suite, ds_, root_, i);
    Scalar s_sum;
    for (uint32_t j = 0; j < suite_.n2; j++) {
        Seed x_ij = onetime_seed(suite_.suite, x0_i, j);
        Scalar e = hash_to_scalar(suite_.suite, msgs[j].data(), msgs[j].size(),
                                  x_ij);
        Scalar r = nonce_to_scalar(suite_.suite, r_, i, j);
        s_sum = s_sum.add(r.sub(e.mul(y_)));
    }
    next_epoch_++;
    EpochSignature sig;
    sig.s_hat = s_sum;
    sig.ds = ds_;
    return sig;
}

Bytes PoslocSecretKey::serialize() const {
    Bytes out;
    out.insert(out.end(), kSkMagic, kSkMagic + 4);
    put_suite_params(out, suite_);
    auto yb = y_.be_bytes();
    out.insert(out.end(), yb.begin(), yb.end());
    out.insert(out.end(), r_.begin(), r_.end());
    out.insert(out.end(), root_.value.begin(), root_.value.end());
    put_be32(out, next_epoch_);
    ds_.serialize(out);
    return out;
}

PoslocSecretKey PoslocSecretKey::deserialize(const Bytes& in) {
    Reader r(in);
    r.expect_magic(kSkMagic);
    PoslocSecretKey sk;
    sk.suite_ = read_suite_params(r);
    sk.y_ = Scalar::from_be_bytes(r.take(kScalarBytes));
    std::memcpy(sk.r_.data(), r.take(kSeedBytes), kSeedBytes);
    sk.root_ = SeedNode{static_cast<uint8_t>(sk.suite_.depth()), 0, Seed{}};
    std::memcpy(sk.root_.value.data(), r.take(kSeedBytes), kSeedBytes);
    sk.next_epoch_ = r.be32();
    sk.ds_ = SeedStack::deserialize(r, sk.suite_.depth());
    r.expect_end();
    if (sk.next_epoch_ > sk.suite_.n1) throw FormatError("epoch out of range");
    return sk;
}

Scalar agg_scalars(const std::vector<Scalar>& parts) {
    Scalar sum;
    for (const auto& p : parts) sum = sum.add(p);
    return sum;
}

GroupElement agg_elements(const std::vector<GroupElement>& parts) {
    GroupElement acc;
    for (const auto& p : parts) acc = group_combine(acc, p);
    return acc;
}

Scalar aggregate_ekey(const SuiteConfig& suite,
                      const std::map<uint32_t, std::vector<Bytes>>& batches,
                      const SeedStack& ds) {
    Scalar e_sum;
    for (const auto& [i, msgs] : batches) {
        Seed x0_i = sr(suite.suite, ds, i);
        for (uint32_t j = 0; j < msgs.size(); j++) {
            Seed x_ij = onetime_seed(suite.suite, x0_i, j);
            e_sum = e_sum.add(hash_to_scalar(suite.suite, msgs[j].data(),
                                             msgs[j].size(), x_ij));
        }
    }
    return e_sum;
}

bool aver(const PoslocPublicKey& pk,
          const std::map<uint32_t, std::vector<Bytes>>& batches,
          const Scalar& s_hat, const std::optional<GroupElement>& r_hat_agg,
          const SeedStack& ds) {
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
    Scalar e_hat = aggregate_ekey(pk.suite, batches, ds);
    return commit_check(pk.y, e_hat, s_hat) == r_hat;
}

}  // namespace poslo

#include "poslo/poslo_f.hpp"

#include <sodium.h>

namespace poslo {

namespace {

constexpr char kSigMagic[] = "PSF1";
constexpr char kSkMagic[] = "PSKF";
constexpr char kPkMagic[] = "PPKF";

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

}  // namespace

BpvTable BpvTable::offline(uint32_t v, uint32_t k) {
    if (k < 1 || k > v) throw FormatError("BPV requires 1 <= k <= v");
    BpvTable t;
    t.v = v;
    t.k = k;
    t.pairs.reserve(v);
    for (uint32_t i = 0; i < v; i++) {
        Scalar r;
        do {
            r = Scalar::random();
        } while (r.is_zero());
        GroupElement big_r = exp_base(r);
        t.pairs.emplace_back(r, big_r);
    }
    return t;
}

std::pair<Scalar, GroupElement> BpvTable::online() const {
    // k distinct indices via partial Fisher-Yates.
    std::vector<uint32_t> idx(v);
    for (uint32_t i = 0; i < v; i++) idx[i] = i;
    for (uint32_t i = 0; i < k; i++) {
        uint32_t j = i + randombytes_uniform(v - i);
        std::swap(idx[i], idx[j]);
    }
    Scalar r;
    GroupElement big_r;
    for (uint32_t i = 0; i < k; i++) {
        r = r.add(pairs[idx[i]].first);
        big_r = group_combine(big_r, pairs[idx[i]].second);
    }
    return {r, big_r};
}

Bytes FineSignature::serialize() const {
    Bytes out;
    out.insert(out.end(), kSigMagic, kSigMagic + 4);
    auto sb = s.be_bytes();
    out.insert(out.end(), sb.begin(), sb.end());
    out.insert(out.end(), r.bytes().begin(), r.bytes().end());
    if (const Seed* x = std::get_if<Seed>(&tail)) {
        out.push_back(0x00);
        out.insert(out.end(), x->begin(), x->end());
    } else {
        out.push_back(0x01);
        std::get<SeedStack>(tail).serialize(out);
    }
    return out;
}

FineSignature FineSignature::deserialize(Reader& rd, uint32_t depth) {
    rd.expect_magic(kSigMagic);
    FineSignature sig;
    sig.s = Scalar::from_be_bytes(rd.take(kScalarBytes));
    sig.r = GroupElement::from_bytes(rd.take(kPointBytes));
    uint8_t tag = rd.u8();
    if (tag == 0x00) {
        Seed x;
        std::memcpy(x.data(), rd.take(kSeedBytes), kSeedBytes);
        sig.tail = x;
    } else if (tag == 0x01) {
        sig.tail = SeedStack::deserialize(rd, depth);
    } else {
        throw FormatError("bad tail tag");
    }
    return sig;
}

Bytes PoslofPublicKey::serialize() const {
    Bytes out;
    out.insert(out.end(), kPkMagic, kPkMagic + 4);
    put_suite_params(out, suite);
    out.insert(out.end(), y.bytes().begin(), y.bytes().end());
    return out;
}

PoslofPublicKey PoslofPublicKey::deserialize(const Bytes& in) {
    Reader r(in);
    r.expect_magic(kPkMagic);
    PoslofPublicKey pk;
    pk.suite = read_suite_params(r);
    pk.y = GroupElement::from_bytes(r.take(kPointBytes));
    r.expect_end();
    return pk;
}

std::pair<PoslofSecretKey, PoslofPublicKey> PoslofSecretKey::kg(
    const SuiteConfig& suite, uint32_t bpv_v, uint32_t bpv_k) {
    suite.validate();
    PoslofSecretKey sk;
    sk.suite_ = suite;
    do {
        sk.y_ = Scalar::random();
    } while (sk.y_.is_zero());
    randombytes_buf(sk.r_.data(), sk.r_.size());
    Seed root_seed;
    randombytes_buf(root_seed.data(), root_seed.size());
    sk.root_ = SeedNode{static_cast<uint8_t>(suite.depth()), 0, root_seed};
    sk.ds_ = SeedStack(suite.depth());
    if (bpv_v > 0) sk.gamma_ = BpvTable::offline(bpv_v, bpv_k);

    PoslofPublicKey pk;
    pk.suite = suite;
    pk.y = exp_base(sk.y_);
    return {std::move(sk), std::move(pk)};
}

FineSignature PoslofSecretKey::sig_one(const Bytes& msg) {
    uint64_t n = uint64_t(suite_.n1) * suite_.n2;
    if (t_ >= n) throw StateError("entry counter exhausted");
    uint32_t i = t_ / suite_.n2;
    uint32_t j = t_ % suite_.n2;
    if (j == 0) x0_cur_ = so(suite_.suite, ds_, root_, i);

    Scalar r_t;
    GroupElement big_r;
    if (gamma_) {
        std::tie(r_t, big_r) = gamma_->online();
    } else {
        do {
            r_t = Scalar::random();
        } while (r_t.is_zero());
        big_r = exp_base(r_t);
    }
    Seed x_t = onetime_seed(suite_.suite, x0_cur_, j);
    Scalar e = hash_to_scalar(suite_.suite, msg.data(), msg.size(), x_t);
    FineSignature sig;
    sig.s = r_t.sub(e.mul(y_));
    sig.r = big_r;
    if (j == suite_.n2 - 1)
        sig.tail = ds_;
    else
        sig.tail = x_t;
    t_++;
    return sig;
}

Bytes PoslofSecretKey::serialize() const {
    Bytes out;
    out.insert(out.end(), kSkMagic, kSkMagic + 4);
    put_suite_params(out, suite_);
    put_be32(out, gamma_ ? gamma_->v : 0);
    put_be32(out, gamma_ ? gamma_->k : 0);
    auto yb = y_.be_bytes();
    out.insert(out.end(), yb.begin(), yb.end());
    out.insert(out.end(), r_.begin(), r_.end());
    out.insert(out.end(), root_.value.begin(), root_.value.end());
    put_be32(out, t_);
    out.insert(out.end(), x0_cur_.begin(), x0_cur_.end());
    ds_.serialize(out);
    if (gamma_) {
        for (const auto& [r, big_r] : gamma_->pairs) {
            auto rb = r.be_bytes();
            out.insert(out.end(), rb.begin(), rb.end());
            out.insert(out.end(), big_r.bytes().begin(), big_r.bytes().end());
        }
    }
    return out;
}

PoslofSecretKey PoslofSecretKey::deserialize(const Bytes& in) {
    Reader r(in);
    r.expect_magic(kSkMagic);
    PoslofSecretKey sk;
    sk.suite_ = read_suite_params(r);
    uint32_t v = r.be32();
    uint32_t k = r.be32();
    sk.y_ = Scalar::from_be_bytes(r.take(kScalarBytes));
    std::memcpy(sk.r_.data(), r.take(kSeedBytes), kSeedBytes);
    sk.root_ = SeedNode{static_cast<uint8_t>(sk.suite_.depth()), 0, Seed{}};
    std::memcpy(sk.root_.value.data(), r.take(kSeedBytes), kSeedBytes);
    sk.t_ = r.be32();
    std::memcpy(sk.x0_cur_.data(), r.take(kSeedBytes), kSeedBytes);
    sk.ds_ = SeedStack::deserialize(r, sk.suite_.depth());
    if (v > 0) {
        BpvTable t;
        t.v = v;
        t.k = k;
        if (k < 1 || k > v) throw FormatError("bad BPV parameters");
        t.pairs.reserve(v);
        for (uint32_t i = 0; i < v; i++) {
            Scalar rs = Scalar::from_be_bytes(r.take(kScalarBytes));
            GroupElement re = GroupElement::from_bytes(r.take(kPointBytes));
            t.pairs.emplace_back(rs, re);
        }
        sk.gamma_ = std::move(t);
    }
    r.expect_end();
    return sk;
}

bool aver_f_single(const PoslofPublicKey& pk, const Bytes& msg,
                   const FineSignature& sig) {
    const Seed* x = std::get_if<Seed>(&sig.tail);
    if (!x)
        throw FormatError(
            "single-entry verification needs the seed tail, not ds");
    Scalar e = hash_to_scalar(pk.suite.suite, msg.data(), msg.size(), *x);
    return commit_check(pk.y, e, sig.s) == sig.r;
}

bool aver_f_batch(const PoslofPublicKey& pk,
                  const std::map<uint32_t, Bytes>& entries, const Scalar& s,
                  const GroupElement& r, const SeedStack& ds) {
    Scalar e_sum;
    for (const auto& [t, msg] : entries) {
        uint32_t i = t / pk.suite.n2;
        uint32_t j = t % pk.suite.n2;
        Seed x0_i = sr(pk.suite.suite, ds, i);
        Seed x_t = onetime_seed(pk.suite.suite, x0_i, j);
        e_sum = e_sum.add(
            hash_to_scalar(pk.suite.suite, msg.data(), msg.size(), x_t));
    }
    return commit_check(pk.y, e_sum, s) == r;
}

}  // namespace poslo

#include "poslo/distiller.hpp"

#include <zlib.h>

#include <algorithm>

namespace poslo {

namespace {

constexpr char kCcdMagic[] = "PCCD";

void put_pair(Bytes& out, const AggregatePair& p) {
    auto sb = p.s.be_bytes();
    out.insert(out.end(), sb.begin(), sb.end());
    out.insert(out.end(), p.r.bytes().begin(), p.r.bytes().end());
}

AggregatePair read_pair(Reader& r) {
    AggregatePair p;
    p.s = Scalar::from_be_bytes(r.take(kScalarBytes));
    p.r = GroupElement::from_bytes(r.take(kPointBytes));
    return p;
}

}  // namespace

ColdCryptoData::ColdCryptoData(CcdScheme scheme, const SuiteConfig& suite)
    : scheme_(scheme), suite_(suite), ds_(suite.depth()) {
    suite.validate();
}

const AggregatePair& ColdCryptoData::valid() const {
    if (!has_valid_) throw StateError("no valid aggregate distilled yet");
    return valid_;
}

bool ColdCryptoData::epoch_invalid(uint32_t epoch) const {
    if (scheme_ == CcdScheme::Coarse)
        return std::any_of(invalid_.begin(), invalid_.end(),
                           [&](const InvalidRecord& x) { return x.index == epoch; });
    return false;
}

void ColdCryptoData::fold_valid(const Scalar& s, const GroupElement& r,
                                uint32_t) {
    valid_.s = valid_.s.add(s);
    valid_.r = group_combine(valid_.r, r);
    has_valid_ = true;
    umb_acc_.s = umb_acc_.s.add(s);
    umb_acc_.r = group_combine(umb_acc_.r, r);
    umb_acc_nonempty_ = true;
}

void ColdCryptoData::record_invalid(uint32_t index, const Scalar& s,
                                    const GroupElement& r) {
    invalid_.push_back(InvalidRecord{index, AggregatePair{s, r}});
}

void ColdCryptoData::distill_epoch(PoslocPublicKey& pk,
                                   const std::vector<Bytes>& msgs,
                                   const EpochSignature& sig) {
    if (scheme_ != CcdScheme::Coarse)
        throw StateError("coarse distillation on a fine-grained stream");
    if (next_epoch_ >= suite_.n1) throw StateError("stream already complete");
    uint32_t i = next_epoch_;
    auto it = pk.r_hats.find(i);
    if (it == pk.r_hats.end())
        throw StateError("epoch " + std::to_string(i) +
                         " already distilled (commitment gone)");
    GroupElement r_i = it->second;

    std::map<uint32_t, std::vector<Bytes>> batch{{i, msgs}};
    bool ok = aver(pk, batch, sig.s_hat, std::nullopt, sig.ds);
    if (ok)
        fold_valid(sig.s_hat, r_i, i);
    else
        record_invalid(i, sig.s_hat, r_i);

    pk.r_hats.erase(it);
    ds_ = sig.ds;
    next_epoch_++;
    if (next_epoch_ % umbrella_width() == 0) {
        uint32_t u = (next_epoch_ - 1) / umbrella_width();
        umbrellas_.push_back(UmbrellaRecord{u, umb_acc_});
        umb_acc_ = AggregatePair{};
        umb_acc_nonempty_ = false;
    }
}

void ColdCryptoData::distill_epoch_fine(const PoslofPublicKey& pk,
                                        const std::vector<Bytes>& msgs,
                                        const std::vector<FineSignature>& sigs) {
    if (scheme_ != CcdScheme::Fine)
        throw StateError("fine distillation on a coarse stream");
    if (next_epoch_ >= suite_.n1) throw StateError("stream already complete");
    if (msgs.size() != suite_.n2 || sigs.size() != suite_.n2)
        throw StateError("epoch must hold exactly n2 entries and signatures");
    uint32_t i = next_epoch_;
    if (!sigs.back().carries_ds())
        throw FormatError("last entry of the epoch must carry ds");
    SeedStack ds_new = std::get<SeedStack>(sigs.back().tail);

    for (uint32_t j = 0; j < suite_.n2; j++) {
        uint32_t t = i * suite_.n2 + j;
        bool ok;
        if (sigs[j].carries_ds()) {
            Seed x0_i = sr(suite_.suite, ds_new, i);
            Seed x_t = onetime_seed(suite_.suite, x0_i, j);
            Scalar e = hash_to_scalar(suite_.suite, msgs[j].data(),
                                      msgs[j].size(), x_t);
            ok = commit_check(pk.y, e, sigs[j].s) == sigs[j].r;
        } else {
            ok = aver_f_single(pk, msgs[j], sigs[j]);
        }
        if (ok)
            fold_valid(sigs[j].s, sigs[j].r, i);
        else
            record_invalid(t, sigs[j].s, sigs[j].r);
    }
    ds_ = ds_new;
    next_epoch_++;
    if (next_epoch_ % umbrella_width() == 0) {
        uint32_t u = (next_epoch_ - 1) / umbrella_width();
        umbrellas_.push_back(UmbrellaRecord{u, umb_acc_});
        umb_acc_ = AggregatePair{};
        umb_acc_nonempty_ = false;
    }
}

void ColdCryptoData::finalize() {
    if (umb_acc_nonempty_) {
        umbrellas_.push_back(
            UmbrellaRecord{(next_epoch_ - 1) / umbrella_width(), umb_acc_});
        umb_acc_ = AggregatePair{};
        umb_acc_nonempty_ = false;
    }
}

std::map<uint32_t, std::vector<Bytes>> ColdCryptoData::collect_epochs(
    const std::map<uint32_t, std::vector<Bytes>>& all_msgs, uint32_t lo,
    uint32_t hi) const {
    std::map<uint32_t, std::vector<Bytes>> out;
    for (uint32_t i = lo; i < hi && i < next_epoch_; i++) {
        auto it = all_msgs.find(i);
        if (it == all_msgs.end())
            throw FormatError("messages for epoch " + std::to_string(i) +
                              " missing");
        if (it->second.size() != suite_.n2)
            throw FormatError("epoch batch size mismatch");
        out.emplace(i, it->second);
    }
    return out;
}

bool ColdCryptoData::verify_range(
    const GroupElement& y,
    const std::map<uint32_t, std::vector<Bytes>>& all_msgs, uint32_t lo,
    uint32_t hi, const AggregatePair& sig) const {
    Scalar e_sum;
    auto epochs = collect_epochs(all_msgs, lo, hi);
    for (const auto& [i, msgs] : epochs) {
        if (scheme_ == CcdScheme::Coarse && epoch_invalid(i)) continue;
        Seed x0_i = sr(suite_.suite, ds_, i);
        for (uint32_t j = 0; j < suite_.n2; j++) {
            if (scheme_ == CcdScheme::Fine) {
                uint32_t t = i * suite_.n2 + j;
                bool bad = std::any_of(
                    invalid_.begin(), invalid_.end(),
                    [&](const InvalidRecord& x) { return x.index == t; });
                if (bad) continue;
            }
            Seed x_ij = onetime_seed(suite_.suite, x0_i, j);
            e_sum = e_sum.add(hash_to_scalar(suite_.suite, msgs[j].data(),
                                             msgs[j].size(), x_ij));
        }
    }
    return commit_check(y, e_sum, sig.s) == sig.r;
}

std::vector<bool> ColdCryptoData::sebver(
    const GroupElement& y,
    const std::map<uint32_t, std::vector<Bytes>>& all_msgs,
    SebverMode mode) const {
    switch (mode) {
        case SebverMode::V: {
            if (!has_valid_)
                throw StateError("mode V needs a valid aggregate");
            return {verify_range(y, all_msgs, 0, next_epoch_, valid_)};
        }
        case SebverMode::U: {
            std::vector<bool> bits;
            bits.reserve(umbrellas_.size());
            uint32_t w = umbrella_width();
            for (const auto& u : umbrellas_)
                bits.push_back(verify_range(y, all_msgs, u.index * w,
                                            (u.index + 1) * w, u.sig));
            return bits;
        }
        case SebverMode::I: {
            std::vector<bool> bits;
            bits.reserve(invalid_.size());
            for (const auto& rec : invalid_) {
                Scalar e;
                if (scheme_ == CcdScheme::Coarse) {
                    auto it = all_msgs.find(rec.index);
                    if (it == all_msgs.end())
                        throw FormatError("messages for invalid epoch missing");
                    Seed x0_i = sr(suite_.suite, ds_, rec.index);
                    for (uint32_t j = 0; j < suite_.n2; j++) {
                        Seed x_ij = onetime_seed(suite_.suite, x0_i, j);
                        e = e.add(hash_to_scalar(suite_.suite,
                                                 it->second[j].data(),
                                                 it->second[j].size(), x_ij));
                    }
                } else {
                    uint32_t i = rec.index / suite_.n2;
                    uint32_t j = rec.index % suite_.n2;
                    auto it = all_msgs.find(i);
                    if (it == all_msgs.end() || it->second.size() <= j)
                        throw FormatError("message for invalid entry missing");
                    Seed x0_i = sr(suite_.suite, ds_, i);
                    Seed x_t = onetime_seed(suite_.suite, x0_i, j);
                    e = hash_to_scalar(suite_.suite, it->second[j].data(),
                                       it->second[j].size(), x_t);
                }
                bits.push_back(commit_check(y, e, rec.sig.s) == rec.sig.r);
            }
            return bits;
        }
    }
    throw StateError("unknown mode");
}

Bytes ColdCryptoData::serialize() const {
    Bytes out;
    out.insert(out.end(), kCcdMagic, kCcdMagic + 4);
    out.push_back(static_cast<uint8_t>(scheme_));
    out.push_back(static_cast<uint8_t>(suite_.suite));
    put_be32(out, suite_.n1);
    put_be32(out, suite_.n2);
    put_be32(out, suite_.n_u);
    put_be32(out, next_epoch_);
    out.push_back(has_valid_ ? 0x01 : 0x00);
    put_pair(out, valid_);  // identity sentinel when absent
    put_be32(out, static_cast<uint32_t>(umbrellas_.size()));
    for (const auto& u : umbrellas_) {
        put_be32(out, u.index);
        put_pair(out, u.sig);
    }
    put_be32(out, static_cast<uint32_t>(invalid_.size()));
    for (const auto& rec : invalid_) {
        put_be32(out, rec.index);
        put_pair(out, rec.sig);
    }
    ds_.serialize(out);
    uint32_t crc =
        static_cast<uint32_t>(crc32(0, out.data(), static_cast<uInt>(out.size())));
    put_be32(out, crc);
    return out;
}

ColdCryptoData ColdCryptoData::deserialize(const Bytes& in) {
    if (in.size() < 4) throw FormatError("truncated CCD");
    uint32_t stored = load_be32(in.data() + in.size() - 4);
    uint32_t actual = static_cast<uint32_t>(
        crc32(0, in.data(), static_cast<uInt>(in.size() - 4)));
    if (stored != actual) throw FormatError("CCD checksum mismatch");
    Reader r(in.data(), in.size() - 4);
    r.expect_magic(kCcdMagic);
    ColdCryptoData ccd;
    ccd.scheme_ = static_cast<CcdScheme>(r.u8());
    if (ccd.scheme_ != CcdScheme::Coarse && ccd.scheme_ != CcdScheme::Fine)
        throw FormatError("bad CCD scheme byte");
    ccd.suite_.suite = static_cast<SuiteId>(r.u8());
    ccd.suite_.n1 = r.be32();
    ccd.suite_.n2 = r.be32();
    ccd.suite_.n_u = r.be32();
    ccd.suite_.validate();
    ccd.next_epoch_ = r.be32();
    uint8_t flag = r.u8();
    if (flag > 1) throw FormatError("bad valid-aggregate flag");
    ccd.has_valid_ = flag == 1;
    ccd.valid_ = read_pair(r);
    uint32_t uc = r.be32();
    for (uint32_t k = 0; k < uc; k++) {
        UmbrellaRecord u;
        u.index = r.be32();
        u.sig = read_pair(r);
        ccd.umbrellas_.push_back(u);
    }
    uint32_t ic = r.be32();
    for (uint32_t k = 0; k < ic; k++) {
        InvalidRecord rec;
        rec.index = r.be32();
        rec.sig = read_pair(r);
        ccd.invalid_.push_back(rec);
    }
    ccd.ds_ = SeedStack::deserialize(r, ccd.suite_.depth());
    r.expect_end();
    return ccd;
}

}  // namespace poslo

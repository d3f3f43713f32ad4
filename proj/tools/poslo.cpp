#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "poslo/batch_verify.hpp"
#include "poslo/distiller.hpp"
#include "poslo/log_file.hpp"

namespace {

using namespace poslo;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitError = 2;

unsigned default_workers() {
    if (const char* env = std::getenv("POSLO_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

std::string magic_of(const Bytes& b) {
    if (b.size() < 4) throw FormatError("file too short for a magic header");
    return std::string(b.begin(), b.begin() + 4);
}

std::map<uint32_t, std::vector<Bytes>> epochs_of(const std::vector<Bytes>& recs,
                                                 uint32_t n2) {
    if (recs.empty() || recs.size() % n2 != 0)
        throw FormatError("record count must be a nonzero multiple of n2");
    std::map<uint32_t, std::vector<Bytes>> out;
    for (size_t t = 0; t < recs.size(); t++)
        out[static_cast<uint32_t>(t / n2)].push_back(recs[t]);
    return out;
}

int cmd_keygen(char scheme, int suite_no, uint32_t n1, uint32_t n2,
               uint32_t n_u, std::pair<uint32_t, uint32_t> bpv, bool no_bpv,
               const std::string& out_dir) {
    SuiteConfig suite{static_cast<SuiteId>(suite_no), n1, n2, n_u};
    suite.validate();
    std::filesystem::create_directories(out_dir);
    std::string sk_path = out_dir + "/poslo.sk";
    std::string pk_path = out_dir + "/poslo.pk";
    Bytes sk_bytes, pk_bytes;
    if (scheme == 'c') {
        auto [sk, pk] = PoslocSecretKey::kg(suite);
        sk_bytes = sk.serialize();
        pk_bytes = pk.serialize();
        std::cout << "scheme=c commitments=" << pk.r_hats.size() << "\n";
    } else {
        uint32_t v = no_bpv ? 0 : bpv.first;
        uint32_t k = no_bpv ? 0 : bpv.second;
        auto [sk, pk] = PoslofSecretKey::kg(suite, v, k);
        sk_bytes = sk.serialize();
        pk_bytes = pk.serialize();
        std::cout << "scheme=f bpv=" << (no_bpv ? "off" : "on") << "\n";
    }
    write_file_atomic(sk_path, sk_bytes);
    write_file_atomic(pk_path, pk_bytes);
    std::cout << "suite=" << suite_no << " n1=" << n1 << " n2=" << n2
              << " umbrella=" << n_u << "\n"
              << "sk=" << sk_path << " (" << sk_bytes.size() << " bytes)\n"
              << "pk=" << pk_path << " (" << pk_bytes.size() << " bytes)\n";
    return kExitOk;
}

int cmd_sign(const std::string& key_path, const std::string& input,
             const std::string& out) {
    Bytes sk_bytes = read_file(key_path);
    std::vector<Bytes> recs = read_log(input);
    std::vector<Bytes> sigs;
    std::string magic = magic_of(sk_bytes);
    if (magic == "PSKC") {
        PoslocSecretKey sk = PoslocSecretKey::deserialize(sk_bytes);
        uint32_t n2 = sk.suite().n2;
        if (recs.size() % n2 != 0)
            throw FormatError("record count must be a multiple of n2");
        for (size_t off = 0; off < recs.size(); off += n2) {
            std::vector<Bytes> epoch(recs.begin() + static_cast<ptrdiff_t>(off),
                                     recs.begin() +
                                         static_cast<ptrdiff_t>(off + n2));
            EpochSignature sig = sk.sig_epoch(epoch);
            write_file_atomic(key_path, sk.serialize());
            sigs.push_back(sig.serialize());
        }
        std::cout << "epochs_signed=" << recs.size() / n2 << "\n";
    } else if (magic == "PSKF") {
        PoslofSecretKey sk = PoslofSecretKey::deserialize(sk_bytes);
        uint32_t n2 = sk.suite().n2;
        for (size_t t = 0; t < recs.size(); t++) {
            FineSignature sig = sk.sig_one(recs[t]);
            // Persist once per epoch: the in-epoch state is recoverable
            // from the stored counter, nonce reuse is impossible either way.
            if ((t + 1) % n2 == 0 || t + 1 == recs.size())
                write_file_atomic(key_path, sk.serialize());
            sigs.push_back(sig.serialize());
        }
        std::cout << "entries_signed=" << recs.size() << "\n";
    } else {
        throw FormatError("not a secret-key file: " + key_path);
    }
    write_log(out, sigs);
    return kExitOk;
}

int cmd_distill(const std::string& pk_path, const std::string& logs,
                const std::string& sigs_path, const std::string& ccd_out) {
    Bytes pk_bytes = read_file(pk_path);
    std::vector<Bytes> recs = read_log(logs);
    std::vector<Bytes> sig_recs = read_log(sigs_path);
    std::string magic = magic_of(pk_bytes);
    Bytes ccd_bytes;
    size_t invalid_count = 0;
    if (magic == "PPKC") {
        PoslocPublicKey pk = PoslocPublicKey::deserialize(pk_bytes);
        auto epochs = epochs_of(recs, pk.suite.n2);
        if (sig_recs.size() != epochs.size())
            throw FormatError("need exactly one signature per epoch");
        ColdCryptoData ccd(CcdScheme::Coarse, pk.suite);
        for (const auto& [i, msgs] : epochs) {
            Reader rd(sig_recs[i].data(), sig_recs[i].size());
            EpochSignature sig =
                EpochSignature::deserialize(rd, pk.suite.depth());
            rd.expect_end();
            ccd.distill_epoch(pk, msgs, sig);
        }
        ccd.finalize();
        invalid_count = ccd.invalid().size();
        ccd_bytes = ccd.serialize();
    } else if (magic == "PPKF") {
        PoslofPublicKey pk = PoslofPublicKey::deserialize(pk_bytes);
        auto epochs = epochs_of(recs, pk.suite.n2);
        if (sig_recs.size() != recs.size())
            throw FormatError("need exactly one signature per entry");
        ColdCryptoData ccd(CcdScheme::Fine, pk.suite);
        for (const auto& [i, msgs] : epochs) {
            std::vector<FineSignature> sv;
            for (uint32_t j = 0; j < pk.suite.n2; j++) {
                const Bytes& raw = sig_recs[i * pk.suite.n2 + j];
                Reader rd(raw.data(), raw.size());
                sv.push_back(FineSignature::deserialize(rd, pk.suite.depth()));
                rd.expect_end();
            }
            ccd.distill_epoch_fine(pk, msgs, sv);
        }
        ccd.finalize();
        invalid_count = ccd.invalid().size();
        ccd_bytes = ccd.serialize();
    } else {
        throw FormatError("not a public-key file: " + pk_path);
    }
    write_file_atomic(ccd_out, ccd_bytes);
    size_t total = magic == "PPKC" ? sig_recs.size() : recs.size();
    std::cout << "valid=" << total - invalid_count
              << " invalid=" << invalid_count
              << " ccd_bytes=" << ccd_bytes.size() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& pk_path, const std::string& logs,
               const std::string& ccd_path, const std::string& mode_str,
               unsigned workers) {
    if (workers == 0) throw StateError("workers must be at least 1");
    Bytes pk_bytes = read_file(pk_path);
    ColdCryptoData ccd = ColdCryptoData::deserialize(read_file(ccd_path));
    auto all_msgs = epochs_of(read_log(logs), ccd.suite().n2);
    GroupElement y;
    std::string magic = magic_of(pk_bytes);
    if (magic == "PPKC")
        y = PoslocPublicKey::deserialize(pk_bytes).y;
    else if (magic == "PPKF")
        y = PoslofPublicKey::deserialize(pk_bytes).y;
    else
        throw FormatError("not a public-key file: " + pk_path);

    SebverMode mode;
    if (mode_str == "V")
        mode = SebverMode::V;
    else if (mode_str == "U")
        mode = SebverMode::U;
    else if (mode_str == "I")
        mode = SebverMode::I;
    else
        throw FormatError("mode must be V, U, or I");

    std::vector<bool> bits;
    if (mode == SebverMode::V && workers > 1 &&
        ccd.scheme() == CcdScheme::Coarse) {
        PoslocPublicKey pk = PoslocPublicKey::deserialize(pk_bytes);
        std::map<uint32_t, std::vector<Bytes>> batches;
        for (const auto& [i, msgs] : all_msgs) {
            bool bad = false;
            for (const auto& rec : ccd.invalid())
                if (rec.index == i) bad = true;
            if (!bad && i < ccd.epochs_distilled()) batches.emplace(i, msgs);
        }
        if (!ccd.has_valid()) throw StateError("mode V needs a valid aggregate");
        bits = {paver(pk, batches, ccd.valid().s, ccd.valid().r, ccd.ds(),
                      workers)};
    } else {
        bits = ccd.sebver(y, all_msgs, mode);
    }
    bool all = true;
    for (bool b : bits) {
        std::cout << (b ? 1 : 0) << "\n";
        all = all && b;
    }
    return all ? kExitOk : kExitInvalid;
}

int cmd_bench(int suite_no, uint32_t entries, uint32_t entry_size,
              unsigned workers) {
    if (workers == 0) throw StateError("workers must be at least 1");
    uint32_t n2 = 256;
    if (entries < n2) n2 = entries;
    uint32_t n1 = 1;
    while (n1 * n2 < entries) n1 <<= 1;
    SuiteConfig suite{static_cast<SuiteId>(suite_no), n1, n2,
                      std::min<uint32_t>(n1, 4)};
    suite.validate();

    auto [sk, pk] = PoslocSecretKey::kg(suite);
    std::vector<Bytes> epoch_msgs(n2, Bytes(entry_size, 0xa5));
    uint32_t total = n1 * n2;

    using clock = std::chrono::steady_clock;
    reset_group_op_counts();
    auto t0 = clock::now();
    std::map<uint32_t, std::vector<Bytes>> batches;
    Scalar s_hat;
    SeedStack ds(suite.depth());
    for (uint32_t i = 0; i < n1; i++) {
        EpochSignature sig = sk.sig_epoch(epoch_msgs);
        s_hat = s_hat.add(sig.s_hat);
        ds = sig.ds;
        batches.emplace(i, epoch_msgs);
    }
    double sign_s = std::chrono::duration<double>(clock::now() - t0).count();
    auto counts = group_op_counts();
    uint64_t sign_exps = counts.exp_base + counts.exp_var + counts.double_exp;

    t0 = clock::now();
    bool ok1 = aver(pk, batches, s_hat, std::nullopt, ds);
    double aver_s = std::chrono::duration<double>(clock::now() - t0).count();

    t0 = clock::now();
    bool ok2 = paver(pk, batches, s_hat, std::nullopt, ds, workers);
    double paver_s = std::chrono::duration<double>(clock::now() - t0).count();

    std::cout << "suite=" << suite_no << "\n"
              << "entries=" << total << "\n"
              << "entry_size=" << entry_size << "\n"
              << "workers=" << workers << "\n"
              << "sign_eps=" << static_cast<uint64_t>(total / sign_s) << "\n"
              << "sign_group_exps=" << sign_exps << "\n"
              << "aver_eps=" << static_cast<uint64_t>(total / aver_s) << "\n"
              << "paver_eps=" << static_cast<uint64_t>(total / paver_s) << "\n"
              << "aver_ok=" << ok1 << "\n"
              << "paver_ok=" << ok2 << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POSLO signer-optimal aggregate signatures for secure logs"};
    app.require_subcommand(1);

    std::string scheme = "c", out_dir = ".", key, input, out, pk, logs, sigs;
    std::string ccd, mode = "V";
    int suite_no = 1;
    uint32_t n1 = 8, n2 = 256, n_u = 2, entries = 1 << 16, entry_size = 64;
    std::pair<uint32_t, uint32_t> bpv{1024, 16};
    bool no_bpv = false;
    unsigned workers = default_workers();

    auto* kg = app.add_subcommand("keygen", "generate a key pair");
    kg->add_option("--scheme", scheme)->check(CLI::IsMember({"c", "f"}));
    kg->add_option("--suite", suite_no)->check(CLI::Range(1, 3));
    kg->add_option("--n1", n1);
    kg->add_option("--n2", n2);
    kg->add_option("--umbrella", n_u);
    kg->add_option("--bpv", bpv)->delimiter(',');
    kg->add_flag("--no-bpv", no_bpv);
    kg->add_option("--out", out_dir);

    auto* sg = app.add_subcommand("sign", "sign a log file");
    sg->add_option("--key", key)->required();
    sg->add_option("--input", input)->required();
    sg->add_option("--out", out)->required();

    auto* di = app.add_subcommand("distill", "verify and compress signatures");
    di->add_option("--pk", pk)->required();
    di->add_option("--logs", logs)->required();
    di->add_option("--sigs", sigs)->required();
    di->add_option("--ccd", ccd)->required();

    auto* ve = app.add_subcommand("verify", "check a distilled archive");
    ve->add_option("--pk", pk)->required();
    ve->add_option("--logs", logs)->required();
    ve->add_option("--ccd", ccd)->required();
    ve->add_option("--mode", mode)->check(CLI::IsMember({"V", "U", "I"}));
    ve->add_option("--workers", workers);

    auto* be = app.add_subcommand("bench", "throughput measurement");
    be->add_option("--suite", suite_no)->check(CLI::Range(1, 3));
    be->add_option("--entries", entries);
    be->add_option("--entry-size", entry_size);
    be->add_option("--workers", workers);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (kg->parsed())
            return cmd_keygen(scheme[0], suite_no, n1, n2, n_u, bpv, no_bpv,
                              out_dir);
        if (sg->parsed()) return cmd_sign(key, input, out);
        if (di->parsed()) return cmd_distill(pk, logs, sigs, ccd);
        if (ve->parsed()) return cmd_verify(pk, logs, ccd, mode, workers);
        if (be->parsed())
            return cmd_bench(suite_no, entries, entry_size, workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

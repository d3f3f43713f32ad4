#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "poslo/distiller.hpp"
#include "poslo/log_file.hpp"
#include "test_util.hpp"

using namespace poslo;

TEST_CASE("every key and signature format round-trips byte-identically") {
    SuiteConfig suite{SuiteId::MmoMdc2, 4, 2, 2};

    auto [skc, pkc] = PoslocSecretKey::kg(suite);
    std::vector<Bytes> msgs{random_bytes(10), random_bytes(10)};
    EpochSignature es = skc.sig_epoch(msgs);

    Bytes w = skc.serialize();
    CHECK(PoslocSecretKey::deserialize(w).serialize() == w);
    w = pkc.serialize();
    CHECK(PoslocPublicKey::deserialize(w).serialize() == w);
    w = es.serialize();
    {
        Reader r(w.data(), w.size());
        EpochSignature back = EpochSignature::deserialize(r, suite.depth());
        r.expect_end();
        CHECK(back.serialize() == w);
    }

    auto [skf, pkf] = PoslofSecretKey::kg(suite, 8, 2);
    FineSignature fs1 = skf.sig_one(random_bytes(8));   // seed tail
    FineSignature fs2 = skf.sig_one(random_bytes(8));   // ds tail
    REQUIRE(fs2.carries_ds());
    w = skf.serialize();
    CHECK(PoslofSecretKey::deserialize(w).serialize() == w);
    w = pkf.serialize();
    CHECK(PoslofPublicKey::deserialize(w).serialize() == w);
    for (const FineSignature& fs : {fs1, fs2}) {
        w = fs.serialize();
        Reader r(w.data(), w.size());
        FineSignature back = FineSignature::deserialize(r, suite.depth());
        r.expect_end();
        CHECK(back.serialize() == w);
    }
}

TEST_CASE("wrong magic bytes and truncation raise format errors") {
    SuiteConfig suite{SuiteId::Sha256, 2, 2, 1};
    auto [sk, pk] = PoslocSecretKey::kg(suite);
    Bytes w = pk.serialize();
    Bytes bad = w;
    bad[0] ^= 0xff;
    CHECK_THROWS_AS(PoslocPublicKey::deserialize(bad), FormatError);
    Bytes trunc(w.begin(), w.end() - 3);
    CHECK_THROWS_AS(PoslocPublicKey::deserialize(trunc), FormatError);
    Bytes padded = w;
    padded.push_back(0x00);
    CHECK_THROWS_AS(PoslocPublicKey::deserialize(padded), FormatError);
    // a coarse key is not a fine key
    CHECK_THROWS_AS(PoslofPublicKey::deserialize(w), FormatError);
}

TEST_CASE("log container round-trips and rejects ragged files") {
    auto dir = std::filesystem::temp_directory_path() / "poslo_fmt_test";
    std::filesystem::create_directories(dir);
    std::string path = (dir / "t.log").string();

    std::vector<Bytes> recs;
    for (int k = 0; k < 20; k++) recs.push_back(random_bytes(1 + test_rng()() % 64));
    write_log(path, recs);
    CHECK(read_log(path) == recs);
    // write -> read -> write is byte-identical
    Bytes raw1 = read_file(path);
    write_log(path + "2", read_log(path));
    CHECK(read_file(path + "2") == raw1);

    Bytes raw = read_file(path);
    raw.pop_back();
    write_file_atomic(path + "3", raw);
    CHECK_THROWS_AS(read_log(path + "3"), FormatError);
    std::filesystem::remove_all(dir);
}

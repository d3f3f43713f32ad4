#pragma once

// Flat log container: each record is a 4-byte little-endian length followed
// by the raw bytes. Also hosts the whole-file I/O helpers the tools share.

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "poslo/common.hpp"

namespace poslo {

inline Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
}

// Write-to-temp then rename, so a crash never leaves a half-written file.
inline void write_file_atomic(const std::string& path, const Bytes& data) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp);
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out) throw FormatError("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<Bytes> read_log(const std::string& path) {
    Bytes raw = read_file(path);
    std::vector<Bytes> records;
    size_t off = 0;
    while (off < raw.size()) {
        if (raw.size() - off < 4) throw FormatError("truncated log record");
        uint32_t len = static_cast<uint32_t>(raw[off]) |
                       static_cast<uint32_t>(raw[off + 1]) << 8 |
                       static_cast<uint32_t>(raw[off + 2]) << 16 |
                       static_cast<uint32_t>(raw[off + 3]) << 24;
        off += 4;
        if (raw.size() - off < len) throw FormatError("truncated log record");
        records.emplace_back(raw.begin() + static_cast<ptrdiff_t>(off),
                             raw.begin() + static_cast<ptrdiff_t>(off + len));
        off += len;
    }
    return records;
}

inline void write_log(const std::string& path,
                      const std::vector<Bytes>& records) {
    Bytes raw;
    for (const auto& rec : records) {
        uint32_t len = static_cast<uint32_t>(rec.size());
        raw.push_back(static_cast<uint8_t>(len & 0xff));
        raw.push_back(static_cast<uint8_t>(len >> 8 & 0xff));
        raw.push_back(static_cast<uint8_t>(len >> 16 & 0xff));
        raw.push_back(static_cast<uint8_t>(len >> 24 & 0xff));
        raw.insert(raw.end(), rec.begin(), rec.end());
    }
    write_file_atomic(path, raw);
}

}  // namespace poslo

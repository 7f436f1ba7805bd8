#pragma once

#include <fstream>
#include <string>

#include "pnfv/crypto/bgn.hpp"
#include "pnfv/crypto/peks.hpp"
#include "pnfv/crypto/pke.hpp"

namespace pnfv::crypto {

// Opaque key container: 4-byte magic, format version, key-type byte, then
// the scheme's own payload.
constexpr uint8_t kKeyFileVersion = 1;
constexpr char kKeyFileMagic[4] = {'P', 'N', 'F', 'V'};

enum class KeyType : uint8_t { bgn = 'B', peks = 'S', pke = 'P' };

inline Bytes key_file_bytes(KeyType type, const Bytes& payload) {
    Bytes out;
    out.insert(out.end(), kKeyFileMagic, kKeyFileMagic + 4);
    out.push_back(kKeyFileVersion);
    out.push_back(uint8_t(type));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::pair<KeyType, Bytes> parse_key_file_bytes(const Bytes& data) {
    if (data.size() < 6 || !std::equal(kKeyFileMagic, kKeyFileMagic + 4, data.begin()))
        throw WireError("not a key file (bad magic)");
    if (data[4] != kKeyFileVersion) throw WireError("unsupported key file version");
    return {KeyType(data[5]), Bytes(data.begin() + 6, data.end())};
}

inline void write_key_file(const std::string& path, KeyType type, const Bytes& payload) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open key file for writing: " + path);
    auto bytes = key_file_bytes(type, payload);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

inline std::pair<KeyType, Bytes> read_key_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open key file: " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_key_file_bytes(data);
}

inline void save_keys(const std::string& path, const Bgn& bgn) {
    write_key_file(path, KeyType::bgn, bgn.key_bytes());
}

inline void save_keys(const std::string& path, const Peks& peks) {
    write_key_file(path, KeyType::peks, peks.key_bytes());
}

inline void save_keys(const std::string& path, const Pke& pke) {
    write_key_file(path, KeyType::pke, pke.key_bytes());
}

inline Bgn load_bgn_keys(const std::string& path) {
    auto [type, payload] = read_key_file(path);
    if (type != KeyType::bgn) throw WireError("key file holds a different key type");
    return Bgn::from_key_bytes(payload.data(), payload.size());
}

inline Peks load_peks_keys(const std::string& path) {
    auto [type, payload] = read_key_file(path);
    if (type != KeyType::peks) throw WireError("key file holds a different key type");
    return Peks::from_key_bytes(payload.data(), payload.size());
}

inline Pke load_pke_keys(const std::string& path) {
    auto [type, payload] = read_key_file(path);
    if (type != KeyType::pke) throw WireError("key file holds a different key type");
    return Pke::from_key_bytes(payload.data(), payload.size());
}

}  // namespace pnfv::crypto

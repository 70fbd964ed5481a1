// Copyright 2026 The ghzqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ghzqkd/keystream.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "ghzqkd/errors.hpp"
#include "ghzqkd/rng.hpp"
#include "json.hpp"

namespace ghzqkd {

namespace {

Bytes message(std::span<const uint8_t> secret, uint64_t counter, unsigned counter_bits) {
    Bytes msg(secret.begin(), secret.end());
    const unsigned nbytes = (counter_bits + 7) / 8;
    for (unsigned i = nbytes; i-- > 0;) {
        msg.push_back(static_cast<uint8_t>(i < 8 ? (counter >> (8 * i)) & 0xff : 0));
    }
    return msg;
}

Bits bytes_to_bits(std::span<const uint8_t> bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t b : bytes) {
        for (int k = 7; k >= 0; --k) {
            bits.push_back((b >> k) & 1U);
        }
    }
    return bits;
}

Bytes sha256(std::span<const uint8_t> data) {
    Bytes digest(EVP_MAX_MD_SIZE);
    unsigned len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    digest.resize(len);
    return digest;
}

uint64_t counter_limit(unsigned counter_bits) {
    return counter_bits >= 64 ? UINT64_MAX : (uint64_t{1} << counter_bits);
}

}  // namespace

size_t hash_output_bits(std::string_view hash_id) {
    if (hash_id == kDefaultHash) return 256;
    if (hash_id == kTestHash) return 64;
    throw RegistryError("unknown hash id '" + std::string(hash_id) + "'");
}

Bits hash_block(std::string_view hash_id, std::span<const uint8_t> secret, uint64_t counter, unsigned counter_bits) {
    const Bytes msg = message(secret, counter, counter_bits);
    if (hash_id == kDefaultHash) {
        return bytes_to_bits(sha256(msg));
    }
    if (hash_id == kTestHash) {
        const uint64_t h = fnv1a64(std::string_view(reinterpret_cast<const char*>(msg.data()), msg.size()));
        Bytes be(8);
        for (int i = 0; i < 8; ++i) {
            be[i] = static_cast<uint8_t>(h >> (56 - 8 * i));
        }
        return bytes_to_bits(be);
    }
    throw RegistryError("unknown hash id '" + std::string(hash_id) + "'");
}

const AuthIdentity& Registry::register_identity(std::string user_name, Bytes id_secret, std::string hash_id,
                                                unsigned counter_bits) {
    if (user_name.empty()) {
        throw RegistryError("user name must not be empty");
    }
    if (users_.contains(user_name)) {
        throw RegistryError("user '" + user_name + "' is already registered");
    }
    hash_output_bits(hash_id);
    if (counter_bits == 0 || counter_bits > 64) {
        throw RegistryError("counter_bits must be in [1, 64]");
    }
    AuthIdentity id{user_name, std::move(id_secret), std::move(hash_id), 0, counter_bits};
    return users_.emplace(std::move(user_name), std::move(id)).first->second;
}

bool Registry::contains(std::string_view user) const { return users_.find(user) != users_.end(); }

const AuthIdentity& Registry::identity(std::string_view user) const {
    auto it = users_.find(user);
    if (it == users_.end()) {
        throw RegistryError("user '" + std::string(user) + "' is not registered");
    }
    return it->second;
}

AuthIdentity& Registry::mutable_identity(std::string_view user) {
    auto it = users_.find(user);
    if (it == users_.end()) {
        throw RegistryError("user '" + std::string(user) + "' is not registered");
    }
    return it->second;
}

KeyBits Registry::auth_key(std::string_view user) {
    auto& id = mutable_identity(user);
    if (id.counter >= counter_limit(id.counter_bits)) {
        throw RegistryError("counter exhausted for '" + id.user_name + "'");
    }
    KeyBits out{hash_block(id.hash_id, id.id_secret, id.counter, id.counter_bits), id.user_name, id.counter};
    ++id.counter;
    return out;
}

KeyBits Registry::keystream(std::string_view user, size_t nbits, std::optional<uint64_t> expected_start) {
    if (nbits == 0) {
        throw RegistryError("keystream length must be at least 1");
    }
    auto& id = mutable_identity(user);
    if (expected_start && *expected_start < id.counter) {
        throw ReplayError("counter " + std::to_string(*expected_start) + " for '" + id.user_name +
                          "' was already consumed");
    }
    const size_t m = id.output_bits();
    const uint64_t blocks = (nbits + m - 1) / m;
    if (counter_limit(id.counter_bits) - id.counter < blocks) {
        throw RegistryError("counter exhausted for '" + id.user_name + "'");
    }
    KeyBits out{{}, id.user_name, id.counter};
    out.bits.reserve(blocks * m);
    for (uint64_t b = 0; b < blocks; ++b) {
        auto block = auth_key(user);
        out.bits.insert(out.bits.end(), block.bits.begin(), block.bits.end());
    }
    out.bits.resize(nbits);
    return out;
}

std::string Registry::to_json() const {
    nlohmann::ordered_json users = nlohmann::ordered_json::object();
    for (const auto& [name, id] : users_) {
        users[name] = {{"secret", to_hex(id.id_secret)},
                       {"hash_id", id.hash_id},
                       {"counter", id.counter},
                       {"counter_bits", id.counter_bits}};
    }
    nlohmann::ordered_json j{{"schema_version", 1}, {"users", users}};
    return j.dump(2) + "\n";
}

Registry Registry::from_json(std::string_view text) {
    Registry reg;
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("schema_version").get<int>() != 1) {
            throw RegistryError("unsupported registry schema_version");
        }
        for (const auto& [field, _] : j.items()) {
            if (field != "schema_version" && field != "users") {
                throw RegistryError("unknown registry field '" + field + "'");
            }
        }
        for (const auto& [name, entry] : j.at("users").items()) {
            for (const auto& [field, _] : entry.items()) {
                if (field != "secret" && field != "hash_id" && field != "counter" && field != "counter_bits") {
                    throw RegistryError("unknown registry field '" + field + "'");
                }
            }
            const unsigned cbits = entry.value("counter_bits", 64U);
            reg.register_identity(name, from_hex(entry.at("secret").get<std::string>()),
                                  entry.value("hash_id", std::string(kDefaultHash)), cbits);
            const auto counter = entry.at("counter").get<uint64_t>();
            if (counter > counter_limit(cbits)) {
                throw RegistryError("counter out of range for '" + name + "'");
            }
            reg.users_.at(name).counter = counter;
        }
    } catch (const nlohmann::json::exception& ex) {
        throw RegistryError(std::string("malformed registry: ") + ex.what());
    }
    return reg;
}

Registry Registry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw RegistryError("cannot open registry " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void Registry::save(const std::filesystem::path& path) const {
    if (std::filesystem::exists(path)) {
        const auto on_disk = load(path);
        for (const auto& [name, id] : on_disk.users_) {
            auto it = users_.find(name);
            if (it != users_.end() && it->second.counter < id.counter) {
                throw ReplayError("saving would rewind the counter of '" + name + "'");
            }
        }
    }
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw RegistryError("cannot write registry " + path.string());
        }
        out << to_json();
    }
    std::filesystem::rename(tmp, path);
}

std::string to_hex(std::span<const uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw RegistryError("hex string has odd length");
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw RegistryError("invalid hex character");
        }
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string bits_to_string(std::span<const uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (uint8_t b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

Bits bits_from_string(std::string_view text) {
    Bits bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw ValidationError("bit string may contain only '0' and '1'");
        }
        bits.push_back(static_cast<uint8_t>(c - '0'));
    }
    return bits;
}

}  // namespace ghzqkd

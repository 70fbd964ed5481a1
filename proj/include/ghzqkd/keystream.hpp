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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghzqkd {

using Bytes = std::vector<uint8_t>;
using Bits = std::vector<uint8_t>;  // one 0/1 value per element

/// "sha256": SHA-256(secret || counter), m = 256.
/// "test":   FNV-1a-64(secret || counter) as 64 big-endian bits, m = 64. Not a one-way
///           function; fixtures only.
inline constexpr std::string_view kDefaultHash = "sha256";
inline constexpr std::string_view kTestHash = "test";

/// Output width m in bits of a hash construction. Throws RegistryError for unknown ids.
size_t hash_output_bits(std::string_view hash_id);

/// h(secret, counter): the counter is encoded big-endian in ceil(counter_bits / 8) bytes.
Bits hash_block(std::string_view hash_id, std::span<const uint8_t> secret, uint64_t counter, unsigned counter_bits);

struct AuthIdentity {
    std::string user_name;
    Bytes id_secret;
    std::string hash_id{kDefaultHash};
    uint64_t counter = 0;
    unsigned counter_bits = 64;

    size_t output_bits() const { return hash_output_bits(hash_id); }
};

struct KeyBits {
    Bits bits;
    std::string user_name;
    uint64_t start_counter = 0;

    size_t size() const { return bits.size(); }
};

/// Trent's table of registered identities. Trent and each user see the same entry (they
/// share the secret), so a session draws a keystream once and both sides use it.
class Registry {
  public:
    /// Throws RegistryError on duplicates or an unknown hash id.
    const AuthIdentity& register_identity(std::string user_name, Bytes id_secret,
                                          std::string hash_id = std::string(kDefaultHash), unsigned counter_bits = 64);

    bool contains(std::string_view user) const;
    const AuthIdentity& identity(std::string_view user) const;
    const std::map<std::string, AuthIdentity, std::less<>>& identities() const { return users_; }

    /// One m-bit block h(ID, c) at the current counter; advances the counter by one.
    KeyBits auth_key(std::string_view user);

    /// ceil(nbits / m) successive blocks truncated to nbits. When `expected_start` is given
    /// and that counter was already consumed, throws ReplayError.
    KeyBits keystream(std::string_view user, size_t nbits, std::optional<uint64_t> expected_start = std::nullopt);

    /// {"schema_version": 1, "users": {name: {"secret": hex, "hash_id", "counter", "counter_bits"}}}
    std::string to_json() const;
    static Registry from_json(std::string_view text);

    static Registry load(const std::filesystem::path& path);

    /// Writes the registry. Refuses (ReplayError) to overwrite a file whose counter for any
    /// user is ahead of ours, which would rewind the counter.
    void save(const std::filesystem::path& path) const;

  private:
    AuthIdentity& mutable_identity(std::string_view user);

    std::map<std::string, AuthIdentity, std::less<>> users_;
};

std::string to_hex(std::span<const uint8_t> bytes);
/// Throws RegistryError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

std::string bits_to_string(std::span<const uint8_t> bits);
Bits bits_from_string(std::string_view text);

}  // namespace ghzqkd

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
#include <random>
#include <string_view>

namespace ghzqkd {

/// 64-bit FNV-1a over raw bytes.
uint64_t fnv1a64(std::string_view bytes);

/// SplitMix64 finalizer; used for all seed derivations.
uint64_t splitmix64(uint64_t x);

/// Seed of the named stream under `master`: splitmix64(master ^ fnv1a64(name)).
uint64_t derive_seed(uint64_t master, std::string_view stream_name);

/// Seed of the `index`-th trial under `master`: splitmix64(master + splitmix64(index)).
uint64_t derive_trial_seed(uint64_t master, uint64_t index);

/// Deterministic random source. Wraps std::mt19937_64 (whose output sequence is fixed by
/// the standard) and converts raw words itself, so results are identical across standard
/// library implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    uint64_t below(uint64_t bound);

    int bit() { return static_cast<int>(engine_() >> 63); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ghzqkd

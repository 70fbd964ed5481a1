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

#include <utility>

#include "ghzqkd/errors.hpp"
#include "ghzqkd/protocol.hpp"

namespace ghzqkd {

ToeplitzHash::ToeplitzHash(size_t rows, size_t cols, Bits diagonals)
    : rows_(rows), cols_(cols), diagonals_(std::move(diagonals)) {
    if (rows == 0 || cols == 0) {
        throw ConfigError("Toeplitz matrix needs nonzero dimensions");
    }
    if (diagonals_.size() != rows + cols - 1) {
        throw ConfigError("Toeplitz matrix needs rows + cols - 1 diagonal bits");
    }
}

ToeplitzHash ToeplitzHash::from_seed(size_t rows, size_t cols, uint64_t seed) {
    Rng rng(seed);
    Bits diag(rows + cols - 1);
    for (auto& b : diag) {
        b = static_cast<uint8_t>(rng.bit());
    }
    return ToeplitzHash(rows, cols, std::move(diag));
}

Bits ToeplitzHash::apply(std::span<const uint8_t> input) const {
    if (input.size() != cols_) {
        throw ConfigError("input length does not match the Toeplitz matrix");
    }
    Bits out(rows_, 0);
    for (size_t i = 0; i < rows_; ++i) {
        uint8_t acc = 0;
        for (size_t j = 0; j < cols_; ++j) {
            acc ^= static_cast<uint8_t>(at(i, j) & input[j]);
        }
        out[i] = acc;
    }
    return out;
}

Bits privacy_amplify(std::span<const uint8_t> raw_key, size_t output_length, uint64_t pa_seed) {
    if (output_length == 0) {
        throw ConfigError("privacy amplification output length must be at least 1");
    }
    if (output_length > raw_key.size()) {
        throw ConfigError("privacy amplification cannot lengthen the key");
    }
    return ToeplitzHash::from_seed(output_length, raw_key.size(), pa_seed).apply(raw_key);
}

}  // namespace ghzqkd

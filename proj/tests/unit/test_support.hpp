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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ghzqkd/rng.hpp"
#include "ghzqkd/statevector.hpp"

namespace ghzqkd::testing {

/// Random normalized state over `labels` with an optional probe, amplitudes uniform in the
/// unit square before normalization.
inline Statevector random_state(std::vector<std::string> labels, size_t probe_dim, Rng& rng) {
    std::vector<Complex> amps((size_t{1} << labels.size()) * probe_dim);
    double n = 0.0;
    for (auto& a : amps) {
        a = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        n += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(n);
    return Statevector(std::move(labels), probe_dim, std::move(amps));
}

/// Random normalized vector of dimension d.
inline std::vector<Complex> random_vector(size_t d, Rng& rng) {
    std::vector<Complex> v(d);
    double n = 0.0;
    for (auto& a : v) {
        a = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        n += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(n);
    return v;
}

/// True when `count` successes in `trials` lie within 3 binomial sigma of probability p.
inline bool within_3_sigma(size_t count, size_t trials, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    const double freq = static_cast<double>(count) / static_cast<double>(trials);
    if (sigma == 0.0) return freq == p;
    return std::abs(freq - p) <= 3.0 * sigma;
}

inline const double kPi = std::acos(-1.0);

/// Scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ghzqkd-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

}  // namespace ghzqkd::testing

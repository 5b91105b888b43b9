// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "clir/linalg.hpp"

namespace clir::testing {

namespace fs = std::filesystem;

// Fresh directory per test, removed afterwards.
class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        std::string name = info != nullptr ? std::string(info->test_suite_name()) + "_" + info->name() : "clir";
        path_ = fs::temp_directory_path() / ("clir_test_" + name);
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Matrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (auto& x : m.data()) x = g(rng);
    return m;
}

// Gram-Schmidt on a Gaussian matrix.
inline Matrix random_orthogonal(std::size_t d, std::mt19937_64& rng) {
    Matrix m = random_gaussian(d, d, rng);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t p = 0; p < j; ++p) {
            double dot = 0;
            for (std::size_t i = 0; i < d; ++i) dot += m(i, j) * m(i, p);
            for (std::size_t i = 0; i < d; ++i) m(i, j) -= dot * m(i, p);
        }
        double n = 0;
        for (std::size_t i = 0; i < d; ++i) n += m(i, j) * m(i, j);
        n = std::sqrt(n);
        for (std::size_t i = 0; i < d; ++i) m(i, j) /= n;
    }
    return m;
}

}  // namespace clir::testing

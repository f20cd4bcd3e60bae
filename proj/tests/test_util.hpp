#pragma once

#include "avdz/subband.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace avdz::testing {

inline std::vector<double> read_column(const std::string& name) {
    std::ifstream in(std::string(AVDZ_TEST_DATA_DIR) + "/" + name);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    return out;
}

/// Random integer map; each leaf is zero with probability `p_zero_leaf`.
inline IntMap random_int_map(std::mt19937& g, int max_mag, double p_zero_leaf = 0.0) {
    IntMap m;
    std::uniform_int_distribution<int> val(-max_mag, max_mag);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int id = 0; id < kLeafCount; ++id) {
        if (u(g) < p_zero_leaf) continue;
        for (int& v : m.leaf(id)) v = val(g);
    }
    return m;
}

/// Sparse, speech-like map: per-leaf scale drawn log-uniformly, many small values.
inline IntMap random_sparse_map(std::mt19937& g, int max_mag) {
    IntMap m;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> nd;
    for (int id = 0; id < kLeafCount; ++id) {
        const double scale = max_mag * std::pow(u(g), 3.0) / 3.0;
        for (int& v : m.leaf(id)) {
            const double x = std::round(nd(g) * scale);
            v = static_cast<int>(std::clamp(x, -static_cast<double>(max_mag), static_cast<double>(max_mag)));
        }
    }
    return m;
}

template <typename A, typename B>
double mse(const A& a, const B& b) {
    const auto fa = a.flat();
    const auto fb = b.flat();
    double acc = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        const double d = static_cast<double>(fa[i]) - static_cast<double>(fb[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(fa.size());
}

} // namespace avdz::testing

#ifndef MBC_TESTS_FIXTURES_HPP
#define MBC_TESTS_FIXTURES_HPP

// Shared test data and test-only oracles. The oracles work on raw strings and
// never call into the library code they check.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mbc/dataset.hpp"

namespace fixtures {

using Table = std::vector<std::vector<std::string>>;

// Simulated dataset A: ten objects, features A..E.
inline const std::vector<std::string> kNamesA{"A", "B", "C", "D", "E"};
inline const Table kTableA{
    {"a2", "b1", "c2", "d3", "e2"}, {"a2", "b1", "c2", "d3", "e2"}, {"a2", "b1", "c2", "d3", "e1"},
    {"a2", "b1", "c2", "d3", "e4"}, {"a1", "b2", "c4", "d2", "e3"}, {"a1", "b2", "c3", "d4", "e4"},
    {"a1", "b2", "c4", "d2", "e2"}, {"a1", "b2", "c3", "d4", "e1"}, {"a1", "b2", "c1", "d1", "e3"},
    {"a1", "b2", "c4", "d2", "e2"},
};

// Four objects, two features; every pair is ambiguous under the usual measures.
inline const std::vector<std::string> kNamesD42{"C", "B"};
inline const Table kTableD42{{"a1", "b1"}, {"a2", "b2"}, {"a1", "b2"}, {"a2", "b1"}};

// Expected 10x10 match-count matrix of dataset A (upper triangle, row-major).
inline const std::vector<std::vector<int>> kExpectedSmA{
    {5, 4, 4, 0, 0, 1, 0, 0, 1},
    {4, 4, 0, 0, 1, 0, 0, 1},
    {4, 0, 0, 0, 1, 0, 0},
    {0, 1, 0, 0, 0, 0},
    {2, 4, 2, 3, 4},
    {2, 4, 2, 2},
    {2, 2, 5},
    {2, 2},
    {2},
};

// Expected matrix after the first iteration: 8 entities over A..D, entity
// order (O1,O2), O3, O4, O5, O6, (O7,O10), O8, O9.
inline const std::vector<std::vector<int>> kExpectedSm8{
    {4, 4, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0},
    {2, 4, 2, 2},
    {2, 4, 2},
    {2, 2},
    {2},
};

inline const mbc::Dataset& dataset_a() {
    static const mbc::Dataset ds = mbc::Dataset::encode(kNamesA, kTableA);
    return ds;
}
inline const mbc::Dataset& dataset_d42() {
    static const mbc::Dataset ds = mbc::Dataset::encode(kNamesD42, kTableD42);
    return ds;
}

/// Matches between two string rows on the listed columns.
inline int oracle_cm(const std::vector<std::string>& x, const std::vector<std::string>& y,
                     const std::vector<std::size_t>& cols) {
    int c = 0;
    for (auto f : cols) c += x[f] == y[f];
    return c;
}

inline std::vector<std::size_t> all_columns(const Table& t) {
    std::vector<std::size_t> c(t.front().size());
    std::iota(c.begin(), c.end(), std::size_t{0});
    return c;
}

/// Random categorical table with n rows, m columns and at most k categories per column.
inline Table random_table(std::mt19937& rng, std::size_t n, std::size_t m, std::size_t k) {
    std::uniform_int_distribution<std::size_t> cat(0, k - 1);
    Table t(n, std::vector<std::string>(m));
    for (auto& row : t)
        for (std::size_t f = 0; f < m; ++f) row[f] = "v" + std::to_string(cat(rng));
    return t;
}

inline std::vector<std::string> names(std::size_t m) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < m; ++i) v.push_back("f" + std::to_string(i));
    return v;
}

/// Sequential allocation over pairs in the given order: a pair whose entry
/// equals theta joins the second object to the first one's cluster (or opens
/// a cluster); two allocated clusters linked by a pair are fused.
inline std::vector<std::vector<std::size_t>> sequential_grouping(
    std::size_t e, const std::vector<std::pair<std::size_t, std::size_t>>& order,
    const std::map<std::pair<std::size_t, std::size_t>, int>& entries, int theta) {
    std::vector<int> label(e, -1);
    int next = 0;
    for (auto [i, j] : order) {
        auto key = std::minmax(i, j);
        if (entries.at({key.first, key.second}) != theta) continue;
        if (label[i] < 0 && label[j] < 0) {
            label[i] = label[j] = next++;
        } else if (label[i] < 0) {
            label[i] = label[j];
        } else if (label[j] < 0) {
            label[j] = label[i];
        } else if (label[i] != label[j]) {
            const int from = label[j];
            for (auto& l : label)
                if (l == from) l = label[i];
        }
    }
    std::map<int, std::vector<std::size_t>> groups;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < e; ++i) {
        if (label[i] < 0) out.push_back({i});
        else groups[label[i]].push_back(i);
    }
    for (auto& [_, g] : groups) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
}

/// Canonical form of a partition: members sorted, clusters sorted.
inline std::vector<std::vector<std::size_t>> canonical(std::vector<std::vector<std::size_t>> p) {
    for (auto& c : p) std::sort(c.begin(), c.end());
    std::sort(p.begin(), p.end());
    return p;
}

}  // namespace fixtures

#endif  // MBC_TESTS_FIXTURES_HPP

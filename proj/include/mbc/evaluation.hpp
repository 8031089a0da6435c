#ifndef MBC_EVALUATION_HPP
#define MBC_EVALUATION_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "mbc/error.hpp"
#include "mbc/mbc.hpp"

namespace mbc {

/// Objects counted by (true label, cluster). Labels are in first-appearance
/// order; columns follow the partition's cluster order.
struct ContingencyTable {
    std::vector<std::string> labels;
    std::size_t clusters = 0;
    std::vector<std::vector<std::size_t>> counts;  // [label][cluster]

    std::size_t total() const {
        std::size_t s = 0;
        for (const auto& row : counts)
            for (auto v : row) s += v;
        return s;
    }
    std::size_t cluster_size(std::size_t c) const {
        std::size_t s = 0;
        for (const auto& row : counts) s += row.at(c);
        return s;
    }
    std::size_t label_count(std::size_t l) const {
        std::size_t s = 0;
        for (auto v : counts.at(l)) s += v;
        return s;
    }
    std::size_t cluster_majority(std::size_t c) const {
        std::size_t best = 0;
        for (const auto& row : counts) best = std::max(best, row.at(c));
        return best;
    }
    bool cluster_pure(std::size_t c) const { return cluster_majority(c) == cluster_size(c); }
};

/// Cross-tabulates a cluster index per object against a label per object.
inline ContingencyTable contingency(const std::vector<std::size_t>& cluster_of, const std::vector<std::string>& labels) {
    if (cluster_of.size() != labels.size())
        throw DataError("label count (" + std::to_string(labels.size()) + ") does not match object count (" +
                        std::to_string(cluster_of.size()) + ")");
    ContingencyTable t;
    for (auto c : cluster_of) t.clusters = std::max(t.clusters, c + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find(t.labels.begin(), t.labels.end(), labels[i]);
        std::size_t row = static_cast<std::size_t>(it - t.labels.begin());
        if (it == t.labels.end()) {
            t.labels.push_back(labels[i]);
            t.counts.emplace_back(t.clusters, 0);
        }
        ++t.counts[row][cluster_of[i]];
    }
    return t;
}

inline ContingencyTable contingency(const Partition& partition, const std::vector<std::string>& labels) {
    std::size_t objects = 0;
    for (const auto& c : partition) objects += c.size();
    if (objects != labels.size())
        throw DataError("label count (" + std::to_string(labels.size()) + ") does not match object count (" +
                        std::to_string(objects) + ")");
    return contingency(assignments(partition, objects), labels);
}

/// Objects outside their cluster's majority label.
inline std::size_t misclassified(const ContingencyTable& t) {
    std::size_t hits = 0;
    for (std::size_t c = 0; c < t.clusters; ++c) hits += t.cluster_majority(c);
    return t.total() - hits;
}

inline std::size_t impure_clusters(const ContingencyTable& t) {
    std::size_t k = 0;
    for (std::size_t c = 0; c < t.clusters; ++c) k += t.cluster_size(c) > 0 && !t.cluster_pure(c);
    return k;
}

/// Fraction of objects carrying their cluster's majority label.
inline double purity(const ContingencyTable& t) {
    const auto n = t.total();
    if (n == 0) return 0.0;
    return static_cast<double>(n - misclassified(t)) / static_cast<double>(n);
}

}  // namespace mbc

#endif  // MBC_EVALUATION_HPP

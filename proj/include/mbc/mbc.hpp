#ifndef MBC_MBC_HPP
#define MBC_MBC_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbc/dataset.hpp"
#include "mbc/error.hpp"
#include "mbc/importance.hpp"
#include "mbc/similarity.hpp"

namespace mbc {

enum class ImportanceMeasure { pgp, ppp };
enum class TiePolicy { drop_all, pgp2_single };

/// Rows the importance measure is computed over: the current entities (each
/// merged cluster counts once) or the original objects.
enum class ImportancePopulation { entities, objects };

struct MbcConfig {
    ImportanceMeasure importance = ImportanceMeasure::pgp;
    TiePolicy ties = TiePolicy::drop_all;
    bool anti_merge = true;
    double alpha = 0.0;
    std::optional<std::size_t> k;  // requested cluster count; switches to dendrogram-cut mode
    ImportancePopulation population = ImportancePopulation::entities;
};

/// Clusters as sorted lists of object ids, ordered by smallest member.
using Partition = std::vector<std::vector<std::size_t>>;

struct Entity {
    std::size_t id = 0;                // dendrogram node: objects are 0..n-1, merges count up from n
    std::vector<std::size_t> members;  // sorted object ids

    std::size_t representative() const { return members.front(); }
    bool clustered() const { return members.size() > 1; }
};

struct MergeEvent {
    std::size_t iteration = 0;
    std::size_t theta = 0;
    std::vector<std::size_t> children;  // node ids
    std::size_t parent = 0;             // node id
    std::vector<std::size_t> members;   // object ids of the parent
};

/// Entities, remaining features and similarity matrices between iterations.
/// `raw` holds the true match counts; `sm` is what grouping sees, i.e. `raw`
/// with the anti-merge zeroing applied.
struct ClusteringState {
    const Dataset* data = nullptr;
    std::vector<Entity> entities;
    std::vector<std::size_t> remaining_features;
    SimilarityMatrix raw;
    SimilarityMatrix sm;
    std::size_t iteration = 0;
    std::size_t next_node = 0;

    static ClusteringState initial(const Dataset& ds) {
        ClusteringState s;
        s.data = &ds;
        s.entities.reserve(ds.rows());
        for (std::size_t i = 0; i < ds.rows(); ++i) s.entities.push_back({i, {i}});
        s.remaining_features.resize(ds.features());
        std::iota(s.remaining_features.begin(), s.remaining_features.end(), std::size_t{0});
        s.next_node = ds.rows();
        s.raw = build_sm(s.view());
        s.sm = s.raw;
        return s;
    }

    std::size_t theta() const noexcept { return remaining_features.size(); }

    /// One row per entity (its representative object) over the remaining features.
    DatasetView view() const {
        std::vector<std::size_t> reps;
        reps.reserve(entities.size());
        for (const auto& e : entities) reps.push_back(e.representative());
        return DatasetView(*data, std::move(reps), remaining_features);
    }

    bool all_clustered() const {
        return std::all_of(entities.begin(), entities.end(), [](const Entity& e) { return e.clustered(); });
    }

    Partition partition() const {
        Partition p;
        p.reserve(entities.size());
        for (const auto& e : entities) p.push_back(e.members);
        return p;
    }
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Merges every pair of entities whose (masked) match count equals theta,
/// taking connected components. Merged rows of `raw` are read from any member
/// (all members share a profile); merged rows of `sm` keep the smallest entry,
/// so a zeroed link stays zeroed.
inline ClusteringState group_matching(const ClusteringState& in, std::vector<MergeEvent>* merges = nullptr) {
    const std::size_t e = in.entities.size();
    const auto theta = static_cast<SimilarityMatrix::value_type>(in.theta());
    if (e < 2 || theta == 0) return in;

    detail::DisjointSets sets(e);
    bool any = false;
    for (std::size_t i = 0; i + 1 < e; ++i)
        for (std::size_t j = i + 1; j < e; ++j)
            if (in.sm(i, j) == theta) {
                sets.unite(i, j);
                any = true;
            }
    if (!any) return in;

    // Components keyed by their smallest entity index; entities are ordered by
    // representative, so the new order is by smallest member as well.
    std::vector<std::vector<std::size_t>> groups(e);
    for (std::size_t i = 0; i < e; ++i) groups[sets.find(i)].push_back(i);
    std::erase_if(groups, [](const auto& g) { return g.empty(); });

    ClusteringState out;
    out.data = in.data;
    out.remaining_features = in.remaining_features;
    out.iteration = in.iteration;
    out.next_node = in.next_node;
    out.entities.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.size() == 1) {
            out.entities.push_back(in.entities[g.front()]);
            continue;
        }
        Entity merged{out.next_node++, {}};
        MergeEvent ev{in.iteration, in.theta(), {}, merged.id, {}};
        for (auto idx : g) {
            const auto& child = in.entities[idx];
            merged.members.insert(merged.members.end(), child.members.begin(), child.members.end());
            ev.children.push_back(child.id);
        }
        std::sort(merged.members.begin(), merged.members.end());
        ev.members = merged.members;
        if (merges) merges->push_back(std::move(ev));
        out.entities.push_back(std::move(merged));
    }

    const std::size_t ne = groups.size();
    out.raw = SimilarityMatrix(ne, in.raw.theta());
    out.sm = SimilarityMatrix(ne, in.sm.theta());
    for (std::size_t a = 0; a + 1 < ne; ++a) {
        for (std::size_t b = a + 1; b < ne; ++b) {
            out.raw.set(a, b, in.raw(groups[a].front(), groups[b].front()));
            auto lowest = in.sm(groups[a].front(), groups[b].front());
            for (auto x : groups[a])
                for (auto y : groups[b]) lowest = std::min(lowest, in.sm(x, y));
            out.sm.set(a, b, lowest);
        }
    }
    return out;
}

/// Anti-merge rule: for every pair of multi-object entities whose entry equals
/// theta, zero every theta-valued entry in both their rows and columns.
inline ClusteringState anti_merge_update(const ClusteringState& in) {
    const std::size_t e = in.entities.size();
    const auto theta = static_cast<SimilarityMatrix::value_type>(in.theta());
    std::vector<bool> affected(e, false);
    bool any = false;
    for (std::size_t i = 0; i + 1 < e; ++i) {
        if (!in.entities[i].clustered()) continue;
        for (std::size_t j = i + 1; j < e; ++j) {
            if (in.entities[j].clustered() && in.sm(i, j) == theta) {
                affected[i] = affected[j] = true;
                any = true;
            }
        }
    }
    if (!any) return in;

    ClusteringState out = in;
    for (std::size_t i = 0; i < e; ++i) {
        if (!affected[i]) continue;
        for (std::size_t k = 0; k < e; ++k)
            if (k != i && out.sm(i, k) == theta) out.sm.set(i, k, 0);
    }
    return out;
}

/// Importance of each remaining feature. Rationals are left empty when their
/// common denominator is zero (no information: all features tie).
inline ImportanceReport assess(const DatasetView& v, ImportanceMeasure measure) {
    auto r = count_pairs(v);
    if (measure == ImportanceMeasure::pgp) {
        if (const auto d = r.match_total(); d > 0) r.pgp = detail::shares(r.match_pairs, d);
    } else {
        if (const auto d = r.mismatch_total(); d > 0) r.ppp = detail::shares(r.mismatch_pairs, d);
    }
    return r;
}

struct DropDecision {
    std::vector<std::size_t> features;  // source feature ids to drop
    bool terminate = false;             // remaining features all tie
};

/// Picks the features with the lowest importance. Under pgp2_single ties at
/// the minimum are resolved by the highest PGP2 (then lowest feature id),
/// computed on the state's unmasked matrix.
inline DropDecision select_drop(const ClusteringState& state, const ImportanceReport& report, const MbcConfig& config) {
    const auto& values = config.importance == ImportanceMeasure::pgp ? report.pgp : report.ppp;
    if (values.empty() || values.size() < 2) return {{}, true};

    const Rational lowest = *std::min_element(values.begin(), values.end());
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == lowest) tied.push_back(report.features[i]);
    if (tied.size() == values.size()) return {{}, true};
    if (tied.size() == 1 || config.ties == TiePolicy::drop_all) return {std::move(tied), false};

    std::sort(tied.begin(), tied.end());
    const auto view = state.view();
    if (influence(state.raw, config.alpha).count() == 0) return {{tied.front()}, false};
    std::size_t best = tied.front();
    std::optional<Rational> best_value;
    for (auto f : tied) {
        const auto v = pgp2(view, state.raw, {f}, config.alpha);
        if (!best_value || v > *best_value) {
            best_value = v;
            best = f;
        }
    }
    return {{best}, false};
}

struct Level {
    std::size_t theta = 0;
    std::vector<std::size_t> nodes;  // dendrogram node id per cluster
    Partition clusters;
};

/// Level 0 holds the n singletons; level p + 1 the partition after the
/// grouping step of iteration p.
struct Dendrogram {
    std::size_t objects = 0;
    std::vector<Level> levels;
    std::vector<MergeEvent> merges;
};

enum class StopReason { all_clustered, importance_tied, features_exhausted, single_entity };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::all_clustered: return "all_clustered";
        case StopReason::importance_tied: return "importance_tied";
        case StopReason::features_exhausted: return "features_exhausted";
        case StopReason::single_entity: return "single_entity";
    }
    return "unknown";
}

struct IterationRecord {
    std::size_t iteration = 0;
    std::size_t theta = 0;
    std::size_t entities_before = 0;
    std::size_t entities_after = 0;
    ImportanceReport importance;
    std::vector<std::size_t> dropped;
};

struct CutResult {
    Partition partition;
    std::size_t level = 0;
    std::size_t achieved = 0;
};

/// Partition at the level whose cluster count is closest to k; exact matches
/// win, and among equally close levels the coarser one does.
inline CutResult cut_at_k(const Dendrogram& d, std::size_t k) {
    if (d.levels.empty()) throw std::invalid_argument("empty dendrogram");
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    std::size_t best = 0;
    std::size_t best_gap = static_cast<std::size_t>(-1);
    for (std::size_t l = 0; l < d.levels.size(); ++l) {
        const std::size_t c = d.levels[l].clusters.size();
        const std::size_t gap = c > k ? c - k : k - c;
        if (gap <= best_gap) {
            best_gap = gap;
            best = l;
        }
    }
    return {d.levels[best].clusters, best, d.levels[best].clusters.size()};
}

struct RunResult {
    Partition partition;
    Dendrogram dendrogram;
    std::vector<IterationRecord> trace;
    StopReason stop = StopReason::all_clustered;
    std::optional<CutResult> cut;
};

namespace detail {

inline Level level_of(const ClusteringState& s) {
    Level l;
    l.theta = s.theta();
    for (const auto& e : s.entities) {
        l.nodes.push_back(e.id);
        l.clusters.push_back(e.members);
    }
    return l;
}

}  // namespace detail

/// Runs the matching-based clustering loop. Each iteration: assess feature
/// importance, group entities matching on every remaining feature, stop when
/// every object is in a multi-object cluster or the remaining features tie,
/// otherwise drop the least important features, update the matrix and apply
/// the anti-merge rule. Leftover objects end as singleton clusters.
inline RunResult run(const Dataset& ds, const MbcConfig& config = {}) {
    if (config.k && *config.k == 0) throw std::invalid_argument("k must be at least 1");
    const bool anti_merge = config.anti_merge && !config.k;

    RunResult result;
    result.dendrogram.objects = ds.rows();
    auto state = ClusteringState::initial(ds);
    result.dendrogram.levels.push_back(detail::level_of(state));

    for (;;) {
        IterationRecord rec;
        rec.iteration = state.iteration;
        rec.theta = state.theta();
        rec.entities_before = state.entities.size();
        rec.importance = config.population == ImportancePopulation::entities
                             ? assess(state.view(), config.importance)
                             : assess(restrict(ds, state.remaining_features), config.importance);

        state = group_matching(state, &result.dendrogram.merges);
        rec.entities_after = state.entities.size();
        result.dendrogram.levels.push_back(detail::level_of(state));

        auto finish = [&](StopReason why) {
            result.trace.push_back(std::move(rec));
            result.stop = why;
        };
        if (state.all_clustered()) {
            finish(StopReason::all_clustered);
            break;
        }
        if (state.entities.size() < 2) {
            finish(StopReason::single_entity);
            break;
        }
        auto drop = select_drop(state, rec.importance, config);
        if (drop.terminate) {
            finish(StopReason::importance_tied);
            break;
        }
        if (drop.features.size() >= state.remaining_features.size()) {
            finish(StopReason::features_exhausted);
            break;
        }

        state.raw = update_sm_after_drop(state.raw, state.view(), drop.features);
        std::erase_if(state.remaining_features, [&](std::size_t f) {
            return std::find(drop.features.begin(), drop.features.end(), f) != drop.features.end();
        });
        state.sm = state.raw;
        if (anti_merge) state = anti_merge_update(state);
        ++state.iteration;

        rec.dropped = std::move(drop.features);
        result.trace.push_back(std::move(rec));
    }

    result.partition = state.partition();
    if (config.k) {
        result.cut = cut_at_k(result.dendrogram, *config.k);
        result.partition = result.cut->partition;
    }
    return result;
}

/// Cluster index (0-based, partition order) of every object.
inline std::vector<std::size_t> assignments(const Partition& p, std::size_t objects) {
    std::vector<std::size_t> a(objects, static_cast<std::size_t>(-1));
    for (std::size_t c = 0; c < p.size(); ++c)
        for (auto o : p[c]) {
            if (o >= objects || a[o] != static_cast<std::size_t>(-1))
                throw std::invalid_argument("not a partition of the objects");
            a[o] = c;
        }
    if (std::find(a.begin(), a.end(), static_cast<std::size_t>(-1)) != a.end())
        throw std::invalid_argument("partition does not cover every object");
    return a;
}

}  // namespace mbc

#endif  // MBC_MBC_HPP

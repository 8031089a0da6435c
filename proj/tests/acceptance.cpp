// Acceptance suite: one PASS/FAIL line per criterion. Arguments select
// criteria by number (default: all). The Soybean-small criterion reads
// --soybean <csv>, else $MBC_SOYBEAN_CSV, else data/soybean-small.csv.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mbc/evaluation.hpp"
#include "mbc/importance.hpp"
#include "mbc/mbc.hpp"
#include "mbc/similarity.hpp"

namespace {

using fixtures::canonical;
using mbc::Partition;
using mbc::Rational;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string soybean_path;

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

bool matrix_equals(const mbc::SimilarityMatrix& sm, const std::vector<std::vector<int>>& upper) {
    if (sm.size() != upper.size() + 1) return false;
    for (std::size_t i = 0; i < upper.size(); ++i)
        for (std::size_t j = i + 1; j < sm.size(); ++j)
            if (static_cast<int>(sm(i, j)) != upper[i][j - i - 1]) return false;
    return true;
}

mbc::ClusteringState drop(mbc::ClusteringState s, const std::vector<std::size_t>& features, bool anti_merge) {
    s.raw = mbc::update_sm_after_drop(s.raw, s.view(), features);
    std::erase_if(s.remaining_features, [&](std::size_t f) {
        return std::find(features.begin(), features.end(), f) != features.end();
    });
    s.sm = s.raw;
    if (anti_merge) s = mbc::anti_merge_update(s);
    ++s.iteration;
    return s;
}

// 1. Overlap, Lin and Goodall on the 4x2 table, +-0.005 of the printed values.
Outcome similarity_table() {
    Outcome o;
    struct Row {
        std::size_t x, y;
        double overlap, lin, goodall;
    };
    const std::vector<Row> expected{{0, 1, 0.00, 0.00, 0.00}, {0, 2, 0.50, 0.50, 0.42}, {0, 3, 0.50, 0.50, 0.42},
                                     {1, 2, 0.50, 0.50, 0.42}, {1, 3, 0.50, 0.50, 0.42}, {2, 3, 0.00, 0.00, 0.00}};
    const mbc::DatasetView v(fixtures::dataset_d42());
    std::ostringstream d;
    for (const auto& r : expected) {
        const double ov = mbc::overlap(v, r.x, r.y), li = mbc::lin(v, r.x, r.y), go = mbc::goodall(v, r.x, r.y);
        o.require(std::abs(ov - r.overlap) <= 0.005 && std::abs(li - r.lin) <= 0.005 &&
                      std::abs(go - r.goodall) <= 0.005,
                  "pair (" + std::to_string(r.x + 1) + "," + std::to_string(r.y + 1) + ") off");
    }
    o.require(std::abs(mbc::goodall(v, 0, 2) - 5.0 / 12.0) < 1e-12, "Goodall (1,3) is not 5/12");
    if (o.pass) o.detail = "6 pairs x 3 measures within 0.005; Goodall(1,3) = " + std::to_string(mbc::goodall(v, 0, 2));
    return o;
}

// 2. Exact 10x10 match-count matrix of dataset A.
Outcome dataset_a_matrix() {
    Outcome o;
    const auto sm = mbc::build_sm(mbc::DatasetView(fixtures::dataset_a()));
    o.require(matrix_equals(sm, fixtures::kExpectedSmA), "matrix differs from the expected one");
    o.require(sm.theta() == 5, "theta != 5");
    if (o.pass) o.detail = "45 entries identical";
    return o;
}

// 3. PGP of dataset A, exact rationals and two-decimal printing.
Outcome dataset_a_pgp() {
    Outcome o;
    const auto r = mbc::pgp(mbc::DatasetView(fixtures::dataset_a()));
    const std::vector<Rational> expected{{21, 71}, {21, 71}, {10, 71}, {10, 71}, {9, 71}};
    const std::vector<std::string> printed{"0.30", "0.30", "0.14", "0.14", "0.13"};
    std::string got;
    for (std::size_t i = 0; i < 5; ++i) {
        o.require(r.pgp[i] == expected[i], "PGP of feature " + std::to_string(i) + " not exact");
        o.require(fmt2(mbc::to_double(r.pgp[i])) == printed[i], "PGP of feature " + std::to_string(i) + " prints wrong");
        got += (i ? " " : "") + fmt2(mbc::to_double(r.pgp[i]));
    }
    if (o.pass) o.detail = "PGP = " + got + " (x/71 exact)";
    return o;
}

// 4. Dataset A trace: merges, matrices and the final partition.
Outcome dataset_a_trace() {
    Outcome o;
    const auto ds = fixtures::dataset_a();
    const mbc::MbcConfig config;
    auto s = mbc::ClusteringState::initial(ds);

    auto report = mbc::assess(s.view(), config.importance);
    s = mbc::group_matching(s);
    o.require(s.partition() == Partition{{0, 1}, {2}, {3}, {4}, {5}, {6, 9}, {7}, {8}},
              "iteration 0 merges are not {O1,O2},{O7,O10}");
    auto d = mbc::select_drop(s, report, config);
    o.require(d.features == std::vector<std::size_t>{4}, "iteration 0 does not drop E");
    s = drop(s, d.features, true);
    o.require(matrix_equals(s.sm, fixtures::kExpectedSm8), "iteration 1 matrix differs from the expected 8x8");

    report = mbc::assess(s.view(), config.importance);
    s = mbc::group_matching(s);
    const Partition four{{0, 1, 2, 3}, {4, 6, 9}, {5, 7}, {8}};
    o.require(s.partition() == four, "iteration 1 clusters differ");
    d = mbc::select_drop(s, report, config);
    o.require(d.features == std::vector<std::size_t>{2, 3}, "iteration 1 does not drop C and D");
    s = drop(s, d.features, true);
    o.require(matrix_equals(s.sm, {{0, 0, 0}, {0, 0}, {0}}), "post anti-merge matrix is not all zeros");

    const auto r = mbc::run(ds, config);
    o.require(r.partition == four, "final partition differs from the expected 4 clusters");
    o.require(r.partition.size() == 4 && r.partition[3] == std::vector<std::size_t>{8}, "O9 is not a singleton");
    if (o.pass) o.detail = "merges, 8x8 matrix, zeroed 4x4 matrix and 4-cluster partition reproduced";
    return o;
}

// 5. Soybean-small: purity bound, at most one impure cluster, timing, counts.
Outcome soybean() {
    Outcome o;
    mbc::Dataset ds = [&]() -> mbc::Dataset {
        try {
            return mbc::load_csv(soybean_path, {"class", mbc::MissingPolicy::reject});
        } catch (const std::exception& e) {
            o.require(false, std::string("cannot load Soybean-small: ") + e.what());
            return mbc::Dataset::encode({"x"}, {{"a"}});
        }
    }();
    if (!o.pass) return o;
    o.require(ds.rows() == 47 && ds.features() == 35, "expected 47 x 35, got " + std::to_string(ds.rows()) + " x " +
                                                            std::to_string(ds.features()));
    std::set<std::string> classes(ds.labels()->begin(), ds.labels()->end());
    o.require(classes.size() == 4, "expected 4 classes");
    if (!o.pass) return o;

    const auto t0 = std::chrono::steady_clock::now();
    const auto r = mbc::run(ds);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto table = mbc::contingency(r.partition, *ds.labels());
    const double pur = mbc::purity(table);

    mbc::MbcConfig pgp2;
    pgp2.ties = mbc::TiePolicy::pgp2_single;
    const auto r2 = mbc::run(ds, pgp2);

    o.require(secs < 1.0, "run took " + std::to_string(secs) + " s");
    o.require(pur >= 0.95, "purity " + std::to_string(pur) + " below 0.95");
    o.require(mbc::impure_clusters(table) <= 1, std::to_string(mbc::impure_clusters(table)) + " impure clusters");
    o.require(r.partition.size() >= 15 && r.partition.size() <= 20,
              "cluster count " + std::to_string(r.partition.size()) + " outside 15..20");
    const std::string counts = "clusters: drop-all=" + std::to_string(r.partition.size()) +
                               ", pgp2=" + std::to_string(r2.partition.size()) + " (reference 18)";
    o.detail = (o.pass ? "" : o.detail + "; ") + "purity=" + std::to_string(pur) +
               ", impure=" + std::to_string(mbc::impure_clusters(table)) + ", " + counts +
               ", time=" + std::to_string(secs) + " s";
    return o;
}

// 6. Incremental updates vs rebuilds and component grouping vs sequential merging.
Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937 rng(2024);
    std::size_t groupings = 0;
    for (int trial = 0; trial < 200 && o.pass; ++trial) {
        const std::size_t n = 2 + rng() % 49, m = 1 + rng() % 10, k = 1 + rng() % 5;
        const auto ds = mbc::Dataset::encode(fixtures::names(m), fixtures::random_table(rng, n, m, k));

        const mbc::DatasetView v(ds);
        const auto sm = mbc::build_sm(v);
        std::vector<std::size_t> keep, dropped;
        for (std::size_t f = 0; f < m; ++f) (rng() % 3 == 0 ? dropped : keep).push_back(f);
        if (!keep.empty())
            o.require(mbc::update_sm_after_drop(sm, v, dropped) == mbc::build_sm(mbc::restrict(ds, keep)),
                      "incremental update differs from rebuild (trial " + std::to_string(trial) + ")");

        mbc::MbcConfig config;
        config.anti_merge = trial % 2 == 0;
        auto s = mbc::ClusteringState::initial(ds);
        for (;;) {
            const auto report = mbc::assess(s.view(), config.importance);
            const std::size_t e = s.entities.size();
            std::map<std::pair<std::size_t, std::size_t>, int> entries;
            std::vector<std::pair<std::size_t, std::size_t>> order;
            for (std::size_t i = 0; i < e; ++i)
                for (std::size_t j = i + 1; j < e; ++j) {
                    entries[{i, j}] = static_cast<int>(s.sm(i, j));
                    order.emplace_back(i, j);
                }
            std::shuffle(order.begin(), order.end(), rng);
            const auto expected = fixtures::sequential_grouping(e, order, entries, static_cast<int>(s.theta()));
            const auto before = s.entities;
            s = mbc::group_matching(s);
            Partition got;
            for (const auto& ent : s.entities) {
                std::vector<std::size_t> idx;
                for (std::size_t i = 0; i < before.size(); ++i)
                    if (std::includes(ent.members.begin(), ent.members.end(), before[i].members.begin(),
                                      before[i].members.end()))
                        idx.push_back(i);
                got.push_back(idx);
            }
            o.require(canonical(got) == canonical(expected),
                      "grouping differs from sequential merging (trial " + std::to_string(trial) + ")");
            ++groupings;

            if (s.all_clustered() || s.entities.size() < 2) break;
            const auto d = mbc::select_drop(s, report, config);
            if (d.terminate || d.features.size() >= s.remaining_features.size()) break;
            const auto rebuilt = mbc::build_sm(mbc::DatasetView(ds, [&] {
                std::vector<std::size_t> reps;
                for (const auto& ent : s.entities) reps.push_back(ent.representative());
                return reps;
            }(), [&] {
                std::vector<std::size_t> rest;
                for (auto f : s.remaining_features)
                    if (std::find(d.features.begin(), d.features.end(), f) == d.features.end()) rest.push_back(f);
                return rest;
            }()));
            s = drop(s, d.features, config.anti_merge);
            o.require(s.raw == rebuilt, "in-loop incremental matrix differs from rebuild");
        }
    }
    if (o.pass) o.detail = "200 datasets, " + std::to_string(groupings) + " grouping steps checked";
    return o;
}

// 7. Invariants over random datasets.
Outcome invariants() {
    Outcome o;
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50 && o.pass; ++trial) {
        const std::size_t n = 2 + rng() % 40, m = 1 + rng() % 8, k = 1 + rng() % 5;
        const auto t = fixtures::random_table(rng, n, m, k);
        const auto ds = mbc::Dataset::encode(fixtures::names(m), t);
        const mbc::DatasetView v(ds);
        const auto counts = mbc::count_pairs(v);

        if (counts.match_total() > 0) {
            Rational s(0);
            for (const auto& p : mbc::pgp(v).pgp) s += p;
            o.require(s == Rational(1), "PGP does not sum to 1");
        }
        if (counts.mismatch_total() > 0) {
            Rational s(0);
            for (const auto& p : mbc::ppp(v).ppp) s += p;
            o.require(s == Rational(1), "PPP does not sum to 1");
        }

        bool degenerate = true;
        for (std::size_t f = 0; f < m; ++f) degenerate = degenerate && ds.category_count(f) == 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double ov = mbc::overlap(v, i, j), go = mbc::goodall(v, i, j);
                o.require(ov == mbc::overlap(v, j, i) && go == mbc::goodall(v, j, i), "asymmetric measure");
                o.require(ov >= 0 && ov <= 1 && go >= 0 && go <= 1, "measure outside [0,1]");
                if (!degenerate) {
                    const double li = mbc::lin(v, i, j);
                    o.require(std::abs(li - mbc::lin(v, j, i)) < 1e-12, "asymmetric Lin");
                    o.require(li >= -1e-12 && li <= 1 + 1e-12, "Lin outside [0,1]");
                }
            }

        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        fixtures::Table shuffled(n);
        for (std::size_t i = 0; i < n; ++i) shuffled[i] = t[perm[i]];
        const auto a = mbc::run(ds);
        auto b = mbc::run(mbc::Dataset::encode(fixtures::names(m), shuffled)).partition;
        for (auto& c : b)
            for (auto& x : c) x = perm[x];
        o.require(canonical(a.partition) == canonical(b), "row permutation changed the partition");

        for (std::size_t i = 1; i < a.trace.size(); ++i)
            o.require(a.trace[i].theta < a.trace[i - 1].theta, "theta not strictly decreasing");

        mbc::MbcConfig dendro;
        dendro.anti_merge = false;
        const auto dr = mbc::run(ds, dendro);
        const auto& levels = dr.dendrogram.levels;
        for (std::size_t l = 1; l < levels.size(); ++l) {
            const auto fine = mbc::assignments(levels[l - 1].clusters, n);
            const auto coarse = mbc::assignments(levels[l].clusters, n);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    if (fine[x] == fine[y]) o.require(coarse[x] == coarse[y], "dendrogram level is not a coarsening");
        }
    }
    if (o.pass) o.detail = "50 random datasets";
    return o;
}

// 8. Matrix construction for 2000 objects x 20 features.
Outcome performance() {
    Outcome o;
    std::mt19937 rng(99);
    const auto ds = mbc::Dataset::encode(fixtures::names(20), fixtures::random_table(rng, 2000, 20, 5));
    const auto t0 = std::chrono::steady_clock::now();
    const auto sm = mbc::build_sm(mbc::DatasetView(ds));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(sm.pair_count() == 1999000, "wrong pair count");
    o.require(secs < 10.0, "took " + std::to_string(secs) + " s");
    o.detail = (o.pass ? "" : o.detail + "; ") + std::to_string(sm.pair_count()) + " pairs in " +
               std::to_string(secs) + " s";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
        {1, {"similarity table of the 4x2 example", similarity_table}},
        {2, {"dataset A match-count matrix", dataset_a_matrix}},
        {3, {"dataset A PGP values", dataset_a_pgp}},
        {4, {"dataset A step-by-step trace", dataset_a_trace}},
        {5, {"Soybean-small clustering", soybean}},
        {6, {"oracle equivalence on 200 random datasets", oracle_equivalence}},
        {7, {"invariant suite", invariants}},
        {8, {"performance smoke 2000 x 20", performance}},
    };

    if (const char* env = std::getenv("MBC_SOYBEAN_CSV")) soybean_path = env;
    else soybean_path = MBC_DATA_DIR "/soybean-small.csv";

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--soybean" && i + 1 < argc) soybean_path = argv[++i];
        else selected.push_back(std::stoi(a));
    }
    if (selected.empty())
        for (const auto& [id, _] : criteria) selected.push_back(id);

    int failed = 0;
    for (int id : selected) {
        const auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << id << '\n';
            return 2;
        }
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ". " << it->second.first << " -- " << o.detail << '\n';
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}

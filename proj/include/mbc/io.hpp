#ifndef MBC_IO_HPP
#define MBC_IO_HPP

// Serialization of results for the command-line tool. Object, node and
// cluster ids are 1-based in every external format.

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mbc/csv.hpp"
#include "mbc/dataset.hpp"
#include "mbc/evaluation.hpp"
#include "mbc/importance.hpp"
#include "mbc/mbc.hpp"

namespace mbc::io {

using nlohmann::json;

inline json rational_json(const Rational& r) {
    return {{"numerator", r.numerator()}, {"denominator", r.denominator()}, {"value", to_double(r)}};
}

inline const char* to_string(ImportanceMeasure m) { return m == ImportanceMeasure::pgp ? "pgp" : "ppp"; }
inline const char* to_string(TiePolicy t) { return t == TiePolicy::drop_all ? "drop-all" : "pgp2"; }
inline const char* to_string(ImportancePopulation p) {
    return p == ImportancePopulation::entities ? "entities" : "objects";
}

inline json config_json(const MbcConfig& c) {
    json j{{"importance", to_string(c.importance)},
           {"ties", to_string(c.ties)},
           {"anti_merge", c.anti_merge && !c.k},
           {"alpha", c.alpha},
           {"population", to_string(c.population)}};
    j["k"] = c.k ? json(*c.k) : json(nullptr);
    return j;
}

/// "object,cluster" rows, one per object in input order.
inline std::string assignments_csv(const Partition& p, std::size_t objects) {
    const auto a = assignments(p, objects);
    std::ostringstream os;
    os << "object,cluster\n";
    for (std::size_t i = 0; i < a.size(); ++i) os << i + 1 << ',' << a[i] + 1 << '\n';
    return os.str();
}

/// Reads "object,cluster" CSV back into a 0-based cluster index per object.
/// Cluster ids may be arbitrary strings; they are numbered by first appearance.
inline std::vector<std::size_t> read_assignments(std::istream& in, std::size_t objects) {
    auto records = csv::read(in);
    if (records.empty()) throw DataError("empty assignments file");
    std::vector<std::size_t> out(objects, static_cast<std::size_t>(-1));
    std::vector<std::string> ids;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.fields.size() != 2) throw ParseError("expected 2 fields", r.line);
        std::size_t obj = 0;
        try {
            obj = std::stoul(csv::trim(r.fields[0]));
        } catch (const std::exception&) {
            throw ParseError("object id is not a number", r.line, 1);
        }
        if (obj == 0 || obj > objects) throw ParseError("object id out of range", r.line, 1);
        const auto cid = csv::trim(r.fields[1]);
        auto it = std::find(ids.begin(), ids.end(), cid);
        if (it == ids.end()) it = ids.insert(ids.end(), cid);
        out[obj - 1] = static_cast<std::size_t>(it - ids.begin());
    }
    if (std::find(out.begin(), out.end(), static_cast<std::size_t>(-1)) != out.end())
        throw DataError("assignments do not cover every object");
    return out;
}

inline json partition_json(const Partition& p) {
    json arr = json::array();
    for (const auto& c : p) {
        json members = json::array();
        for (auto o : c) members.push_back(o + 1);
        arr.push_back(std::move(members));
    }
    return arr;
}

inline json dendrogram_json(const Dendrogram& d) {
    json levels = json::array();
    for (std::size_t l = 0; l < d.levels.size(); ++l) {
        json nodes = json::array();
        for (auto n : d.levels[l].nodes) nodes.push_back(n + 1);
        levels.push_back({{"level", l},
                          {"theta", d.levels[l].theta},
                          {"nodes", std::move(nodes)},
                          {"clusters", partition_json(d.levels[l].clusters)}});
    }
    json merges = json::array();
    for (const auto& m : d.merges) {
        json children = json::array();
        for (auto c : m.children) children.push_back(c + 1);
        json members = json::array();
        for (auto o : m.members) members.push_back(o + 1);
        merges.push_back({{"iteration", m.iteration},
                          {"theta", m.theta},
                          {"parent", m.parent + 1},
                          {"children", std::move(children)},
                          {"members", std::move(members)}});
    }
    return {{"objects", d.objects}, {"levels", std::move(levels)}, {"merges", std::move(merges)}};
}

/// Newick text. Leaves are object ids; a merge made in iteration p sits at
/// height p + 1 and branch lengths are height differences. Several final
/// clusters hang from one extra root.
inline std::string newick(const Dendrogram& d) {
    if (d.levels.empty()) throw std::invalid_argument("empty dendrogram");
    std::map<std::size_t, const MergeEvent*> by_parent;
    for (const auto& m : d.merges) by_parent[m.parent] = &m;
    auto height = [&](std::size_t node) -> std::size_t {
        auto it = by_parent.find(node);
        return it == by_parent.end() ? 0 : it->second->iteration + 1;
    };

    std::ostringstream os;
    auto emit = [&](auto& self, std::size_t node) -> void {
        auto it = by_parent.find(node);
        if (it == by_parent.end()) {
            os << node + 1;
            return;
        }
        os << '(';
        bool first = true;
        for (auto c : it->second->children) {
            if (!first) os << ',';
            first = false;
            self(self, c);
            os << ':' << height(node) - height(c);
        }
        os << ')';
    };

    const auto& roots = d.levels.back().nodes;
    if (roots.size() == 1) {
        emit(emit, roots.front());
    } else {
        std::size_t top = 0;
        for (auto r : roots) top = std::max(top, height(r));
        ++top;
        os << '(';
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (i) os << ',';
            emit(emit, roots[i]);
            os << ':' << top - height(roots[i]);
        }
        os << ')';
    }
    os << ';';
    return os.str();
}

inline json importance_json(const ImportanceReport& r, const Dataset& ds) {
    json features = json::array();
    for (std::size_t i = 0; i < r.features.size(); ++i) {
        json f{{"feature", ds.feature_name(r.features[i])},
               {"index", r.features[i]},
               {"match_pairs", r.match_pairs[i]},
               {"mismatch_pairs", r.mismatch_pairs[i]}};
        if (!r.pgp.empty()) f["pgp"] = rational_json(r.pgp[i]);
        if (!r.ppp.empty()) f["ppp"] = rational_json(r.ppp[i]);
        if (!r.pgp2.empty()) f["pgp2"] = r.pgp2[i] ? rational_json(*r.pgp2[i]) : json(nullptr);
        features.push_back(std::move(f));
    }
    return features;
}

inline json trace_json(const RunResult& r, const Dataset& ds) {
    json iters = json::array();
    for (const auto& it : r.trace) {
        json dropped = json::array();
        for (auto f : it.dropped) dropped.push_back(ds.feature_name(f));
        iters.push_back({{"iteration", it.iteration},
                         {"theta", it.theta},
                         {"entities_before", it.entities_before},
                         {"entities_after", it.entities_after},
                         {"importance", importance_json(it.importance, ds)},
                         {"dropped", std::move(dropped)}});
    }
    return {{"stop", to_string(r.stop)}, {"iterations", std::move(iters)}};
}

inline json manifest_json(const std::string& input, const MbcConfig& c, const RunResult& r, const Dataset& ds,
                          double seconds) {
    json iters = json::array();
    for (const auto& it : r.trace) {
        json dropped = json::array();
        for (auto f : it.dropped) dropped.push_back(ds.feature_name(f));
        iters.push_back({{"iteration", it.iteration}, {"theta", it.theta}, {"dropped", std::move(dropped)}});
    }
    json j{{"input", input},
           {"objects", ds.rows()},
           {"features", ds.features()},
           {"config", config_json(c)},
           {"iterations", r.trace.size()},
           {"trace", std::move(iters)},
           {"stop", to_string(r.stop)},
           {"clusters", r.partition.size()},
           {"seconds", seconds}};
    if (r.cut) j["cut"] = {{"level", r.cut->level}, {"achieved", r.cut->achieved}};
    return j;
}

inline std::string contingency_text(const ContingencyTable& t) {
    std::size_t w = 5;
    for (const auto& l : t.labels) w = std::max(w, l.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(w)) << "label";
    for (std::size_t c = 0; c < t.clusters; ++c) os << ' ' << std::right << std::setw(4) << c + 1;
    os << '\n';
    for (std::size_t l = 0; l < t.labels.size(); ++l) {
        os << std::left << std::setw(static_cast<int>(w)) << t.labels[l];
        for (std::size_t c = 0; c < t.clusters; ++c) {
            os << ' ' << std::right << std::setw(4);
            if (t.counts[l][c]) os << t.counts[l][c];
            else os << '-';
        }
        os << '\n';
    }
    return os.str();
}

inline std::string contingency_csv(const ContingencyTable& t) {
    std::ostringstream os;
    os << "label";
    for (std::size_t c = 0; c < t.clusters; ++c) os << ',' << c + 1;
    os << '\n';
    for (std::size_t l = 0; l < t.labels.size(); ++l) {
        os << csv::escape(t.labels[l]);
        for (auto v : t.counts[l]) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

inline json evaluation_json(const ContingencyTable& t) {
    json counts = json::array();
    for (std::size_t l = 0; l < t.labels.size(); ++l) counts.push_back({{"label", t.labels[l]}, {"counts", t.counts[l]}});
    return {{"objects", t.total()},
            {"clusters", t.clusters},
            {"labels", t.labels.size()},
            {"purity", purity(t)},
            {"misclassified", misclassified(t)},
            {"impure_clusters", impure_clusters(t)},
            {"table", std::move(counts)}};
}

}  // namespace mbc::io

#endif  // MBC_IO_HPP

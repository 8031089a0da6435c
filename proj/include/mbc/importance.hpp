#ifndef MBC_IMPORTANCE_HPP
#define MBC_IMPORTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "mbc/dataset.hpp"
#include "mbc/error.hpp"
#include "mbc/similarity.hpp"

namespace mbc {

using Rational = boost::rational<std::int64_t>;

/// Per-feature pair counts of a dataset view and the importance shares built
/// from them. Pair counts are ordered pairs, f(c)(f(c) - 1) per category.
struct ImportanceReport {
    std::vector<std::size_t> features;            // source feature ids, view order
    std::vector<std::uint64_t> match_pairs;       // M_l
    std::vector<std::uint64_t> mismatch_pairs;    // n(n-1) - M_l
    std::vector<Rational> pgp;                    // empty unless computed
    std::vector<Rational> ppp;                    // empty unless computed
    std::vector<std::optional<Rational>> pgp2;    // empty unless computed; nullopt if undefined
    std::uint64_t links = 0;                      // influence bits before any drop (with pgp2)
    std::vector<std::uint64_t> surviving_links;   // influence bits after dropping each feature (with pgp2)

    std::uint64_t match_total() const {
        std::uint64_t s = 0;
        for (auto v : match_pairs) s += v;
        return s;
    }
    std::uint64_t mismatch_total() const {
        std::uint64_t s = 0;
        for (auto v : mismatch_pairs) s += v;
        return s;
    }
};

/// Fills the pair counts only; never throws on degenerate views.
inline ImportanceReport count_pairs(const DatasetView& v) {
    ImportanceReport r;
    const std::uint64_t n = v.rows();
    const std::uint64_t all = n < 2 ? 0 : n * (n - 1);
    r.features = v.source_features();
    r.match_pairs.reserve(v.features());
    r.mismatch_pairs.reserve(v.features());
    for (std::size_t f = 0; f < v.features(); ++f) {
        std::uint64_t m = 0;
        for (auto c : v.frequencies(f)) m += static_cast<std::uint64_t>(c) * (c == 0 ? 0 : c - 1);
        r.match_pairs.push_back(m);
        r.mismatch_pairs.push_back(all - m);
    }
    return r;
}

namespace detail {

inline std::vector<Rational> shares(const std::vector<std::uint64_t>& num, std::uint64_t den) {
    std::vector<Rational> out;
    out.reserve(num.size());
    for (auto v : num) out.emplace_back(static_cast<std::int64_t>(v), static_cast<std::int64_t>(den));
    return out;
}

inline void require_pairs(const DatasetView& v) {
    if (v.features() == 0) throw DataError("importance needs at least one feature");
    if (v.rows() < 2) throw DataError("importance needs at least two rows");
}

}  // namespace detail

/// Partial grouping power: each feature's share of matching pairs.
inline ImportanceReport pgp(const DatasetView& v) {
    detail::require_pairs(v);
    auto r = count_pairs(v);
    const auto den = r.match_total();
    if (den == 0) throw DataError("no grouping information: every category is unique on every feature");
    r.pgp = detail::shares(r.match_pairs, den);
    return r;
}

/// Partial partitioning power: each feature's share of mismatching pairs.
inline ImportanceReport ppp(const DatasetView& v) {
    detail::require_pairs(v);
    auto r = count_pairs(v);
    const auto den = r.mismatch_total();
    if (den == 0) throw DataError("no partitioning information: all rows are identical");
    r.ppp = detail::shares(r.mismatch_pairs, den);
    return r;
}

/// Share of influence bits (m(i,j) > alpha) that survive dropping the
/// candidate features. `sm` must be the unmasked match-count matrix of `v`.
inline Rational pgp2(const DatasetView& v, const SimilarityMatrix& sm, const std::vector<std::size_t>& candidates,
                     double alpha = 0.0) {
    const auto gim = influence(sm, alpha).count();
    if (gim == 0) throw DataError("PGP2 undefined: no pair exceeds the influence threshold");
    const auto pim = influence(update_sm_after_drop(sm, v, candidates), alpha).count();
    return {static_cast<std::int64_t>(pim), static_cast<std::int64_t>(gim)};
}

/// PGP2 of every single feature of the view; entries are nullopt when the
/// general influence matrix is empty.
inline ImportanceReport pgp2_each(const DatasetView& v, const SimilarityMatrix& sm, double alpha = 0.0) {
    auto r = count_pairs(v);
    const auto gim = influence(sm, alpha).count();
    r.links = gim;
    r.pgp2.reserve(v.features());
    for (auto f : v.source_features()) {
        const auto pim = influence(update_sm_after_drop(sm, v, {f}), alpha).count();
        r.surviving_links.push_back(pim);
        if (gim == 0) {
            r.pgp2.emplace_back(std::nullopt);
            continue;
        }
        r.pgp2.emplace_back(Rational(static_cast<std::int64_t>(pim), static_cast<std::int64_t>(gim)));
    }
    return r;
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace mbc

#endif  // MBC_IMPORTANCE_HPP

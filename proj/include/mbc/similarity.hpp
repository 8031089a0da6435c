#ifndef MBC_SIMILARITY_HPP
#define MBC_SIMILARITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mbc/dataset.hpp"
#include "mbc/error.hpp"

namespace mbc {

/// Strict upper triangle of a symmetric e x e matrix of match counts, stored
/// row by row. The diagonal is never stored. theta is the number of features
/// the counts were taken over, so every entry lies in [0, theta].
class SimilarityMatrix {
public:
    using value_type = std::uint32_t;

    SimilarityMatrix() = default;
    SimilarityMatrix(std::size_t size, std::size_t theta)
        : size_(size), theta_(theta), values_(size < 2 ? 0 : size * (size - 1) / 2, 0) {}

    std::size_t size() const noexcept { return size_; }
    std::size_t theta() const noexcept { return theta_; }
    std::size_t pair_count() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    /// Flat offset of (i, j); order of i and j does not matter, i != j.
    static std::size_t offset(std::size_t i, std::size_t j, std::size_t size) noexcept {
        if (i > j) std::swap(i, j);
        return i * (2 * size - i - 1) / 2 + (j - i - 1);
    }

    value_type operator()(std::size_t i, std::size_t j) const {
        check(i, j);
        return values_[offset(i, j, size_)];
    }

    void set(std::size_t i, std::size_t j, value_type v) {
        check(i, j);
        if (v > theta_) throw std::invalid_argument("similarity entry exceeds theta");
        values_[offset(i, j, size_)] = v;
    }

    std::span<const value_type> values() const noexcept { return values_; }

    friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

private:
    friend SimilarityMatrix build_sm(const DatasetView&);
    friend SimilarityMatrix update_sm_after_drop(const SimilarityMatrix&, const DatasetView&,
                                                 const std::vector<std::size_t>&);

    void check(std::size_t i, std::size_t j) const {
        if (i == j) throw std::invalid_argument("diagonal of the similarity matrix is not stored");
        if (i >= size_ || j >= size_) throw std::out_of_range("similarity index out of range");
    }

    std::size_t size_ = 0;
    std::size_t theta_ = 0;
    std::vector<value_type> values_;
};

/// Thresholded similarity matrix: bit (i, j) is set iff m(i, j) > alpha.
class InfluenceMatrix {
public:
    InfluenceMatrix(std::size_t size, double alpha, std::vector<std::uint8_t> bits)
        : size_(size), alpha_(alpha), bits_(std::move(bits)) {}

    std::size_t size() const noexcept { return size_; }
    double alpha() const noexcept { return alpha_; }
    bool operator()(std::size_t i, std::size_t j) const {
        if (i == j || i >= size_ || j >= size_) throw std::out_of_range("influence index out of range");
        return bits_[SimilarityMatrix::offset(i, j, size_)] != 0;
    }
    std::size_t count() const noexcept { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

private:
    std::size_t size_;
    double alpha_;
    std::vector<std::uint8_t> bits_;
};

namespace detail {

inline void require_features(const DatasetView& v) {
    if (v.features() == 0) throw DataError("similarity over an empty feature set");
}

// Column-major copy of the view's cells; keeps the pair loop on contiguous memory.
inline std::vector<CategoryId> columns(const DatasetView& v) {
    std::vector<CategoryId> cols(v.rows() * v.features());
    for (std::size_t f = 0; f < v.features(); ++f)
        for (std::size_t r = 0; r < v.rows(); ++r) cols[f * v.rows() + r] = v.at(r, f);
    return cols;
}

}  // namespace detail

/// Count of matches between view rows x and y over all view features.
inline std::size_t cm(const DatasetView& v, std::size_t x, std::size_t y) {
    detail::require_features(v);
    std::size_t c = 0;
    for (std::size_t f = 0; f < v.features(); ++f) c += v.at(x, f) == v.at(y, f);
    return c;
}

/// Count of matches between two dataset rows over the given features.
inline std::size_t cm(const Dataset& ds, std::size_t x, std::size_t y, std::span<const std::size_t> features) {
    if (features.empty()) throw DataError("similarity over an empty feature set");
    if (x >= ds.rows() || y >= ds.rows()) throw std::out_of_range("row index out of range");
    std::size_t c = 0;
    for (auto f : features) {
        if (f >= ds.features()) throw std::out_of_range("feature index out of range");
        c += ds.at(x, f) == ds.at(y, f);
    }
    return c;
}

inline double overlap(const DatasetView& v, std::size_t x, std::size_t y) {
    return static_cast<double>(cm(v, x, y)) / static_cast<double>(v.features());
}

/// Goodall similarity; matches on rare categories weigh more. Frequencies are
/// those of the view's rows.
inline double goodall(const DatasetView& v, std::size_t x, std::size_t y) {
    detail::require_features(v);
    const double n = static_cast<double>(v.rows());
    if (v.rows() < 2) throw DataError("Goodall similarity needs at least two rows");
    double sum = 0.0;
    for (std::size_t f = 0; f < v.features(); ++f) {
        const auto c = v.at(x, f);
        if (c != v.at(y, f)) continue;
        const double fc = static_cast<double>(v.frequency(f, c));
        sum += 1.0 - fc * (fc - 1.0) / (n * (n - 1.0));
    }
    return sum / static_cast<double>(v.features());
}

/// Lin similarity (natural log; the base cancels in the ratio).
inline double lin(const DatasetView& v, std::size_t x, std::size_t y) {
    detail::require_features(v);
    if (v.rows() < 2) throw DataError("Lin similarity needs at least two rows");
    const double n = static_cast<double>(v.rows());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t f = 0; f < v.features(); ++f) {
        const auto cx = v.at(x, f);
        const auto cy = v.at(y, f);
        const double px = static_cast<double>(v.frequency(f, cx)) / n;
        const double py = static_cast<double>(v.frequency(f, cy)) / n;
        num += cx == cy ? 2.0 * std::log(px) : 2.0 * std::log(px + py);
        den += std::log(px) + std::log(py);
    }
    if (den == 0.0) throw DataError("Lin similarity undefined: every category covers all rows");
    return num / den;
}

/// Pairwise match counts over all rows (entities) and features of the view.
inline SimilarityMatrix build_sm(const DatasetView& v) {
    SimilarityMatrix sm(v.rows(), v.features());
    if (v.rows() < 2) return sm;
    detail::require_features(v);
    const auto cols = detail::columns(v);
    const std::size_t e = v.rows();
    for (std::size_t f = 0; f < v.features(); ++f) {
        const CategoryId* col = cols.data() + f * e;
        std::size_t k = 0;
        for (std::size_t i = 0; i + 1 < e; ++i) {
            const CategoryId ci = col[i];
            for (std::size_t j = i + 1; j < e; ++j, ++k) sm.values_[k] += col[j] == ci;
        }
    }
    return sm;
}

/// Removes the contribution of `dropped` (source feature ids, all present in
/// the view) from an unmasked match-count matrix built over `v`. Equal to
/// build_sm over the view without those features.
inline SimilarityMatrix update_sm_after_drop(const SimilarityMatrix& sm, const DatasetView& v,
                                             const std::vector<std::size_t>& dropped) {
    if (sm.size() != v.rows()) throw std::invalid_argument("similarity matrix does not match the view's rows");
    if (sm.theta() != v.features()) throw std::invalid_argument("similarity matrix theta does not match the view");

    std::vector<std::size_t> local;
    for (auto d : dropped) {
        const auto& sf = v.source_features();
        auto it = std::find(sf.begin(), sf.end(), d);
        if (it == sf.end()) throw std::out_of_range("dropped feature " + std::to_string(d) + " is not remaining");
        const auto idx = static_cast<std::size_t>(it - sf.begin());
        if (std::find(local.begin(), local.end(), idx) != local.end())
            throw std::invalid_argument("dropped feature listed twice");
        local.push_back(idx);
    }

    SimilarityMatrix out = sm;
    out.theta_ = sm.theta() - local.size();
    const std::size_t e = v.rows();
    for (auto f : local) {
        std::size_t k = 0;
        for (std::size_t i = 0; i + 1 < e; ++i) {
            const CategoryId ci = v.at(i, f);
            for (std::size_t j = i + 1; j < e; ++j, ++k) {
                if (v.at(j, f) != ci) continue;
                if (out.values_[k] == 0) throw std::logic_error("match count underflow: matrix was masked");
                --out.values_[k];
            }
        }
    }
    return out;
}

inline InfluenceMatrix influence(const SimilarityMatrix& sm, double alpha = 0.0) {
    std::vector<std::uint8_t> bits(sm.pair_count());
    const auto vals = sm.values();
    for (std::size_t k = 0; k < vals.size(); ++k) bits[k] = static_cast<double>(vals[k]) > alpha ? 1 : 0;
    return InfluenceMatrix(sm.size(), alpha, std::move(bits));
}

}  // namespace mbc

#endif  // MBC_SIMILARITY_HPP

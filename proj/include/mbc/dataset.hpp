#ifndef MBC_DATASET_HPP
#define MBC_DATASET_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mbc/csv.hpp"
#include "mbc/error.hpp"

namespace mbc {

using CategoryId = std::uint32_t;

enum class MissingPolicy {
    reject,    // a missing marker is a data error
    category,  // each feature gets one extra "?" category
};

inline constexpr std::string_view kMissingMarker = "?";

/// Integer-encoded categorical table. Categories are numbered per feature in
/// first-appearance order; labels, when present, are kept apart from the
/// features and never seen by the clustering code.
class Dataset {
public:
    /// Encodes a table of raw strings. Every row must have exactly
    /// feature_names.size() fields. Fields are trimmed before encoding.
    static Dataset encode(std::vector<std::string> feature_names,
                          const std::vector<std::vector<std::string>>& rows,
                          MissingPolicy missing = MissingPolicy::reject,
                          std::optional<std::vector<std::string>> labels = std::nullopt) {
        if (rows.empty()) throw DataError("dataset has no rows");
        if (feature_names.empty()) throw DataError("dataset has no feature columns");
        if (labels && labels->size() != rows.size())
            throw DataError("label count does not match row count");

        Dataset ds;
        ds.n_ = rows.size();
        ds.m_ = feature_names.size();
        ds.names_ = std::move(feature_names);
        ds.labels_ = std::move(labels);
        ds.categories_.resize(ds.m_);
        ds.freq_.resize(ds.m_);
        ds.cells_.resize(ds.n_ * ds.m_);

        std::vector<std::unordered_map<std::string, CategoryId>> dict(ds.m_);
        for (std::size_t r = 0; r < ds.n_; ++r) {
            if (rows[r].size() != ds.m_)
                throw ParseError("expected " + std::to_string(ds.m_) + " fields, got " +
                                     std::to_string(rows[r].size()),
                                 r + 1);
            for (std::size_t f = 0; f < ds.m_; ++f) {
                std::string value = csv::trim(rows[r][f]);
                if (value.empty() || value == kMissingMarker) {
                    if (missing == MissingPolicy::reject)
                        throw ParseError("missing value in feature '" + ds.names_[f] + "'", r + 1, f + 1);
                    value = std::string(kMissingMarker);
                }
                auto [it, inserted] =
                    dict[f].try_emplace(value, static_cast<CategoryId>(ds.categories_[f].size()));
                if (inserted) {
                    ds.categories_[f].push_back(value);
                    ds.freq_[f].push_back(0);
                }
                ds.cells_[r * ds.m_ + f] = it->second;
                ++ds.freq_[f][it->second];
            }
        }
        return ds;
    }

    std::size_t rows() const noexcept { return n_; }
    std::size_t features() const noexcept { return m_; }

    CategoryId at(std::size_t row, std::size_t feature) const noexcept { return cells_[row * m_ + feature]; }
    std::span<const CategoryId> row(std::size_t r) const { return {cells_.data() + r * m_, m_}; }

    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    const std::string& feature_name(std::size_t f) const { return names_.at(f); }

    std::size_t category_count(std::size_t feature) const { return categories_.at(feature).size(); }
    const std::vector<std::string>& category_labels(std::size_t feature) const { return categories_.at(feature); }

    /// Original (trimmed) string of a cell.
    const std::string& decode(std::size_t row, std::size_t feature) const {
        check_row(row);
        return categories_.at(feature)[at(row, feature)];
    }

    /// Occurrence count of a category over all rows.
    std::size_t frequency(std::size_t feature, CategoryId category) const {
        if (feature >= m_) throw std::out_of_range("feature index out of range");
        if (category >= freq_[feature].size()) throw std::out_of_range("category id out of range");
        return freq_[feature][category];
    }

    const std::optional<std::vector<std::string>>& labels() const noexcept { return labels_; }

    std::optional<std::size_t> find_feature(std::string_view name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - names_.begin());
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    Dataset() = default;

    void check_row(std::size_t r) const {
        if (r >= n_) throw std::out_of_range("row index out of range");
    }

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<std::string> names_;
    std::vector<CategoryId> cells_;
    std::vector<std::vector<std::string>> categories_;
    std::vector<std::vector<std::size_t>> freq_;
    std::optional<std::vector<std::string>> labels_;
};

struct CsvOptions {
    std::optional<std::string> label_column;
    MissingPolicy missing = MissingPolicy::reject;
};

/// Parses CSV text with a mandatory header row.
inline Dataset parse_dataset(std::istream& in, const CsvOptions& opts = {}) {
    auto records = csv::read(in);
    if (records.empty()) throw DataError("empty input: header row required");

    std::vector<std::string> header;
    for (const auto& h : records.front().fields) header.push_back(csv::trim(h));
    const std::size_t width = header.size();

    std::optional<std::size_t> label_idx;
    if (opts.label_column) {
        auto it = std::find(header.begin(), header.end(), *opts.label_column);
        if (it == header.end()) throw DataError("label column '" + *opts.label_column + "' not found in header");
        label_idx = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::string> names;
    for (std::size_t c = 0; c < width; ++c)
        if (c != label_idx) names.push_back(header[c]);

    std::vector<std::vector<std::string>> rows;
    std::optional<std::vector<std::string>> labels;
    if (label_idx) labels.emplace();
    rows.reserve(records.size() - 1);

    for (std::size_t i = 1; i < records.size(); ++i) {
        auto& rec = records[i];
        if (rec.fields.size() != width)
            throw ParseError("ragged row: expected " + std::to_string(width) + " fields, got " +
                                 std::to_string(rec.fields.size()),
                             rec.line);
        std::vector<std::string> row;
        row.reserve(names.size());
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_idx) {
                labels->push_back(csv::trim(rec.fields[c]));
            } else {
                auto v = csv::trim(rec.fields[c]);
                if ((v.empty() || v == kMissingMarker) && opts.missing == MissingPolicy::reject)
                    throw ParseError("missing value in column '" + header[c] + "'", rec.line, c + 1);
                row.push_back(std::move(v));
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no data rows after header");
    return Dataset::encode(std::move(names), rows, opts.missing, std::move(labels));
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_dataset(in, opts);
}

/// Read-only selection of rows and features of a Dataset, with category
/// frequencies recomputed over the selected rows. The Dataset must outlive
/// the view.
// Holds a pointer to the dataset; the dataset must outlive the view.
class DatasetView {
public:
    explicit DatasetView(const Dataset&&) = delete;
    DatasetView(const Dataset&&, std::vector<std::size_t>, std::vector<std::size_t>) = delete;

    explicit DatasetView(const Dataset& ds) : ds_(&ds) {
        rows_.resize(ds.rows());
        features_.resize(ds.features());
        for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] = i;
        for (std::size_t i = 0; i < features_.size(); ++i) features_[i] = i;
        count();
    }

    DatasetView(const Dataset& ds, std::vector<std::size_t> rows, std::vector<std::size_t> features)
        : ds_(&ds), rows_(std::move(rows)), features_(std::move(features)) {
        for (auto r : rows_)
            if (r >= ds.rows()) throw std::out_of_range("view row out of range");
        for (auto f : features_)
            if (f >= ds.features()) throw std::out_of_range("view feature out of range");
        count();
    }

    const Dataset& dataset() const noexcept { return *ds_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t features() const noexcept { return features_.size(); }

    /// Cell at view-local (row, feature).
    CategoryId at(std::size_t r, std::size_t f) const noexcept { return ds_->at(rows_[r], features_[f]); }

    std::size_t source_row(std::size_t r) const { return rows_.at(r); }
    std::size_t source_feature(std::size_t f) const { return features_.at(f); }
    const std::vector<std::size_t>& source_rows() const noexcept { return rows_; }
    const std::vector<std::size_t>& source_features() const noexcept { return features_; }

    /// Frequency of a category among the view's rows (view-local feature index).
    std::size_t frequency(std::size_t f, CategoryId c) const {
        if (f >= freq_.size()) throw std::out_of_range("feature index out of range");
        if (c >= freq_[f].size()) throw std::out_of_range("category id out of range");
        return freq_[f][c];
    }
    std::span<const std::size_t> frequencies(std::size_t f) const { return freq_.at(f); }

    /// Keeps only the listed source features, in the listed order.
    DatasetView restrict(const std::vector<std::size_t>& keep) const {
        if (keep.empty()) throw DataError("cannot restrict to an empty feature set");
        for (auto f : keep)
            if (std::find(features_.begin(), features_.end(), f) == features_.end())
                throw std::out_of_range("feature " + std::to_string(f) + " is not in the view");
        return DatasetView(*ds_, rows_, keep);
    }

    /// Selects source rows, keeping the feature set.
    DatasetView select_rows(std::vector<std::size_t> rows) const { return DatasetView(*ds_, std::move(rows), features_); }

private:
    void count() {
        freq_.assign(features_.size(), {});
        for (std::size_t f = 0; f < features_.size(); ++f) {
            freq_[f].assign(ds_->category_count(features_[f]), 0);
            for (auto r : rows_) ++freq_[f][ds_->at(r, features_[f])];
        }
    }

    const Dataset* ds_;
    std::vector<std::size_t> rows_;
    std::vector<std::size_t> features_;
    std::vector<std::vector<std::size_t>> freq_;
};

inline DatasetView restrict(const Dataset& ds, const std::vector<std::size_t>& keep_features) {
    return DatasetView(ds).restrict(keep_features);
}

inline std::size_t frequency(const Dataset& ds, std::size_t feature, CategoryId category) {
    return ds.frequency(feature, category);
}

}  // namespace mbc

#endif  // MBC_DATASET_HPP

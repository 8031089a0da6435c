// mbc: command-line front end for matching-based clustering of categorical CSV data.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mbc/dataset.hpp"
#include "mbc/evaluation.hpp"
#include "mbc/importance.hpp"
#include "mbc/io.hpp"
#include "mbc/mbc.hpp"
#include "mbc/similarity.hpp"

namespace {

using nlohmann::json;

struct DataOptions {
    std::string input;
    std::optional<std::string> label_column;
    mbc::MissingPolicy missing = mbc::MissingPolicy::reject;
    std::optional<std::string> out;
    std::string format;
};

struct ClusterOptions {
    mbc::MbcConfig config;
    bool no_anti_merge = false;
    std::optional<std::size_t> k;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_data_options(CLI::App* cmd, DataOptions& o, const std::string& default_format,
                      const std::vector<std::string>& formats) {
    cmd->add_option("input", o.input, "CSV file with a header row")->required();
    cmd->add_option("--label-column", o.label_column, "column held out of the features (class labels)");
    cmd->add_option("--missing", o.missing, "treatment of '?' or empty cells")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, mbc::MissingPolicy>{{"reject", mbc::MissingPolicy::reject},
                                                      {"category", mbc::MissingPolicy::category}},
            CLI::ignore_case))
        ->option_text("reject|category");
    cmd->add_option("--out", o.out, "write to this path instead of stdout");
    o.format = default_format;
    cmd->add_option("--format", o.format, "output encoding")->check(CLI::IsMember(formats));
}

void add_cluster_options(CLI::App* cmd, ClusterOptions& o) {
    cmd->add_option("--importance", o.config.importance, "feature importance measure")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, mbc::ImportanceMeasure>{{"pgp", mbc::ImportanceMeasure::pgp},
                                                          {"ppp", mbc::ImportanceMeasure::ppp}},
            CLI::ignore_case))
        ->option_text("pgp|ppp");
    cmd->add_option("--ties", o.config.ties, "handling of features tied at the lowest importance")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, mbc::TiePolicy>{{"drop-all", mbc::TiePolicy::drop_all},
                                                  {"pgp2", mbc::TiePolicy::pgp2_single}},
            CLI::ignore_case))
        ->option_text("drop-all|pgp2");
    cmd->add_option("--population", o.config.population, "rows the importance is computed over")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, mbc::ImportancePopulation>{{"entities", mbc::ImportancePopulation::entities},
                                                             {"objects", mbc::ImportancePopulation::objects}},
            CLI::ignore_case))
        ->option_text("entities|objects");
    cmd->add_flag("--no-anti-merge", o.no_anti_merge, "skip the anti-merge rule (dendrogram mode)");
    cmd->add_option("--k", o.k, "requested cluster count; cuts the dendrogram")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", o.config.alpha, "influence threshold for pgp2 tie breaking");
}

mbc::MbcConfig finish(const ClusterOptions& o) {
    auto c = o.config;
    c.anti_merge = !o.no_anti_merge;
    c.k = o.k;
    return c;
}

mbc::Dataset load(const DataOptions& o) {
    return mbc::load_csv(o.input, mbc::CsvOptions{o.label_column, o.missing});
}

void emit(const DataOptions& o, const std::string& text) {
    if (!o.out) {
        std::cout << text;
        return;
    }
    std::ofstream f(*o.out, std::ios::binary);
    if (!f) throw mbc::DataError("cannot write '" + *o.out + "'");
    f << text;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw mbc::DataError("cannot write '" + p.string() + "'");
    f << text;
}

int cmd_cluster(const DataOptions& d, const ClusterOptions& c) {
    const auto ds = load(d);
    const auto config = finish(c);
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = mbc::run(ds, config);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto manifest = mbc::io::manifest_json(d.input, config, result, ds, secs);

    if (d.out) {
        const std::filesystem::path dir(*d.out);
        std::filesystem::create_directories(dir);
        write_file(dir / "assignments.csv", mbc::io::assignments_csv(result.partition, ds.rows()));
        write_file(dir / "dendrogram.json", mbc::io::dendrogram_json(result.dendrogram).dump(2) + "\n");
        write_file(dir / "dendrogram.nwk", mbc::io::newick(result.dendrogram) + "\n");
        write_file(dir / "trace.json", mbc::io::trace_json(result, ds).dump(2) + "\n");
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        return 0;
    }
    if (d.format == "json") {
        json doc{{"clusters", mbc::io::partition_json(result.partition)},
                 {"assignments", mbc::assignments(result.partition, ds.rows())},
                 {"trace", mbc::io::trace_json(result, ds)},
                 {"dendrogram", mbc::io::dendrogram_json(result.dendrogram)}};
        for (auto& a : doc["assignments"]) a = a.get<std::size_t>() + 1;
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << mbc::io::assignments_csv(result.partition, ds.rows());
    }
    std::cerr << manifest.dump() << '\n';
    return 0;
}

int cmd_dendrogram(const DataOptions& d, ClusterOptions c) {
    const auto ds = load(d);
    c.no_anti_merge = true;
    const auto result = mbc::run(ds, finish(c));
    if (d.format == "json") emit(d, mbc::io::dendrogram_json(result.dendrogram).dump(2) + "\n");
    else emit(d, mbc::io::newick(result.dendrogram) + "\n");
    return 0;
}

int cmd_importance(const DataOptions& d, const std::string& measure, double alpha) {
    const auto ds = load(d);
    const mbc::DatasetView view(ds);

    struct Row {
        std::size_t feature;
        std::uint64_t num;
        std::uint64_t den;
        std::optional<mbc::Rational> value;
    };
    std::vector<Row> rows;
    if (measure == "pgp") {
        const auto r = mbc::pgp(view);
        for (std::size_t i = 0; i < r.features.size(); ++i)
            rows.push_back({r.features[i], r.match_pairs[i], r.match_total(), r.pgp[i]});
    } else if (measure == "ppp") {
        const auto r = mbc::ppp(view);
        for (std::size_t i = 0; i < r.features.size(); ++i)
            rows.push_back({r.features[i], r.mismatch_pairs[i], r.mismatch_total(), r.ppp[i]});
    } else {
        const auto r = mbc::pgp2_each(view, mbc::build_sm(view), alpha);
        for (std::size_t i = 0; i < r.features.size(); ++i)
            rows.push_back({r.features[i], r.surviving_links[i], r.links, r.pgp2[i]});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.value && b.value) return *a.value > *b.value;
        return a.value.has_value() && !b.value.has_value();
    });

    std::ostringstream os;
    if (d.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            arr.push_back({{"rank", i + 1},
                           {"feature", ds.feature_name(r.feature)},
                           {"index", r.feature},
                           {"numerator", r.num},
                           {"denominator", r.den},
                           {"value", r.value ? json(mbc::to_double(*r.value)) : json(nullptr)}});
        }
        os << json{{"measure", measure}, {"features", std::move(arr)}}.dump(2) << '\n';
    } else {
        std::size_t w = 7;
        for (const auto& r : rows) w = std::max(w, ds.feature_name(r.feature).size());
        os << std::left << std::setw(5) << "rank" << std::setw(static_cast<int>(w) + 1) << "feature" << std::right
           << std::setw(12) << "numerator" << std::setw(12) << "denominator" << std::setw(10) << measure << '\n';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            os << std::left << std::setw(5) << i + 1 << std::setw(static_cast<int>(w) + 1) << ds.feature_name(r.feature)
               << std::right << std::setw(12) << r.num << std::setw(12) << r.den << std::setw(10);
            if (r.value) os << std::fixed << std::setprecision(4) << mbc::to_double(*r.value);
            else os << "n/a";
            os << '\n';
        }
    }
    emit(d, os.str());
    return 0;
}

int cmd_similarity(const DataOptions& d, const std::string& measure) {
    const auto ds = load(d);
    const mbc::DatasetView view(ds);
    const std::size_t n = ds.rows();

    auto value = [&](std::size_t i, std::size_t j) -> double {
        if (measure == "cm") return static_cast<double>(mbc::cm(view, i, j));
        if (measure == "overlap") return mbc::overlap(view, i, j);
        if (measure == "goodall") return mbc::goodall(view, i, j);
        return mbc::lin(view, i, j);
    };
    std::vector<std::vector<double>> full(n, std::vector<double>(n));
    if (measure == "cm") {
        const auto sm = mbc::build_sm(view);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                full[i][j] = i == j ? static_cast<double>(ds.features()) : static_cast<double>(sm(i, j));
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) full[i][j] = full[j][i] = value(i, j);
    }

    std::ostringstream os;
    os << std::setprecision(10);
    if (d.format == "json") {
        os << json{{"measure", measure}, {"objects", n}, {"matrix", full}}.dump() << '\n';
    } else {
        os << "object";
        for (std::size_t j = 0; j < n; ++j) os << ',' << j + 1;
        os << '\n';
        for (std::size_t i = 0; i < n; ++i) {
            os << i + 1;
            for (std::size_t j = 0; j < n; ++j) os << ',' << full[i][j];
            os << '\n';
        }
    }
    emit(d, os.str());
    return 0;
}

int cmd_eval(DataOptions d, const ClusterOptions& c, const std::string& labels_column,
             const std::optional<std::string>& assignments_path) {
    if (d.label_column && *d.label_column != labels_column)
        throw UsageError("--label-column and --labels name different columns");
    d.label_column = labels_column;
    const auto ds = load(d);
    std::vector<std::size_t> cluster_of;
    if (assignments_path) {
        std::ifstream in(*assignments_path, std::ios::binary);
        if (!in) throw mbc::DataError("cannot open '" + *assignments_path + "'");
        cluster_of = mbc::io::read_assignments(in, ds.rows());
    } else {
        const auto result = mbc::run(ds, finish(c));
        cluster_of = mbc::assignments(result.partition, ds.rows());
    }
    const auto table = mbc::contingency(cluster_of, *ds.labels());
    auto summary = mbc::io::evaluation_json(table);

    std::ostringstream os;
    if (d.format == "json") {
        os << summary.dump(2) << '\n';
    } else {
        summary.erase("table");
        os << (d.format == "csv" ? mbc::io::contingency_csv(table) : mbc::io::contingency_text(table)) << '\n'
           << summary.dump() << '\n';
    }
    emit(d, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matching-based clustering for categorical data", "mbc"};
    app.require_subcommand(1);

    DataOptions data;
    ClusterOptions cluster;
    std::string measure;
    double alpha = 0.0;
    std::string labels_column;
    std::optional<std::string> assignments_path;

    auto* c_cluster = app.add_subcommand("cluster", "cluster the rows of a CSV file");
    add_data_options(c_cluster, data, "csv", {"csv", "json"});
    add_cluster_options(c_cluster, cluster);

    auto* c_dendro = app.add_subcommand("dendrogram", "build the merge tree (anti-merge rule skipped)");
    add_data_options(c_dendro, data, "newick", {"newick", "json"});
    add_cluster_options(c_dendro, cluster);

    auto* c_imp = app.add_subcommand("importance", "rank features by importance");
    add_data_options(c_imp, data, "text", {"text", "json"});
    measure = "pgp";
    c_imp->add_option("--measure", measure, "pgp, ppp or pgp2")->check(CLI::IsMember({"pgp", "ppp", "pgp2"}));
    c_imp->add_option("--alpha", alpha, "influence threshold for pgp2");

    auto* c_sim = app.add_subcommand("similarity", "pairwise similarity matrix of all rows");
    add_data_options(c_sim, data, "csv", {"csv", "json"});
    std::string sim_measure = "cm";
    c_sim->add_option("--measure", sim_measure, "cm, overlap, goodall or lin")
        ->check(CLI::IsMember({"cm", "overlap", "goodall", "lin"}));

    auto* c_eval = app.add_subcommand("eval", "score a clustering against a label column");
    add_data_options(c_eval, data, "text", {"text", "csv", "json"});
    add_cluster_options(c_eval, cluster);
    c_eval->add_option("--labels", labels_column, "column holding the true labels")->required();
    c_eval->add_option("--assignments", assignments_path, "object,cluster CSV to score instead of running");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_cluster) return cmd_cluster(data, cluster);
        if (*c_dendro) return cmd_dendrogram(data, cluster);
        if (*c_imp) return cmd_importance(data, measure, alpha);
        if (*c_sim) return cmd_similarity(data, sim_measure);
        if (*c_eval) return cmd_eval(data, cluster, labels_column, assignments_path);
    } catch (const UsageError& e) {
        std::cerr << "mbc: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"input", data.input}}.dump() << '\n';
        return 1;
    }
    return 2;
}

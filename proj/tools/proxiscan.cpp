// proxiscan: proximity-degree outlier detection for delimited numeric data.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxiscan/proxiscan.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

struct SelectorOptions {
    std::string dataset;
    std::string file;
    std::string manifest = "data/manifest.json";
    std::string delimiter = ",";
    bool header = false;
    std::string label_column;
    std::string columns;
    std::string missing;  // "", "drop" or "impute"
};

struct AnalysisOptions {
    double tau = 0.1;
    std::size_t k = 4;
    std::string similarity = "linear";
};

struct Loaded {
    proxiscan::Dataset data;
    proxiscan::MissingLog log;
    proxiscan::IngestOptions options;
    std::string name;  // manifest name, empty for --file
    std::string path;
};

void add_selector_flags(CLI::App* cmd, SelectorOptions& sel, bool& as_json) {
    cmd->add_flag("--json", as_json, "Emit a machine-readable JSON report");
    auto* dataset = cmd->add_option("--dataset", sel.dataset, "Dataset name from the manifest");
    auto* file = cmd->add_option("--file", sel.file, "Delimited text file to analyze");
    dataset->excludes(file);
    cmd->add_option("--manifest", sel.manifest, "Fixture manifest path")
        ->capture_default_str();
    cmd->add_option("--delimiter", sel.delimiter, "Cell delimiter for --file")
        ->capture_default_str();
    cmd->add_flag("--header", sel.header, "First line of --file is a header");
    cmd->add_option("--label-column", sel.label_column,
                    "Class column (index or header name) to strip for reporting");
    cmd->add_option("--columns", sel.columns, "Feature columns to keep, e.g. 1-9 or 0,2,5");
    cmd->add_option("--missing", sel.missing, "Missing-value policy")
        ->check(CLI::IsMember({"drop", "impute"}));
}

void add_similarity_flag(CLI::App* cmd, AnalysisOptions& analysis) {
    cmd->add_option("--similarity", analysis.similarity,
                    "Similarity profile: linear (1 - normalized distance) or squared")
        ->check(CLI::IsMember({"linear", "squared"}))
        ->capture_default_str();
}

Loaded load_selection(const SelectorOptions& sel) {
    Loaded loaded;
    if (!sel.dataset.empty()) {
        const auto manifest = proxiscan::load_manifest(sel.manifest);
        const auto entry = proxiscan::manifest_lookup(manifest, sel.dataset);
        if (!entry) {
            std::string names;
            for (const auto& [name, _] : manifest) names += (names.empty() ? "" : ", ") + name;
            throw std::runtime_error("unknown dataset '" + sel.dataset + "' (manifest has: " +
                                     names + ")");
        }
        loaded.options = entry->options;
        loaded.path = entry->file.string();
        loaded.name = sel.dataset;
    } else if (!sel.file.empty()) {
        if (sel.delimiter.size() != 1)
            throw std::runtime_error("--delimiter must be a single character");
        loaded.options.delimiter = sel.delimiter[0];
        loaded.options.has_header = sel.header;
        if (!sel.label_column.empty()) loaded.options.label_column = sel.label_column;
        if (!sel.columns.empty())
            loaded.options.column_subset = proxiscan::parse_column_spec(sel.columns);
        loaded.path = sel.file;
    } else {
        throw std::runtime_error("one of --dataset or --file is required");
    }
    if (!sel.missing.empty()) {
        loaded.options.missing_policy = sel.missing == "impute"
                                            ? proxiscan::MissingPolicy::impute_mean
                                            : proxiscan::MissingPolicy::drop_row;
    }
    loaded.data = proxiscan::load_csv(loaded.path, loaded.options, &loaded.log);
    return loaded;
}

ordered_json dataset_block(const Loaded& loaded) {
    ordered_json j;
    if (loaded.name.empty())
        j["name"] = nullptr;
    else
        j["name"] = loaded.name;
    j["source"] = loaded.path;
    j["fingerprint"] = proxiscan::file_fingerprint(loaded.path);
    j["n"] = loaded.data.n();
    j["p"] = loaded.data.p();
    const auto summary = proxiscan::dataset_summary(loaded.data);
    if (summary.classes)
        j["classes"] = *summary.classes;
    else
        j["classes"] = nullptr;
    j["dropped_rows"] = loaded.log.dropped_rows.size();
    j["imputed_cells"] = loaded.log.imputed_cells;
    return j;
}

ordered_json ingest_options_block(const Loaded& loaded) {
    ordered_json j;
    j["delimiter"] = std::string(1, loaded.options.delimiter);
    j["header"] = loaded.options.has_header;
    if (loaded.options.label_column)
        j["label_column"] = *loaded.options.label_column;
    else
        j["label_column"] = nullptr;
    if (loaded.options.column_subset)
        j["columns"] = *loaded.options.column_subset;
    else
        j["columns"] = nullptr;
    j["missing"] = proxiscan::to_string(loaded.options.missing_policy);
    return j;
}

ordered_json report_envelope(const std::string& command, const Loaded& loaded) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["dataset"] = dataset_block(loaded);
    doc["options"] = ingest_options_block(loaded);
    return doc;
}

void emit(const ordered_json& doc, bool as_json) {
    if (as_json) std::cout << doc.dump(2) << "\n";
}

void print_detection_text(const proxiscan::DetectionReport& report) {
    std::printf("D_min     :");
    for (double d : report.raw_mins) std::printf(" %.4f", d);
    std::printf("\nD_range   : %.4f\n", report.d_range);
    if (report.uniform_proximity) {
        std::printf("verdict   : no outliers (uniform proximity: all degrees equal)\n");
        return;
    }
    std::printf("normalized:");
    for (double d : report.normalized_mins) std::printf(" %.4f", d);
    std::printf("\ndecisive gap: %.4f (tau %.4f)\n", report.decisive_gap, report.tau);
    std::printf("verdict   : %s\n", report.has_outlier ? "outlier" : "no outliers");
    for (const auto& f : report.flagged)
        std::printf("flagged   : row %zu (1-based) / %zu (0-based), degree %.4f, gap %.4f\n",
                    f.index + 1, f.index, f.degree, f.gap_ratio);
}

int cmd_summary(const SelectorOptions& sel, bool as_json) {
    const Loaded loaded = load_selection(sel);
    const auto summary = proxiscan::dataset_summary(loaded.data);
    if (as_json) {
        ordered_json doc = report_envelope("summary", loaded);
        doc["summary"] = proxiscan::summary_to_json(summary);
        emit(doc, true);
        return kExitOk;
    }
    std::printf("%zu samples, %zu attributes", summary.samples, summary.attributes);
    if (summary.classes)
        std::printf(", %zu classes\n", *summary.classes);
    else
        std::printf(" (no label column)\n");
    std::printf("%-20s %12s %12s %12s\n", "attribute", "min", "max", "range");
    for (const auto& s : summary.stats)
        std::printf("%-20s %12.4f %12.4f %12.4f\n", s.name.c_str(), s.min, s.max, s.range);
    return kExitOk;
}

int cmd_detect(const SelectorOptions& sel, const AnalysisOptions& analysis, bool as_json) {
    const auto start = std::chrono::steady_clock::now();
    const Loaded loaded = load_selection(sel);
    const auto kind = proxiscan::similarity_kind_from_string(analysis.similarity);
    const auto weights = proxiscan::metric_weights(proxiscan::compute_ranges(loaded.data));
    // small datasets carry fewer order statistics than the default k
    const std::size_t k = std::min(analysis.k, loaded.data.n());
    const auto profile = proxiscan::proximity_profile(loaded.data, weights, k, kind);
    const auto report = proxiscan::detect(profile, analysis.tau);
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;

    if (as_json) {
        ordered_json doc = report_envelope("detect", loaded);
        doc["options"]["tau"] = analysis.tau;
        doc["options"]["k"] = k;
        doc["options"]["similarity"] = analysis.similarity;
        doc["profile"] = proxiscan::profile_to_json(profile);
        doc["detection"] = proxiscan::detection_to_json(report);
        emit(doc, true);
        std::fprintf(stderr, "elapsed: %.1f ms\n", elapsed.count());
        return kExitOk;
    }
    std::printf("dataset   : %s (%zu x %zu)\n", loaded.path.c_str(), loaded.data.n(),
                loaded.data.p());
    std::printf("similarity: %s   tau: %g   k: %zu\n", analysis.similarity.c_str(), analysis.tau,
                k);
    print_detection_text(report);
    std::printf("elapsed   : %.1f ms\n", elapsed.count());
    return kExitOk;
}

int cmd_top(const SelectorOptions& sel, const AnalysisOptions& analysis, std::size_t m,
            bool as_json) {
    const auto start = std::chrono::steady_clock::now();
    const Loaded loaded = load_selection(sel);
    const auto kind = proxiscan::similarity_kind_from_string(analysis.similarity);
    const auto weights = proxiscan::metric_weights(proxiscan::compute_ranges(loaded.data));
    if (loaded.data.n() < m + 2)
        throw std::runtime_error("dataset too small for top-M (n=" +
                                 std::to_string(loaded.data.n()) + ", need m + 2)");
    const std::size_t k = std::min(std::max<std::size_t>(4, m + 2), loaded.data.n());
    const auto profile = proxiscan::proximity_profile(loaded.data, weights, k, kind);
    const auto report = proxiscan::top_m(profile, m, analysis.tau);
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;

    if (as_json) {
        ordered_json doc = report_envelope("top", loaded);
        doc["options"]["tau"] = analysis.tau;
        doc["options"]["m"] = m;
        doc["options"]["k"] = k;
        doc["options"]["similarity"] = analysis.similarity;
        doc["profile"] = proxiscan::profile_to_json(profile);
        doc["detection"] = proxiscan::detection_to_json(report);
        emit(doc, true);
        std::fprintf(stderr, "elapsed: %.1f ms\n", elapsed.count());
        return kExitOk;
    }
    std::printf("dataset   : %s (%zu x %zu)\n", loaded.path.c_str(), loaded.data.n(),
                loaded.data.p());
    std::printf("similarity: %s   tau: %g   m: %zu\n", analysis.similarity.c_str(), analysis.tau,
                m);
    std::printf("candidates (ascending degree):\n");
    for (const auto& [idx, degree] : profile.k_smallest)
        std::printf("  row %zu (1-based) / %zu (0-based), degree %.4f\n", idx + 1, idx, degree);
    print_detection_text(report);
    std::printf("elapsed   : %.1f ms\n", elapsed.count());
    return kExitOk;
}

int cmd_cluster(const SelectorOptions& sel, const AnalysisOptions& analysis, std::size_t m,
                std::size_t c, std::uint64_t seed, const proxiscan::FcmConfig& base_cfg,
                std::optional<std::size_t> bound, bool as_json) {
    const Loaded loaded = load_selection(sel);
    const auto kind = proxiscan::similarity_kind_from_string(analysis.similarity);
    const auto weights = proxiscan::metric_weights(proxiscan::compute_ranges(loaded.data));

    std::vector<std::size_t> outliers;
    std::optional<proxiscan::ProximityProfile> profile;
    std::optional<proxiscan::DetectionReport> report;
    if (m > 0) {
        if (loaded.data.n() < m + 2)
            throw std::runtime_error("dataset too small for top-M (n=" +
                                     std::to_string(loaded.data.n()) + ", need m + 2)");
        const std::size_t k = std::min(std::max<std::size_t>(4, m + 2), loaded.data.n());
        profile = proxiscan::proximity_profile(loaded.data, weights, k, kind);
        report = proxiscan::top_m(*profile, m, analysis.tau);
        for (const auto& f : report->flagged) outliers.push_back(f.index);
    }

    proxiscan::FcmConfig cfg = base_cfg;
    cfg.rng_seed = seed;
    const auto centers = proxiscan::seed_centers(loaded.data, outliers, c, seed);
    const auto result = proxiscan::run_fcm(loaded.data, centers, weights, cfg);
    const auto verification =
        proxiscan::verify_outlier_clusters(result, outliers.size(), loaded.data, bound);

    if (as_json) {
        ordered_json doc = report_envelope("cluster", loaded);
        doc["options"]["tau"] = analysis.tau;
        doc["options"]["m"] = m;
        doc["options"]["c"] = c;
        doc["options"]["seed"] = seed;
        doc["options"]["fuzzifier"] = cfg.fuzzifier;
        doc["options"]["tol"] = cfg.tol;
        doc["options"]["max_iter"] = cfg.max_iter;
        doc["options"]["similarity"] = analysis.similarity;
        if (bound)
            doc["options"]["bound"] = *bound;
        else
            doc["options"]["bound"] = nullptr;
        if (profile) {
            doc["profile"] = proxiscan::profile_to_json(*profile);
            doc["detection"] = proxiscan::detection_to_json(*report);
        }
        doc["fcm"] = proxiscan::fcm_to_json(result);
        doc["verification"] = proxiscan::verification_to_json(verification);
        emit(doc, true);
        return kExitOk;
    }
    std::printf("dataset   : %s (%zu x %zu)\n", loaded.path.c_str(), loaded.data.n(),
                loaded.data.p());
    if (report) {
        std::printf("detection (m=%zu, tau=%g): %zu point(s) flagged\n", m, analysis.tau,
                    report->flagged.size());
        for (const auto& f : report->flagged)
            std::printf("  row %zu (1-based) / %zu (0-based), degree %.4f\n", f.index + 1,
                        f.index, f.degree);
    }
    std::printf("fcm       : %zu clusters (%zu outlier-seeded + %zu random), seed %llu\n",
                centers.size(), outliers.size(), c, static_cast<unsigned long long>(seed));
    std::printf("converged : %s after %zu iteration(s), objective %.6g\n",
                result.converged ? "yes" : "no", result.iterations,
                result.objective_trace.empty() ? 0.0 : result.objective_trace.back());
    if (verification.clusters.empty()) {
        std::printf("verification: nothing to verify (no outlier-seeded clusters)\n");
    } else {
        std::printf("verification (bound %zu):\n", verification.bound);
        for (const auto& entry : verification.clusters)
            std::printf("  cluster %zu: population %zu -> %s\n", entry.cluster, entry.population,
                        entry.confirmed ? "confirmed" : "refuted");
        std::printf("  total outlier-cluster population: %zu\n",
                    verification.total_outlier_population);
    }
    return kExitOk;
}

int cmd_curve(const SelectorOptions& sel, const AnalysisOptions& analysis,
              const std::string& out_path, bool as_json) {
    const Loaded loaded = load_selection(sel);
    const auto kind = proxiscan::similarity_kind_from_string(analysis.similarity);
    const auto weights = proxiscan::metric_weights(proxiscan::compute_ranges(loaded.data));
    const auto profile =
        proxiscan::proximity_profile(loaded.data, weights, std::min<std::size_t>(4, loaded.data.n()), kind);

    std::filesystem::path degrees_path(out_path);
    std::filesystem::path norm_path(out_path);
    norm_path.replace_extension();
    norm_path += ".norm";
    norm_path += degrees_path.extension();

    std::ofstream degrees_out(degrees_path);
    std::ofstream norm_out(norm_path);
    if (!degrees_out || !norm_out)
        throw std::runtime_error("cannot write output files at '" + out_path + "'");
    if (profile.d_range <= 0.0)
        std::fprintf(stderr, "warning: d_range is zero; normalized degrees written as 0\n");
    for (std::size_t rank = 0; rank < profile.ascending_order.size(); ++rank) {
        const double degree = profile.degrees[profile.ascending_order[rank]];
        degrees_out << rank + 1 << ',' << proxiscan::detail::format_double(degree) << '\n';
        const double normalized = profile.d_range > 0.0 ? degree / profile.d_range : 0.0;
        norm_out << rank + 1 << ',' << proxiscan::detail::format_double(normalized) << '\n';
    }

    if (as_json) {
        ordered_json doc = report_envelope("curve", loaded);
        doc["options"]["similarity"] = analysis.similarity;
        doc["curve"] = {{"degrees_file", degrees_path.string()},
                        {"normalized_file", norm_path.string()},
                        {"rows", loaded.data.n()},
                        {"d_range", profile.d_range}};
        emit(doc, true);
        return kExitOk;
    }
    std::printf("wrote %s and %s (%zu rows, d_range %.4f)\n", degrees_path.string().c_str(),
                norm_path.string().c_str(), loaded.data.n(), profile.d_range);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proximity-degree outlier detection for numeric tabular data"};
    app.require_subcommand(1);
    bool as_json = false;

    SelectorOptions sel;
    AnalysisOptions analysis;
    std::size_t m = 3;
    std::size_t c = 1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> bound;
    proxiscan::FcmConfig fcm_cfg;
    std::string out_path;

    auto* summary = app.add_subcommand("summary", "Describe a dataset");
    add_selector_flags(summary, sel, as_json);

    auto* detect = app.add_subcommand("detect", "Run the single-outlier gap rule");
    add_selector_flags(detect, sel, as_json);
    add_similarity_flag(detect, analysis);
    detect->add_option("--tau", analysis.tau, "Normalized-gap threshold")->capture_default_str();
    detect->add_option("--k", analysis.k, "Order statistics to report (>= 4)")
        ->check(CLI::Range(std::size_t{4}, std::size_t{1000000}))
        ->capture_default_str();

    auto* top = app.add_subcommand("top", "Rank the top-M outlier candidates");
    add_selector_flags(top, sel, as_json);
    add_similarity_flag(top, analysis);
    top->add_option("--tau", analysis.tau, "Normalized-gap threshold")->capture_default_str();
    top->add_option("--m", m, "Maximum outliers to flag")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* cluster = app.add_subcommand("cluster", "Verify detections with outlier-seeded FCM");
    add_selector_flags(cluster, sel, as_json);
    add_similarity_flag(cluster, analysis);
    cluster->add_option("--tau", analysis.tau, "Normalized-gap threshold")->capture_default_str();
    cluster->add_option("--m", m, "Outlier candidates to seed (0 = plain FCM)")
        ->capture_default_str();
    cluster->add_option("--c", c, "Extra random centers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster->add_option("--seed", seed, "RNG seed for the random centers")->capture_default_str();
    cluster->add_option("--fuzzifier", fcm_cfg.fuzzifier, "FCM fuzzifier (> 1)")
        ->capture_default_str();
    cluster->add_option("--tol", fcm_cfg.tol, "Membership-change stopping tolerance")
        ->capture_default_str();
    cluster->add_option("--max-iter", fcm_cfg.max_iter, "Iteration cap")->capture_default_str();
    cluster->add_option("--bound", bound,
                        "Smallness bound for cluster verification (default: #outliers)");

    auto* curve = app.add_subcommand("curve", "Emit sorted proximity degrees as plot data");
    add_selector_flags(curve, sel, as_json);
    add_similarity_flag(curve, analysis);
    curve->add_option("--out", out_path, "Output file for rank,degree pairs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (summary->parsed()) return cmd_summary(sel, as_json);
        if (detect->parsed()) return cmd_detect(sel, analysis, as_json);
        if (top->parsed()) return cmd_top(sel, analysis, m, as_json);
        if (cluster->parsed())
            return cmd_cluster(sel, analysis, m, c, seed, fcm_cfg, bound, as_json);
        if (curve->parsed()) return cmd_curve(sel, analysis, out_path, as_json);
    } catch (const proxiscan::DegenerateDatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

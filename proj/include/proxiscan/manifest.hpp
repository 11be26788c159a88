#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "proxiscan/dataset.hpp"

namespace proxiscan {

/// One manifest row: where a named dataset lives and how to ingest it.
struct ManifestEntry {
    std::filesystem::path file;  ///< resolved relative to the manifest
    IngestOptions options;
};

using Manifest = std::map<std::string, ManifestEntry>;

/// Loads the fixture manifest: a JSON object mapping dataset name to
/// { file, delimiter, header, label_column, columns, missing }.
inline Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("bad manifest '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("manifest must be a JSON object");

    const auto base = path.parent_path();
    Manifest manifest;
    for (const auto& [name, spec] : doc.items()) {
        ManifestEntry entry;
        entry.file = base / spec.at("file").get<std::string>();
        if (spec.contains("delimiter")) {
            const auto d = spec["delimiter"].get<std::string>();
            if (d.size() != 1) throw std::runtime_error("delimiter must be a single character");
            entry.options.delimiter = d[0];
        }
        if (spec.contains("header")) entry.options.has_header = spec["header"].get<bool>();
        if (spec.contains("label_column"))
            entry.options.label_column = spec["label_column"].get<std::string>();
        if (spec.contains("columns"))
            entry.options.column_subset = parse_column_spec(spec["columns"].get<std::string>());
        if (spec.contains("missing")) {
            const auto policy = spec["missing"].get<std::string>();
            if (policy == "drop")
                entry.options.missing_policy = MissingPolicy::drop_row;
            else if (policy == "impute")
                entry.options.missing_policy = MissingPolicy::impute_mean;
            else
                throw std::runtime_error("unknown missing policy '" + policy + "'");
        }
        manifest.emplace(name, std::move(entry));
    }
    return manifest;
}

/// Looks a dataset up by name, accepting a few historical spellings.
inline std::optional<ManifestEntry> manifest_lookup(const Manifest& manifest,
                                                    const std::string& name) {
    static const std::map<std::string, std::string> aliases = {
        {"breasttissu", "breasttissue"},
        {"spect", "heart"},
    };
    auto it = manifest.find(name);
    if (it == manifest.end()) {
        const auto alias = aliases.find(name);
        if (alias != aliases.end()) it = manifest.find(alias->second);
    }
    if (it == manifest.end()) return std::nullopt;
    return it->second;
}

}  // namespace proxiscan

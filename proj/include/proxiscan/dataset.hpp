#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace proxiscan {

/// Immutable numeric matrix plus bookkeeping. Labels are the stripped
/// class column, kept for reporting only; they never feed detection.
struct Dataset {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> feature_names;
    std::optional<std::vector<std::string>> labels;
    std::string source;

    std::size_t n() const { return rows.size(); }
    std::size_t p() const { return rows.empty() ? 0 : rows.front().size(); }
};

enum class MissingPolicy { drop_row, impute_mean };

inline const char* to_string(MissingPolicy policy) {
    return policy == MissingPolicy::drop_row ? "drop" : "impute";
}

/// How a delimited text file maps onto a Dataset. label_column and
/// column_subset use original file column indices; label_column may also
/// be a header name when has_header is set.
struct IngestOptions {
    char delimiter = ',';
    bool has_header = false;
    std::optional<std::string> label_column;
    std::set<std::string> missing_tokens{"?", ""};
    MissingPolicy missing_policy = MissingPolicy::drop_row;
    std::optional<std::vector<std::size_t>> column_subset;
};

/// What the missing-value policy did: indices (into the parsed data rows)
/// of dropped rows, and the number of cells replaced by column means.
struct MissingLog {
    std::vector<std::size_t> dropped_rows;
    std::size_t imputed_cells = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(std::string_view line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
        const auto end = line.find(delimiter, begin);
        cells.emplace_back(trim(line.substr(begin, end - begin)));
        if (end == std::string_view::npos) break;
        begin = end + 1;
    }
    return cells;
}

inline std::optional<double> parse_double(std::string_view cell) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

/// Shortest round-trip rendering of a double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace detail

/// Parses a column list such as "1-9" or "0,2,5" into original indices.
inline std::vector<std::size_t> parse_column_spec(std::string_view spec) {
    std::vector<std::size_t> columns;
    for (const auto& part : detail::split(spec, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            const auto idx = detail::parse_index(part);
            if (!idx) throw std::invalid_argument("bad column spec: '" + part + "'");
            columns.push_back(*idx);
        } else {
            const auto lo = detail::parse_index(std::string_view(part).substr(0, dash));
            const auto hi = detail::parse_index(std::string_view(part).substr(dash + 1));
            if (!lo || !hi || *lo > *hi) throw std::invalid_argument("bad column range: '" + part + "'");
            for (std::size_t c = *lo; c <= *hi; ++c) columns.push_back(c);
        }
    }
    if (columns.empty()) throw std::invalid_argument("empty column spec");
    return columns;
}

/// Applies the missing-value policy to parsed feature cells.
/// drop_row removes any row containing a missing cell; impute_mean fills
/// missing cells with the column mean over non-missing cells.
inline std::pair<std::vector<std::vector<double>>, MissingLog>
handle_missing(const std::vector<std::vector<std::optional<double>>>& raw, MissingPolicy policy) {
    std::vector<std::vector<double>> rows;
    MissingLog log;
    if (raw.empty()) return {rows, log};
    const std::size_t p = raw.front().size();

    if (policy == MissingPolicy::drop_row) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const bool complete = std::all_of(raw[i].begin(), raw[i].end(),
                                              [](const auto& c) { return c.has_value(); });
            if (!complete) {
                log.dropped_rows.push_back(i);
                continue;
            }
            std::vector<double> row(p);
            for (std::size_t j = 0; j < p; ++j) row[j] = *raw[i][j];
            rows.push_back(std::move(row));
        }
        return {rows, log};
    }

    std::vector<double> mean(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& row : raw) {
            if (row[j]) {
                sum += *row[j];
                ++count;
            }
        }
        if (count == 0)
            throw std::runtime_error("cannot impute column " + std::to_string(j) +
                                     ": every value is missing");
        mean[j] = sum / static_cast<double>(count);
    }
    for (const auto& cells : raw) {
        std::vector<double> row(p);
        for (std::size_t j = 0; j < p; ++j) {
            if (cells[j]) {
                row[j] = *cells[j];
            } else {
                row[j] = mean[j];
                ++log.imputed_cells;
            }
        }
        rows.push_back(std::move(row));
    }
    return {rows, log};
}

/// Builds a Dataset from in-memory rows; rows must be rectangular, finite
/// and nonempty.
inline Dataset from_rows(std::vector<std::vector<double>> rows, std::string source = "inline") {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty input");
    const std::size_t p = rows.front().size();
    for (const auto& row : rows) {
        if (row.size() != p) throw std::invalid_argument("ragged rows");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
    }
    Dataset data;
    data.rows = std::move(rows);
    data.feature_names.reserve(p);
    for (std::size_t j = 0; j < p; ++j) data.feature_names.push_back("c" + std::to_string(j));
    data.source = std::move(source);
    return data;
}

/// Loads a delimited text file. The label column (if any) is stripped into
/// Dataset::labels, the missing policy is applied to feature cells, and
/// surviving rows keep their file order. `log`, when non-null, receives
/// the drop/impute record.
inline Dataset load_csv(const std::string& path, const IngestOptions& options = {},
                        MissingLog* log = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (lines.empty() && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
        if (!detail::trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("empty file: '" + path + "'");

    std::size_t first_data_line = 0;
    std::vector<std::string> header;
    if (options.has_header) {
        header = detail::split(lines[0], options.delimiter);
        first_data_line = 1;
        if (lines.size() == 1) throw std::runtime_error("no data rows in '" + path + "'");
    }
    const std::size_t arity =
        options.has_header ? header.size()
                           : detail::split(lines[0], options.delimiter).size();

    // Resolve the label column: a bare integer is an index, anything else
    // must match a header name.
    std::optional<std::size_t> label_index;
    if (options.label_column) {
        if (auto idx = detail::parse_index(*options.label_column)) {
            label_index = *idx;
        } else if (options.has_header) {
            const auto it = std::find(header.begin(), header.end(), *options.label_column);
            if (it == header.end())
                throw std::runtime_error("label column '" + *options.label_column +
                                         "' not found in header");
            label_index = static_cast<std::size_t>(it - header.begin());
        } else {
            throw std::runtime_error("label column '" + *options.label_column +
                                     "' needs a header line to resolve");
        }
        if (*label_index >= arity)
            throw std::runtime_error("label column " + std::to_string(*label_index) +
                                     " out of range (row arity " + std::to_string(arity) + ")");
    }

    std::vector<std::size_t> feature_columns;
    if (options.column_subset) {
        for (std::size_t c : *options.column_subset) {
            if (c >= arity)
                throw std::runtime_error("column " + std::to_string(c) + " out of range");
            if (label_index && c == *label_index)
                throw std::runtime_error("label column cannot appear in the column subset");
            feature_columns.push_back(c);
        }
    } else {
        for (std::size_t c = 0; c < arity; ++c)
            if (!label_index || c != *label_index) feature_columns.push_back(c);
    }
    if (feature_columns.empty()) throw std::runtime_error("no feature columns left");

    std::vector<std::vector<std::optional<double>>> raw;
    std::vector<std::string> labels;
    for (std::size_t li = first_data_line; li < lines.size(); ++li) {
        const auto cells = detail::split(lines[li], options.delimiter);
        if (cells.size() != arity)
            throw std::runtime_error("ragged row at line " + std::to_string(li + 1) + ": expected " +
                                     std::to_string(arity) + " cells, got " +
                                     std::to_string(cells.size()));
        if (label_index) labels.push_back(cells[*label_index]);
        std::vector<std::optional<double>> row;
        row.reserve(feature_columns.size());
        for (std::size_t c : feature_columns) {
            if (options.missing_tokens.count(cells[c])) {
                row.push_back(std::nullopt);
            } else if (auto v = detail::parse_double(cells[c])) {
                row.push_back(*v);
            } else {
                throw std::runtime_error("unparseable numeric cell '" + cells[c] + "' at line " +
                                         std::to_string(li + 1) + ", column " + std::to_string(c + 1));
            }
        }
        raw.push_back(std::move(row));
    }

    auto [rows, missing_log] = handle_missing(raw, options.missing_policy);
    if (rows.empty()) throw std::runtime_error("no rows survived the missing-value policy");

    Dataset data;
    data.rows = std::move(rows);
    for (std::size_t c : feature_columns)
        data.feature_names.push_back(options.has_header ? std::string(detail::trim(header[c]))
                                                        : "c" + std::to_string(c));
    if (label_index) {
        // Keep labels in sync with dropped rows.
        std::vector<std::string> kept;
        std::size_t next_drop = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (next_drop < missing_log.dropped_rows.size() &&
                missing_log.dropped_rows[next_drop] == i) {
                ++next_drop;
                continue;
            }
            kept.push_back(std::move(labels[i]));
        }
        data.labels = std::move(kept);
    }
    data.source = path;
    if (log) *log = missing_log;
    return data;
}

struct AttributeStats {
    std::string name;
    double min;
    double max;
    double range;
};

struct DatasetSummary {
    std::size_t samples = 0;
    std::size_t attributes = 0;
    std::optional<std::size_t> classes;
    std::vector<AttributeStats> stats;
};

inline DatasetSummary dataset_summary(const Dataset& data) {
    DatasetSummary summary;
    summary.samples = data.n();
    summary.attributes = data.p();
    if (data.labels) {
        std::set<std::string> distinct(data.labels->begin(), data.labels->end());
        summary.classes = distinct.size();
    }
    for (std::size_t j = 0; j < data.p(); ++j) {
        double lo = data.rows[0][j];
        double hi = data.rows[0][j];
        for (const auto& row : data.rows) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        summary.stats.push_back({data.feature_names[j], lo, hi, hi - lo});
    }
    return summary;
}

/// Serializes features (and the label as a trailing column) back to
/// delimited text with round-trip double rendering.
inline void write_csv(const Dataset& data, std::ostream& out, char delimiter = ',') {
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.p(); ++j) {
            if (j) out << delimiter;
            out << detail::format_double(data.rows[i][j]);
        }
        if (data.labels) out << delimiter << (*data.labels)[i];
        out << '\n';
    }
}

}  // namespace proxiscan

/*
 * Copyright (c) 2026, The vselect Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vselect/io.hpp"

#include "vselect/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace vselect {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_nan_token(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower == "nan" || lower == "na" || lower == "null";
}

}  // namespace

std::string_view normalization_name(Normalization n) {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::ZScore: return "zscore";
        case Normalization::MinMax: return "minmax";
    }
    return "none";
}

Normalization parse_normalization(std::string_view name) {
    if (name == "none") return Normalization::None;
    if (name == "zscore") return Normalization::ZScore;
    if (name == "minmax") return Normalization::MinMax;
    throw ValidationError("unknown normalization '" + std::string(name) + "'");
}

std::vector<std::string> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field");
    fields.push_back(std::move(current));
    return fields;
}

Dataset parse_csv(std::istream& in, const CsvOptions& options, const std::string& source) {
    if (options.target_column.empty()) throw ValidationError("no target column given");

    std::string line;
    long long line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) {
            try {
                header = split_fields(line, options.delimiter);
            } catch (const ParseError& e) {
                throw ParseError(source + ", line " + std::to_string(line_no) + ": " + e.what());
            }
            break;
        }
    }
    if (header.empty()) throw ParseError(source + ": missing header row");
    for (auto& h : header) h = std::string(trim(h));

    std::unordered_map<std::string, int> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!position.emplace(header[i], static_cast<int>(i)).second) {
            throw ParseError(source + ": duplicate header '" + header[i] + "'");
        }
    }
    auto column_of = [&](const std::string& name) {
        const auto it = position.find(name);
        if (it == position.end()) throw ValidationError(source + ": no column named '" + name + "'");
        return it->second;
    };

    const int target_col = column_of(options.target_column);
    std::vector<bool> excluded(header.size(), false);
    for (const auto& name : options.exclude_columns) excluded[static_cast<std::size_t>(column_of(name))] = true;

    std::vector<int> feature_cols;
    if (!options.feature_columns.empty()) {
        for (const auto& name : options.feature_columns) {
            const int c = column_of(name);
            if (c == target_col) throw ValidationError("target column '" + name + "' listed as a feature");
            feature_cols.push_back(c);
        }
    } else {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (static_cast<int>(i) != target_col && !excluded[i]) feature_cols.push_back(static_cast<int>(i));
        }
    }
    if (feature_cols.empty()) throw ValidationError(source + ": no feature columns");
    std::vector<bool> used(header.size(), false);
    used[static_cast<std::size_t>(target_col)] = true;
    for (int c : feature_cols) used[static_cast<std::size_t>(c)] = true;

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        try {
            fields = split_fields(line, options.delimiter);
        } catch (const ParseError& e) {
            throw ParseError(source + ", line " + std::to_string(line_no) + ": " + e.what());
        }
        if (fields.size() != header.size()) {
            throw ParseError(source + ", line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        }
        std::vector<double> values(header.size(), 0.0);
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (!used[c]) continue;
            const auto cell = trim(fields[c]);
            const std::string where = source + ", line " + std::to_string(line_no) + ": column '" + header[c] + "'";
            if (cell.empty()) throw ValidationError(where + " is empty");
            if (is_nan_token(cell)) throw ValidationError(where + " is NaN");
            std::string_view text = cell;
            if (text.starts_with('+')) text.remove_prefix(1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                throw ParseError(where + ": '" + std::string(cell) + "' is not a number");
            }
            if (!std::isfinite(v)) throw ValidationError(where + " is not finite");
            values[c] = v;
        }
        rows.push_back(std::move(values));
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd features(n, static_cast<Eigen::Index>(feature_cols.size()));
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            features(i, static_cast<Eigen::Index>(j)) = row[static_cast<std::size_t>(feature_cols[j])];
        }
        target(i) = row[static_cast<std::size_t>(target_col)];
    }
    std::vector<std::string> labels;
    for (int c : feature_cols) labels.push_back(header[static_cast<std::size_t>(c)]);

    auto ds = Dataset::create(std::move(features), std::move(target), std::move(labels));
    return options.normalize == Normalization::None ? ds : normalize(ds, options.normalize);
}

Dataset ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_csv(in, options, path.string());
}

Dataset normalize(const Dataset& ds, Normalization method) {
    Eigen::MatrixXd x = ds.features();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        auto col = x.col(c);
        if (method == Normalization::ZScore) {
            const double mean = col.mean();
            const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(col.size() - 1));
            col = sd > 0.0 ? Eigen::VectorXd((col.array() - mean) / sd) : Eigen::VectorXd::Zero(col.size());
        } else if (method == Normalization::MinMax) {
            const double lo = col.minCoeff();
            const double hi = col.maxCoeff();
            col = hi > lo ? Eigen::VectorXd((col.array() - lo) / (hi - lo)) : Eigen::VectorXd::Zero(col.size());
        }
    }
    return Dataset::create(std::move(x), ds.target(), ds.labels());
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw ComputationError("number formatting failed");
    return std::string(buf, ptr);
}

namespace {

std::string quote_if_needed(const std::string& s, char delimiter) {
    if (s.find(delimiter) == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

void write_dataset_csv(const Dataset& ds, std::ostream& out, const std::string& target_name, char delimiter) {
    for (const auto& label : ds.labels()) out << quote_if_needed(label, delimiter) << delimiter;
    out << quote_if_needed(target_name, delimiter) << '\n';
    for (int i = 0; i < ds.n_rows(); ++i) {
        for (int j = 0; j < ds.n_features(); ++j) out << format_double(ds.features()(i, j)) << delimiter;
        out << format_double(ds.target()(i)) << '\n';
    }
}

}  // namespace vselect

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

#pragma once

#include "vselect/linalg.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vselect {

enum class Normalization { None, ZScore, MinMax };

std::string_view normalization_name(Normalization n);
Normalization parse_normalization(std::string_view name);

struct CsvOptions {
    std::string target_column;
    char delimiter = ',';
    /// Columns ignored entirely (e.g. the other target of a two-target export).
    std::vector<std::string> exclude_columns;
    /// When non-empty, exactly these columns become features, in this order.
    std::vector<std::string> feature_columns;
    Normalization normalize = Normalization::None;
};

/**
 * Reads a headered delimiter-separated table. Every column other than the
 * target (and excluded columns) becomes a feature, in file order.
 *
 * Errors: ParseError for malformed rows, duplicate headers or non-numeric
 * cells (naming line and column); ValidationError for blank or NaN cells
 * and for unknown column names.
 */
Dataset ingest_csv(const std::filesystem::path& path, const CsvOptions& options);
Dataset parse_csv(std::istream& in, const CsvOptions& options, const std::string& source = "<input>");

/// Column-wise normalization. Constant columns map to 0.
Dataset normalize(const Dataset& dataset, Normalization method);

/// Writes features then the target column with shortest round-trip number
/// formatting, so re-ingestion reproduces the dataset bit for bit.
void write_dataset_csv(const Dataset& dataset, std::ostream& out, const std::string& target_name,
                       char delimiter = ',');

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Splits one line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_fields(std::string_view line, char delimiter);

}  // namespace vselect

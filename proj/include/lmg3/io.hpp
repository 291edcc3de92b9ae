#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "lmg3/collective_ops.hpp"

namespace lmg3 {

/// "start:stop:step" (stop inclusive up to 1e-9 of a step) or a single number.
/// Throws std::invalid_argument for step <= 0, stop < start or malformed text.
std::vector<double> parse_range(const std::string& text);

/// 12 significant digits, '.' decimal point, "nan"/"inf" for non-finite values.
std::string format_number(double x);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> comments;  // written as "# ..." lines in CSV, "comments" in JSON
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

void write_csv(std::ostream& out, const Table& table);

/// {"comments": [...], "columns": [...], "rows": [{column: value, ...}, ...]};
/// non-finite numbers become null.
nlohmann::json table_json(const Table& table);

/// Writes `table` to `path` ("-" for stdout) in the given format.
void write_table(const std::string& path, const Table& table, OutputFormat format);

/// `path` with its extension replaced by `.config.json`; "-" maps to "lmg3-run.config.json".
std::string sidecar_path(const std::string& path);

/// Writes {"version": ..., "config": config} next to `path`.
void write_sidecar(const std::string& path, const nlohmann::json& config);

/// One "row col value" line per stored entry, 0-based indices, after a header line
/// "# shape rows cols nnz".
void write_coordinate_list(std::ostream& out, const SectorOperator& op);

}  // namespace lmg3

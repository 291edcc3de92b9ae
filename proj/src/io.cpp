#include "lmg3/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace lmg3 {

namespace {

double parse_number(const std::string& text, const std::string& whole) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value))
    throw std::invalid_argument("malformed range '" + whole + "'");
  return value;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 1) return {parse_number(parts[0], text)};
  if (parts.size() != 3) throw std::invalid_argument("range '" + text + "' is not start:stop:step");
  const double start = parse_number(parts[0], text);
  const double stop = parse_number(parts[1], text);
  const double step = parse_number(parts[2], text);
  if (!(step > 0.0)) throw std::invalid_argument("range '" + text + "' needs a positive step");
  if (stop < start) throw std::invalid_argument("range '" + text + "' is empty");
  const long long count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (long long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round-trip through the CSV text so both formats carry the same digits.
    return std::stod(format_number(*d));
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << cell_text(row[j]);
    out << '\n';
  }
}

nlohmann::json table_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t j = 0; j < row.size() && j < table.columns.size(); ++j) obj[table.columns[j]] = cell_json(row[j]);
    rows.push_back(std::move(obj));
  }
  return {{"comments", table.comments}, {"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_table(const std::string& path, const Table& table, OutputFormat format) {
  auto emit = [&](std::ostream& out) {
    if (format == OutputFormat::csv)
      write_csv(out, table);
    else
      out << table_json(table).dump(2) << '\n';
  };
  if (path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string sidecar_path(const std::string& path) {
  if (path == "-") return "lmg3-run.config.json";
  std::filesystem::path p(path);
  p.replace_extension(".config.json");
  return p.string();
}

void write_sidecar(const std::string& path, const nlohmann::json& config) {
  const std::string target = sidecar_path(path);
  std::ofstream out(target);
  if (!out) throw std::runtime_error("cannot open '" + target + "' for writing");
  const nlohmann::json doc = {{"version", LMG3_VERSION}, {"config", config}};
  out << doc.dump(2) << '\n';
}

void write_coordinate_list(std::ostream& out, const SectorOperator& op) {
  out << "# " << op.shape.str() << ' ' << op.matrix.rows() << ' ' << op.matrix.cols() << ' '
      << op.matrix.nonZeros() << '\n';
  for (int k = 0; k < op.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op.matrix, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << format_number(it.value()) << '\n';
}

}  // namespace lmg3

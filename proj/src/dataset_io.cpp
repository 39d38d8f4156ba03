#include "confset/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace confset {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  if (!std::isfinite(value))
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": non-finite feature");
  return value;
}

int parse_label(std::string_view field, std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad label '" + std::string(field) + "'");
  return value;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void write_rows(std::ostream& out, const Eigen::MatrixXd& x, const std::vector<int>* labels, Index dim) {
  for (Index j = 0; j < dim; ++j) out << (j ? "," : "") << "x_" << (j + 1);
  if (labels) out << ",y";
  out << '\n';
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < dim; ++j) out << (j ? "," : "") << format_double(x(i, j));
    if (labels) out << ',' << (*labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

CsvTable read_csv_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: missing header");
  const auto header = split_fields(line);
  bool has_y = !header.empty() && header.back() == "y";
  const std::size_t dim = header.size() - (has_y ? 1 : 0);
  if (dim == 0) throw std::invalid_argument("csv: no feature columns");
  for (std::size_t j = 0; j < dim; ++j)
    if (header[j] != "x_" + std::to_string(j + 1))
      throw std::invalid_argument("csv: header column " + std::to_string(j + 1) + " is '" + std::string(header[j]) +
                                  "', expected x_" + std::to_string(j + 1));

  std::vector<double> values;
  CsvTable table;
  table.has_labels = has_y;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    for (std::size_t j = 0; j < dim; ++j) values.push_back(parse_double(fields[j], line_no));
    if (has_y) table.labels.push_back(parse_label(fields.back(), line_no));
  }
  const Index rows = static_cast<Index>(values.size() / dim);
  table.features = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, static_cast<Index>(dim));
  return table;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv_table(in);
}

LabeledDataset read_labeled_csv(const std::string& path, int k_classes) {
  CsvTable table = read_csv_table(path);
  if (!table.has_labels) throw std::invalid_argument("'" + path + "' has no y column");
  if (k_classes == 0) {
    k_classes = 2;
    for (int y : table.labels) k_classes = std::max(k_classes, y);
  }
  return LabeledDataset(std::move(table.features), std::move(table.labels), k_classes);
}

UnlabeledDataset read_unlabeled_csv(const std::string& path) {
  CsvTable table = read_csv_table(path);
  const Index dim = table.features.cols();
  return UnlabeledDataset(std::move(table.features), dim);
}

void write_csv(std::ostream& out, const LabeledDataset& data) {
  write_rows(out, data.features(), &data.labels(), data.dim());
}

void write_csv(std::ostream& out, const UnlabeledDataset& data) {
  write_rows(out, data.features(), nullptr, data.dim());
}

void write_csv(const std::string& path, const LabeledDataset& data) {
  auto out = open_for_write(path);
  write_csv(out, data);
}

void write_csv(const std::string& path, const UnlabeledDataset& data) {
  auto out = open_for_write(path);
  write_csv(out, data);
}

}  // namespace confset

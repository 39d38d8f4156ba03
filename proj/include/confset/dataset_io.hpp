#pragma once

#include "confset/core.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace confset {

// Dataset CSV: a header row "x_1,...,x_d[,y]" followed by one row per point.
// y, when present, is an integer label in 1..K. Non-finite features are rejected.

struct CsvTable {
  Eigen::MatrixXd features;
  std::vector<int> labels;  // empty when the file has no y column
  bool has_labels = false;
};

CsvTable read_csv_table(std::istream& in);
CsvTable read_csv_table(const std::string& path);

/// Reads a labeled file; k_classes = 0 infers K as the largest label (at least 2).
LabeledDataset read_labeled_csv(const std::string& path, int k_classes = 0);
/// Reads features only; a y column, if present, is ignored.
UnlabeledDataset read_unlabeled_csv(const std::string& path);

void write_csv(std::ostream& out, const LabeledDataset& data);
void write_csv(std::ostream& out, const UnlabeledDataset& data);
void write_csv(const std::string& path, const LabeledDataset& data);
void write_csv(const std::string& path, const UnlabeledDataset& data);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace confset

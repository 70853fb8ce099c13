#pragma once

#include <string>
#include <vector>

#include "bicog/core.hpp"

namespace bicog {

enum class SplitTag { labeled, unlabeled, test };

struct CsvLoadResult {
  std::vector<Example> rows;             // ids are 0-based row order
  std::vector<std::string> label_names;  // dense class index -> name
  std::vector<SplitTag> split_tags;      // aligned with rows when has_split
  bool has_split = false;
};

// Header row required; feature columns must parse as numbers; labels map
// to dense indices in first-appearance order. The optional split column
// takes values labeled/unlabeled/test.
CsvLoadResult load_csv(const std::string& path,
                       const std::vector<std::string>& feature_columns,
                       const std::string& label_column,
                       const std::string& split_column = "");

// Builds a Dataset from rows carrying explicit split tags. Unlabeled rows
// keep their label as hidden ground truth.
Dataset dataset_from_tagged_rows(const CsvLoadResult& rows);

void write_csv(const std::string& path, const std::vector<Example>& pool,
               const std::vector<Example>& test);

}  // namespace bicog

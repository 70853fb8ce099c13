#include "bicog/csvio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace bicog {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

CsvLoadResult load_csv(const std::string& path,
                       const std::vector<std::string>& feature_columns,
                       const std::string& label_column,
                       const std::string& split_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const std::vector<std::string> header = split_line(line);

  auto col_index = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> feat_idx;
  for (const auto& f : feature_columns) feat_idx.push_back(col_index(f));
  const std::size_t label_idx = col_index(label_column);
  const bool has_split = !split_column.empty();
  const std::size_t split_idx = has_split ? col_index(split_column) : 0;

  CsvLoadResult out;
  out.has_split = has_split;
  std::unordered_map<std::string, int> label_map;
  long row_no = 0;  // data rows count from 1; the header is row 0
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() < header.size()) {
      std::ostringstream os;
      os << path << ": row " << row_no << " has " << fields.size()
         << " fields, expected " << header.size();
      throw ParseError(os.str());
    }
    Example e;
    e.id = static_cast<ExampleId>(out.rows.size());
    for (std::size_t i = 0; i < feat_idx.size(); ++i) {
      const std::string& cell = fields[feat_idx[i]];
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        std::ostringstream os;
        os << path << ": row " << row_no << ", column " << feature_columns[i]
           << ": non-numeric value '" << cell << "'";
        throw ParseError(os.str());
      }
      e.features.push_back(v);
    }
    const std::string& label = fields[label_idx];
    auto [it, inserted] =
        label_map.emplace(label, static_cast<int>(out.label_names.size()));
    if (inserted) out.label_names.push_back(label);
    e.label = it->second;
    if (has_split) {
      const std::string& tag = fields[split_idx];
      if (tag == "labeled") out.split_tags.push_back(SplitTag::labeled);
      else if (tag == "unlabeled") out.split_tags.push_back(SplitTag::unlabeled);
      else if (tag == "test") out.split_tags.push_back(SplitTag::test);
      else {
        std::ostringstream os;
        os << path << ": row " << row_no << ": unknown split tag '" << tag << "'";
        throw ParseError(os.str());
      }
    }
    out.rows.push_back(std::move(e));
  }
  if (out.rows.empty()) throw ParseError(path + ": no data rows");
  return out;
}

Dataset dataset_from_tagged_rows(const CsvLoadResult& data) {
  if (!data.has_split)
    throw InvalidParams("dataset_from_tagged_rows: rows carry no split tags");
  std::vector<Example> labeled, unlabeled, test;
  std::unordered_map<ExampleId, int> truth;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const Example& e = data.rows[i];
    switch (data.split_tags[i]) {
      case SplitTag::labeled:
        labeled.push_back(e);
        break;
      case SplitTag::unlabeled: {
        truth[e.id] = *e.label;
        Example u = e;
        u.label.reset();
        unlabeled.push_back(std::move(u));
        break;
      }
      case SplitTag::test:
        test.push_back(e);
        break;
    }
  }
  const int num_classes = static_cast<int>(data.label_names.size());
  std::vector<int> base(num_classes);
  std::iota(base.begin(), base.end(), 0);
  return Dataset(std::move(labeled), std::move(unlabeled), std::move(truth),
                 std::move(test), num_classes, std::move(base));
}

void write_csv(const std::string& path, const std::vector<Example>& pool,
               const std::vector<Example>& test) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  if (pool.empty()) throw InvalidParams("write_csv: empty pool");
  const std::size_t dim = pool.front().features.size();
  for (std::size_t i = 0; i < dim; ++i) out << "f" << i << ",";
  out << "label,split\n";
  char buf[40];
  auto emit = [&](const Example& e, const char* split) {
    for (double v : e.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ",";
    }
    out << *e.label << "," << split << "\n";
  };
  for (const Example& e : pool) emit(e, "labeled");
  for (const Example& e : test) emit(e, "test");
}

}  // namespace bicog

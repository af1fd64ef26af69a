#include "selflearn/dataset.hpp"
#include "selflearn/errors.hpp"

#include "text.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace selflearn {

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::optional<ClassMap>& classes) {
  std::ifstream in(path);
  if (!in)
    throw DataError(DataError::Kind::missing_file, "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line))
    throw DataError(DataError::Kind::malformed, path.string() + ": empty file, expected a header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> header;
  for (auto cell : text::split(line, ',')) header.emplace_back(text::trim(cell));
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end())
    throw DataError(DataError::Kind::missing_column,
                    path.string() + ": no column named '" + label_column + "' in header");
  const std::size_t label_idx = static_cast<std::size_t>(label_it - header.begin());

  Dataset ds;
  ds.name = path.stem().string();
  ds.label_name = label_column;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) ds.feature_names.push_back(header[c]);

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::size_t row_no = rows.size() + 1;
    const auto where = [&] {
      return path.string() + ": row " + std::to_string(row_no) + " (line " +
             std::to_string(line_no) + ")";
    };
    const auto cells = text::split(line, ',');
    if (cells.size() != header.size())
      throw DataError(DataError::Kind::malformed, where() + ": expected " +
                                                      std::to_string(header.size()) +
                                                      " fields, found " + std::to_string(cells.size()));
    std::vector<double> values;
    values.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = text::trim(cells[c]);
      if (cell.empty())
        throw DataError(DataError::Kind::missing_value,
                        where() + ": missing value in column '" + header[c] + "'");
      if (c == label_idx) {
        ds.labels.emplace_back(cell);
        continue;
      }
      const auto v = text::parse_double(cell);
      if (!v)
        throw DataError(DataError::Kind::non_numeric, where() + ": column '" + header[c] +
                                                          "' has non-numeric value '" +
                                                          std::string(cell) + "'");
      values.push_back(*v);
    }
    rows.push_back(std::move(values));
  }

  const std::set<std::string> symbols(ds.labels.begin(), ds.labels.end());
  if (symbols.size() > 2)
    throw DataError(DataError::Kind::too_many_classes,
                    path.string() + ": column '" + label_column + "' has " +
                        std::to_string(symbols.size()) + " distinct classes, expected at most 2");
  if (classes) {
    ds.classes = *classes;
  } else {
    std::vector<std::string> sorted(symbols.begin(), symbols.end());
    ds.classes.first = sorted.empty() ? "0" : sorted[0];
    ds.classes.second = sorted.size() > 1 ? sorted[1] : ds.classes.first + "'";
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(ds.feature_names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  ds.features = FeatureMatrix(std::move(x));
  ds.validate();
  return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(DataError::Kind::missing_file, "cannot write '" + path.string() + "'");
  for (Eigen::Index c = 0; c < ds.dims(); ++c) {
    const auto k = static_cast<std::size_t>(c);
    out << (k < ds.feature_names.size() ? ds.feature_names[k] : "x" + std::to_string(k + 1)) << ',';
  }
  out << ds.label_name << '\n';
  const auto& x = ds.features.values();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) out << text::format_double(x(i, c)) << ',';
    out << ds.labels[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw DataError(DataError::Kind::malformed, "write failed for '" + path.string() + "'");
}

}  // namespace selflearn

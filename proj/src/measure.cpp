#include "christoffel/measure.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace christoffel {

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    cells.push_back(trim(cell));
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double parse_number(const std::string& cell, int line) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') {
    ++begin;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("csv: line " + std::to_string(line) + ": not a finite number: '" + cell + "'", line);
  }
  return value;
}

CsvTable read_table(std::istream& in) {
  CsvTable table;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      continue;
    }
    auto cells = split_commas(line);
    if (table.header.empty()) {
      if (line_number == 1 && cells.size() > 0 && cells[0].size() >= 3 &&
          static_cast<unsigned char>(cells[0][0]) == 0xEF) {
        cells[0].erase(0, 3);  // UTF-8 byte order mark
      }
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError("csv: line " + std::to_string(line_number) + ": expected " +
                           std::to_string(table.header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_number);
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      row.push_back(parse_number(cell, line_number));
    }
    table.rows.push_back(std::move(row));
    table.lines.push_back(line_number);
  }
  if (table.header.empty()) {
    throw ParseError("csv: missing header row", 1);
  }
  return table;
}

// Number of coordinate columns; validates names x1..xd (or z1..zd).
int coordinate_columns(const std::vector<std::string>& header, bool& has_weight) {
  has_weight = !header.empty() && header.back() == "weight";
  const int d = static_cast<int>(header.size()) - (has_weight ? 1 : 0);
  if (d < 1) {
    throw ParseError("csv: header has no coordinate columns", 1);
  }
  for (int j = 0; j < d; ++j) {
    const auto& name = header[j];
    const std::string suffix = std::to_string(j + 1);
    if (name != "x" + suffix && name != "z" + suffix) {
      throw ParseError("csv: header column " + std::to_string(j + 1) + " should be x" + suffix + ", got '" +
                           name + "'",
                       1);
    }
  }
  return d;
}

}  // namespace

WeightedSample::WeightedSample(PointMatrix points, Eigen::VectorXd weights) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw std::invalid_argument("WeightedSample: need at least one point of positive dimension");
  }
  if (points.rows() != weights.size()) {
    throw std::invalid_argument("WeightedSample: points and weights differ in length");
  }
  if (!points.allFinite()) {
    throw std::domain_error("WeightedSample: non-finite coordinate");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights(i)) || weights(i) < 0.0) {
      throw std::domain_error("WeightedSample: weight " + std::to_string(i) + " is negative or non-finite");
    }
  }

  std::map<std::vector<double>, Eigen::Index> seen;
  std::vector<Eigen::Index> keep;
  std::vector<double> merged;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<double> key(points.row(i).data(), points.row(i).data() + points.cols());
    const auto [it, inserted] = seen.emplace(std::move(key), static_cast<Eigen::Index>(keep.size()));
    if (inserted) {
      keep.push_back(i);
      merged.push_back(weights(i));
    } else {
      merged[it->second] += weights(i);
    }
  }
  points_.resize(static_cast<Eigen::Index>(keep.size()), points.cols());
  weights_.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    points_.row(static_cast<Eigen::Index>(k)) = points.row(keep[k]);
    weights_(static_cast<Eigen::Index>(k)) = merged[k];
  }
}

WeightedSample from_iid_sample(const PointMatrix& points) {
  if (points.rows() < 1) {
    throw std::invalid_argument("from_iid_sample: empty sample");
  }
  const double eta = 1.0 / static_cast<double>(points.rows());
  return WeightedSample(points, Eigen::VectorXd::Constant(points.rows(), eta));
}

Lattice::Lattice(std::vector<double> lower, std::vector<double> upper, std::vector<int> counts)
    : lower_(std::move(lower)), upper_(std::move(upper)), counts_(std::move(counts)) {
  if (counts_.empty() || lower_.size() != counts_.size() || upper_.size() != counts_.size()) {
    throw std::invalid_argument("Lattice: bounds and counts must share a positive dimension");
  }
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    if (counts_[a] < 1 || !(upper_[a] > lower_[a]) || !std::isfinite(lower_[a]) || !std::isfinite(upper_[a])) {
      throw std::invalid_argument("Lattice: each axis needs a positive count and a non-empty finite range");
    }
  }
}

Eigen::Index Lattice::size() const {
  Eigen::Index n = 1;
  for (int c : counts_) {
    n *= c;
  }
  return n;
}

double Lattice::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dimension(); ++a) {
    v *= spacing(a);
  }
  return v;
}

PointMatrix Lattice::nodes() const {
  const int d = dimension();
  PointMatrix out(size(), d);
  std::vector<int> index(d, 0);
  for (Eigen::Index row = 0; row < out.rows(); ++row) {
    for (int a = 0; a < d; ++a) {
      out(row, a) = lower_[a] + (index[a] + 0.5) * spacing(a);
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++index[a] < counts_[a]) {
        break;
      }
      index[a] = 0;
    }
  }
  return out;
}

WeightedSample riemann_from_density(const Lattice& grid, const DensityFunction& density) {
  PointMatrix nodes = grid.nodes();
  const double volume = grid.cell_volume();
  Eigen::VectorXd weights(nodes.rows());
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    const double p = density({nodes.row(i).data(), static_cast<std::size_t>(nodes.cols())});
    if (!std::isfinite(p) || p < 0.0) {
      throw std::domain_error("riemann_from_density: density is negative or non-finite at node " +
                              std::to_string(i));
    }
    weights(i) = p * volume;
  }
  return WeightedSample(std::move(nodes), std::move(weights));
}

WeightedSample parse_csv(std::istream& in) {
  const auto table = read_table(in);
  bool has_weight = false;
  const int d = coordinate_columns(table.header, has_weight);
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  if (n == 0) {
    throw ParseError("csv: no data rows", 2);
  }
  PointMatrix points(n, d);
  Eigen::VectorXd weights(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j) {
      points(i, j) = row[j];
    }
    if (has_weight) {
      const double w = row[d];
      if (w < 0.0) {
        const int line = table.lines[static_cast<std::size_t>(i)];
        throw ParseError("csv: line " + std::to_string(line) + ": negative weight", line);
      }
      weights(i) = w;
    } else {
      weights(i) = 1.0 / static_cast<double>(n);
    }
  }
  return WeightedSample(std::move(points), std::move(weights));
}

WeightedSample load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return parse_csv(in);
}

PointMatrix parse_points_csv(std::istream& in) {
  const auto table = read_table(in);
  bool has_weight = false;
  const int d = coordinate_columns(table.header, has_weight);
  PointMatrix points(static_cast<Eigen::Index>(table.rows.size()), d);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      points(static_cast<Eigen::Index>(i), j) = table.rows[i][j];
    }
  }
  return points;
}

PointMatrix load_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return parse_points_csv(in);
}

}  // namespace christoffel

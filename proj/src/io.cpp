#include "infoot/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "infoot/error.hpp"

namespace infoot::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

bool parse_int(std::string_view cell, int& out) {
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw ValidationError(msg.str());
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> nonempty_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line =
        trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!line.empty()) lines.push_back({number, line});
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++number;
  }
  return lines;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  std::string out(buffer.data(), ptr);
  if (std::isfinite(value) && out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

PointSet parse_point_set_csv(std::string_view text, const std::string& source_name) {
  const std::vector<Line> lines = nonempty_lines(text);
  if (lines.empty()) fail(source_name, 1, "missing header row");
  const auto header = split_cells(lines.front().text);
  const bool labeled = header.back() == "label";
  const std::size_t width = header.size();
  const std::size_t features = labeled ? width - 1 : width;
  if (features < 1) fail(source_name, lines.front().number, "no feature columns");
  if (lines.size() < 2) fail(source_name, lines.front().number, "no sample rows");

  Matrix points(static_cast<Index>(lines.size() - 1), static_cast<Index>(features));
  std::vector<int> labels;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_cells(lines[r].text);
    if (cells.size() != width) {
      fail(source_name, lines[r].number,
           "expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < features; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v) || !std::isfinite(v)) {
        fail(source_name, lines[r].number, "non-numeric feature '" + std::string(cells[c]) + "'");
      }
      points(static_cast<Index>(r - 1), static_cast<Index>(c)) = v;
    }
    if (labeled) {
      int label = 0;
      if (!parse_int(cells.back(), label)) {
        fail(source_name, lines[r].number, "label must be an integer, got '" +
                                               std::string(cells.back()) + "'");
      }
      labels.push_back(label);
    }
  }
  if (labeled) return PointSet(std::move(points), std::move(labels));
  return PointSet(std::move(points));
}

PointSet read_point_set_csv(const std::filesystem::path& path) {
  return parse_point_set_csv(read_text(path), path.string());
}

void write_point_set_csv(const std::filesystem::path& path, const PointSet& points) {
  std::ostringstream out;
  for (Index c = 0; c < points.dim(); ++c) out << (c ? "," : "") << "x" << c;
  if (points.has_labels()) out << ",label";
  out << "\n";
  for (Index i = 0; i < points.size(); ++i) {
    for (Index c = 0; c < points.dim(); ++c) {
      out << (c ? "," : "") << format_double(points.points()(i, c));
    }
    if (points.has_labels()) out << "," << points.labels()[static_cast<std::size_t>(i)];
    out << "\n";
  }
  write_text(path, out.str());
}

Matrix parse_matrix_csv(std::string_view text, const std::string& source_name) {
  std::vector<Line> lines = nonempty_lines(text);
  if (lines.empty()) fail(source_name, 1, "empty matrix file");
  {
    const auto first = split_cells(lines.front().text);
    double probe = 0.0;
    if (!parse_double(first.front(), probe)) lines.erase(lines.begin());
  }
  if (lines.empty()) fail(source_name, 1, "matrix file has a header but no rows");
  const std::size_t width = split_cells(lines.front().text).size();
  Matrix values(static_cast<Index>(lines.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto cells = split_cells(lines[r].text);
    if (cells.size() != width) {
      fail(source_name, lines[r].number,
           "expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        fail(source_name, lines[r].number, "non-numeric cell '" + std::string(cells[c]) + "'");
      }
      values(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  return values;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  return parse_matrix_csv(read_text(path), path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& values) {
  std::ostringstream out;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << "\n";
  }
  write_text(path, out.str());
}

void write_projection_csv(const std::filesystem::path& path, const std::vector<Index>& query_ids,
                          const Matrix& coordinates) {
  if (static_cast<Index>(query_ids.size()) != coordinates.rows()) {
    throw ValidationError("one query id per projected row is required");
  }
  std::ostringstream out;
  out << "query_id";
  for (Index c = 0; c < coordinates.cols(); ++c) out << ",x" << c;
  out << "\n";
  for (Index i = 0; i < coordinates.rows(); ++i) {
    out << query_ids[static_cast<std::size_t>(i)];
    for (Index c = 0; c < coordinates.cols(); ++c) out << "," << format_double(coordinates(i, c));
    out << "\n";
  }
  write_text(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path.string() + "' for writing");
  file << contents;
  if (!file) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace infoot::io

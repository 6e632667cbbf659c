#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "impactsel/dataset.hpp"
#include "impactsel/errors.hpp"

namespace impactsel {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != cell.size() || cell.empty())
    throw DataError("non-numeric cell at row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": '" + cell + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Layout: header of m grid times followed by the literal column name "Y";
// each data row holds m trajectory values and the response. LF or CRLF.
//
// Grids outside (0,1] are rescaled on load by the affine map
// t -> (t - t_min + s) / (t_max - t_min + s), s = mean adjacent spacing,
// which sends the times into (0,1] with the last time at 1. When a rescale
// happens and `note` is non-null, a description is written to it.
inline Dataset load_dataset_csv(const std::string& path, std::string* note = nullptr) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = detail::split_line(line);
  if (header.size() < 2 || header.back() != "Y")
    throw DataError("malformed header: expected grid times followed by 'Y'");
  const std::size_t m = header.size() - 1;
  std::vector<double> times(m);
  for (std::size_t j = 0; j < m; ++j) times[j] = detail::parse_cell(header[j], 1, j + 1);

  for (std::size_t j = 1; j < m; ++j)
    if (times[j] <= times[j - 1]) throw DataError("grid not strictly increasing");

  double lo = times.front(), hi = times.back();
  if (lo <= 0.0 || hi > 1.0) {
    double s = (hi - lo) / static_cast<double>(m - 1);
    for (double& t : times) t = (t - lo + s) / (hi - lo + s);
    times.back() = 1.0;
    if (note)
      *note = "grid rescaled from [" + detail::format_double(lo) + ", " +
              detail::format_double(hi) + "] to (0,1]";
  }

  std::vector<double> values;
  std::vector<double> responses;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++row;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells = detail::split_line(line);
    if (cells.size() != m + 1)
      throw DataError("ragged row " + std::to_string(row) + ": expected " +
                      std::to_string(m + 1) + " cells, got " + std::to_string(cells.size()));
    for (std::size_t j = 0; j <= m; ++j) {
      double v = detail::parse_cell(cells[j], row, j + 1);
      if (j < m)
        values.push_back(v);
      else
        responses.push_back(v);
    }
  }
  if (responses.empty()) throw DataError("no data rows in " + path);

  Matrix x(responses.size(), m);
  for (std::size_t i = 0; i < responses.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) x(i, j) = values[i * m + j];
  return Dataset::create(Grid::from_times(std::move(times)), std::move(x), std::move(responses));
}

// Writes with 17 significant digits so load round-trips exactly.
inline void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (std::size_t j = 0; j < data.m(); ++j) out << detail::format_double(data.grid.times[j]) << ',';
  out << "Y\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    auto row = data.trajectories.row(i);
    for (double v : row) out << detail::format_double(v) << ',';
    out << detail::format_double(data.responses[i]) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

inline void write_predictions_csv(const std::vector<double>& predictions, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "Y_hat\n";
  for (double v : predictions) out << detail::format_double(v) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace impactsel

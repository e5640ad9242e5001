#include "rovf/matrix_market.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rovf {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%') continue;
    return line;
  }
  throw std::invalid_argument("matrix market: unexpected end of file");
}

}  // namespace

Matrixd read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("matrix market: empty input");
  std::istringstream head(header);
  std::string banner, object, format, field, symmetry;
  head >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lowercase(object) != "matrix")
    throw std::invalid_argument("matrix market: bad header line");
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (field != "real" && field != "integer")
    throw std::invalid_argument("matrix market: only real or integer fields supported");
  if (symmetry != "general" && symmetry != "symmetric")
    throw std::invalid_argument("matrix market: only general or symmetric matrices supported");

  if (format == "coordinate") {
    std::istringstream size_line(next_data_line(in));
    Index rows = 0, cols = 0;
    long long nnz = 0;
    if (!(size_line >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
      throw std::invalid_argument("matrix market: bad size line");
    Matrixd m = Matrixd::Zero(rows, cols);
    for (long long k = 0; k < nnz; ++k) {
      std::istringstream entry(next_data_line(in));
      Index i = 0, j = 0;
      double value = 0.0;
      if (!(entry >> i >> j >> value) || i < 1 || i > rows || j < 1 || j > cols)
        throw std::invalid_argument("matrix market: bad coordinate entry");
      m(i - 1, j - 1) = value;
      if (symmetry == "symmetric" && i != j) m(j - 1, i - 1) = value;
    }
    return m;
  }
  if (format == "array") {
    std::istringstream size_line(next_data_line(in));
    Index rows = 0, cols = 0;
    if (!(size_line >> rows >> cols) || rows < 1 || cols < 1)
      throw std::invalid_argument("matrix market: bad size line");
    Matrixd m = Matrixd::Zero(rows, cols);
    // Array format lists column-major; symmetric files carry the lower
    // triangle only.
    for (Index j = 0; j < cols; ++j) {
      Index start = symmetry == "symmetric" ? j : 0;
      for (Index i = start; i < rows; ++i) {
        std::istringstream entry(next_data_line(in));
        double value = 0.0;
        if (!(entry >> value))
          throw std::invalid_argument("matrix market: bad array entry");
        m(i, j) = value;
        if (symmetry == "symmetric") m(j, i) = value;
      }
    }
    return m;
  }
  throw std::invalid_argument("matrix market: unknown format \"" + format + "\"");
}

Matrixd read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("matrix market: cannot open \"" + path + "\"");
  return read_matrix_market(in);
}

}  // namespace rovf

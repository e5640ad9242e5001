#pragma once

#include <istream>
#include <string>

#include "rovf/types.hpp"

namespace rovf {

/// Dense matrix from Matrix Market text. Supports the coordinate and array
/// formats with real or integer fields, general or symmetric symmetry.
Matrixd read_matrix_market(std::istream& in);
Matrixd read_matrix_market_file(const std::string& path);

}  // namespace rovf

#ifndef ELASTICA_GRID_IO_HPP
#define ELASTICA_GRID_IO_HPP

#include <filesystem>
#include <vector>

#include "elastica/factorization.hpp"

namespace elastica {

struct GridFiles {
  std::filesystem::path csv;
  std::filesystem::path pgm;
  std::filesystem::path sidecar;
};

/**
 * Writes basename.csv (x,y,value,mask; 17 significant digits, row-major from the top row),
 * basename.pgm (16-bit binary P5) and basename.json with the normalization bounds.
 *
 * PGM levels: masked cells are 0, unmasked values map linearly from [min, max] onto
 * [1, 65535]; a constant grid maps to 65535. Throws std::runtime_error on I/O failure.
 */
GridFiles write_grid(const IndicatorGrid& grid, const std::filesystem::path& basename);

/// Reads a CSV written by write_grid. Throws std::runtime_error on malformed input.
IndicatorGrid read_grid_csv(const std::filesystem::path& path);

/// PGM levels as written by write_grid, row-major.
std::vector<std::uint16_t> grid_levels(const IndicatorGrid& grid);

}  // namespace elastica

#endif  // ELASTICA_GRID_IO_HPP

#pragma once

#include <iosfwd>
#include <string>

#include "holonorm/grid.hpp"

namespace holonorm {

/**
 * Reads a grid function from CSV with header `x1,...,xN,t,u` (no `t` column
 * for elliptic data). Rows may come in any order but must fill a complete
 * uniform lattice; coordinates are matched with 1e-9 relative tolerance.
 * Errors are InputError and name the offending line.
 */
GridFunction read_grid_csv(std::istream& in);
GridFunction read_grid_csv_file(const std::string& path);

/// Writes every node in storage order, with shortest round-trip number formatting.
void write_grid_csv(std::ostream& out, const GridFunction& u);

}  // namespace holonorm

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>

#include "holonorm/grid.hpp"
#include "holonorm/norms.hpp"

namespace holonorm::detail {

using Offset = std::array<std::int64_t, kMaxAxes>;

/**
 * Supremum of |stencil(field at base, base + d, ..., base + order*d)| / denominator(d)
 * over bases and nonzero lattice offsets d restricted to the `active` axes,
 * keeping every touched node inside the grid.
 */
struct ScanSpec {
    const GridFunction* grid = nullptr;
    std::span<const double> field;
    std::array<bool, kMaxAxes> active{};
    const Stencil* stencil = nullptr;
    /// Enumerate d and -d once; valid when |stencil| is symmetric under reversal.
    bool half_space = true;
    std::function<double(const Offset&)> denominator;
};

struct ScanResult {
    bool found = false;
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 1.0;
    std::size_t base = 0;
    Offset offset{};
    std::uint64_t pairs = 0;
    Sampling sampling;
};

/// Number of (base, offset) pairs the exhaustive scan would visit.
long double admissible_pairs(const ScanSpec& spec);

ScanResult scan_sup(const ScanSpec& spec, const ScanOptions& opts);

LatticeShift to_shift(const GridFunction& grid, const Offset& d);

}  // namespace holonorm::detail

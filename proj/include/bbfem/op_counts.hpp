#pragma once

#include <cstdint>

namespace bbfem {

/// Arithmetic tallies collected by the kernels when a non-null OpCounts* is
/// passed. Counts are accumulated per loop, not per instruction, so enabling
/// them does not change the kernels' inner loops.
///
/// Transfers between degree 0 and degree 1 in an elevation (or its
/// transpose) have all weights equal to one; they are plain copies or sums and
/// are tallied under `adds`, not `elevation`.
struct OpCounts {
    std::uint64_t elevation = 0;  // multiply-adds inside degree elevations
    std::uint64_t adds = 0;       // unweighted copies/sums
    std::uint64_t axpy = 0;       // scaled vector accumulations
    std::uint64_t base_solve = 0; // dense triangular solve operations
    std::uint64_t scaling = 0;    // vector scalings
    std::uint64_t kernel = 0;     // sum-factorization and pointwise multiply-adds

    std::uint64_t total() const { return elevation + adds + axpy + base_solve + scaling + kernel; }

    OpCounts& operator+=(const OpCounts& o)
    {
        elevation += o.elevation;
        adds += o.adds;
        axpy += o.axpy;
        base_solve += o.base_solve;
        scaling += o.scaling;
        kernel += o.kernel;
        return *this;
    }
};

} // namespace bbfem

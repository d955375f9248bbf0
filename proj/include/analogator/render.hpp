#pragma once

// Activation grids as PGM images and aligned text.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace analogator {

struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major, in [0, 1]

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

Grid make_grid(std::size_t rows, std::size_t cols, std::span<const double> values);
/// Per-cell maximum over the channels of a cell-major W x H x K scene.
Grid scene_grid(std::span<const double> scene, std::size_t width, std::size_t height, std::size_t channels);

/// Panels side by side, separated by `gap` blank columns; shorter panels are
/// padded at the bottom.
Grid join_panels(std::span<const Grid> panels, std::size_t gap = 1);

/// P2 image; pixel = round(255 * (1 - v)). Throws std::invalid_argument for a
/// value outside [0, 1].
void write_pgm(std::ostream& os, const Grid& grid, const std::string& comment = {});
/// Values come back as 1 - pixel / maxval.
Grid read_pgm(std::istream& is);

/// Two-decimal values in fixed-width columns.
std::string render_text_grid(const Grid& grid);

}  // namespace analogator

#pragma once

// Iconic what-by-where scene encoding and the square-grid transforms used by
// the geometric-spatial domain.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace analogator {

/// Attribute alphabet. Channels are laid out colors first, then shapes.
struct Attributes {
    std::vector<std::string> colors;
    std::vector<std::string> shapes;

    std::size_t channels() const { return colors.size() + shapes.size(); }
    std::vector<std::uint8_t> what(std::size_t shape, std::size_t color) const;

    /// {red, green, blue} x {square, circle, triangle}; K = 6.
    static Attributes rgb();
    /// {black, white} x {square, circle, triangle}; K = 5.
    static Attributes black_white();
    static Attributes for_channels(std::size_t k);
};

struct SceneObject {
    int row = 0;  // top-left cell of the where-block
    int col = 0;
    int height = 2;
    int width = 2;
    std::vector<std::uint8_t> what;

    /// Binary W x H occupancy (row-major).
    std::vector<std::uint8_t> where_mask(int width_cells, int height_cells) const;
    bool overlaps(const SceneObject& other) const;
    /// Index of the set shape / color bit under `attrs`.
    std::size_t shape(const Attributes& attrs) const;
    std::size_t color(const Attributes& attrs) const;

    bool operator==(const SceneObject&) const = default;
};

SceneObject make_object(int row, int col, std::size_t shape, std::size_t color, const Attributes& attrs);

/// W x H x K activations stored cell-major: index (row * W + col) * K + k.
struct IconicScene {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> values;
    std::vector<SceneObject> objects;

    double at(int row, int col, int k) const { return values[(static_cast<std::size_t>(row) * width + col) * channels + k]; }
    std::size_t size() const { return values.size(); }
};

/// Sum of where (x) what bindings. Throws std::invalid_argument when objects
/// overlap, leave the grid, or carry a malformed what-vector.
IconicScene encode_scene(std::span<const SceneObject> objects, int width, int height, const Attributes& attrs);

/// Mean channel vector over the selected cells. Throws on an empty selection.
std::vector<double> decode_at(const IconicScene& scene, std::span<const std::uint8_t> cells);

/// Union of the objects' where-masks (W x H).
std::vector<std::uint8_t> occupancy(std::span<const SceneObject> objects, int width, int height);

enum class Flip { None, Horizontal, Vertical, Both };

/// Flip first, then rotate clockwise `rotation` quarter turns.
/// Horizontal mirrors left/right (about the vertical axis); Vertical mirrors
/// top/bottom.
struct GridTransform {
    Flip flip = Flip::None;
    int rotation = 0;

    bool operator==(const GridTransform&) const = default;
};

const char* flip_name(Flip f);

/// Image of a cell on an n x n grid.
std::pair<int, int> transform_cell(int row, int col, int n, GridTransform t);
SceneObject transform_object(const SceneObject& obj, int n, GridTransform t);
/// Permute the cells of an encoded square scene; channel vectors are carried along.
IconicScene transform_scene(const IconicScene& scene, GridTransform t);

/// Corner anchors of 2x2 blocks on a 7x7 grid in clockwise order:
/// top-left, top-right, bottom-right, bottom-left.
inline constexpr int kGeoGrid = 7;
inline constexpr std::pair<int, int> kCornerAnchors[4] = {{0, 0}, {0, 5}, {5, 5}, {5, 0}};

/// Text form: `SCENE <W> <H> <K>` then `OBJ <row> <col> <whatBits>` per object.
void write_scene(std::ostream& os, const IconicScene& scene);
IconicScene read_scene(std::istream& is);

}  // namespace analogator

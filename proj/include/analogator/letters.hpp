#pragma once

// Gridfont letters: the 21-point / 56-segment lattice, its 5-pixel segment
// rendering on a 9 x 25 raster, and a generated corpus of annotated 'a's.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace analogator {

inline constexpr int kLatticeRows = 7;
inline constexpr int kLatticeCols = 3;
inline constexpr int kPointSpacing = 4;
inline constexpr int kRasterRows = 25;
inline constexpr int kRasterCols = 9;
inline constexpr int kLetterRows = 17;  // raster rows 4..20
inline constexpr int kLetterCols = 9;
inline constexpr int kCropTop = 4;
inline constexpr std::size_t kLetterPixels = kLetterRows * kLetterCols;  // 153
inline constexpr int kSegmentCount = 56;
inline constexpr int kMaxShift = 4;

struct LatticePoint {
    int row = 0;
    int col = 0;
    bool operator==(const LatticePoint&) const = default;
};

struct Segment {
    LatticePoint a;
    LatticePoint b;
};

/// Segment table: 14 horizontals, 18 verticals, 24 diagonals.
const std::array<Segment, kSegmentCount>& segment_table();
/// Id of the segment joining two lattice points (either order), or -1.
int segment_id(LatticePoint a, LatticePoint b);
/// The five raster pixels (row, col) a segment covers, before cropping.
std::array<std::pair<int, int>, 5> segment_pixels(int id);

/// 17 x 9 binary raster, row-major.
using Bitmap = std::vector<std::uint8_t>;

/// Union of the segments' pixels cropped to the 17 used rows. Order free.
/// Throws std::out_of_range for an unknown id.
Bitmap rasterize_letter(std::span<const int> segments);

struct GridLetter {
    std::vector<int> segments;  // sorted; empty when read back from pixels
    Bitmap pixels;
    Bitmap brim;
    Bitmap body;

    bool operator==(const GridLetter&) const = default;
};

/// Annotated letter from disjoint brim and body segment lists.
GridLetter make_letter(std::span<const int> brimSegments, std::span<const int> bodySegments);

/// Translate pixels, brim and body together; positive rows move down.
/// Throws std::out_of_range when |rows| > 4 or a pixel would leave the window.
GridLetter shift_vertical(const GridLetter& letter, int rows);
bool can_shift(const GridLetter& letter, int rows);

struct LetterSet {
    std::vector<GridLetter> train;  // train[0] is the prototypical 'a'
    std::vector<GridLetter> test;   // held-out letters
};

/// `n` distinct training 'a's plus 10 held-out ones, all confined to the
/// central zone so every vertical shift in [-4, 4] fits the window.
LetterSet make_mini_letter_corpus(std::size_t n, std::uint64_t seed);
/// Number of distinct letterforms the generator can produce.
std::size_t mini_letter_pool_size();

/// Character map: '.' empty, 'I' brim only, 'O' body only, 'B' both.
std::string render_marking(const GridLetter& letter);
/// Side-by-side marking maps, `perRow` letters per band.
std::string render_contact_sheet(std::span<const GridLetter> letters, std::size_t perRow = 8);

/// Text form: `LETTER`, 17 rows of '.'/'#', then `BRIM` and `BODY` blocks.
void write_letter(std::ostream& os, const GridLetter& letter);
GridLetter read_letter(std::istream& is);

}  // namespace analogator

#include "analogator/letters.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "analogator/util.hpp"

namespace analogator {

namespace {

std::array<Segment, kSegmentCount> build_table() {
    std::array<Segment, kSegmentCount> t{};
    std::size_t k = 0;
    for (int r = 0; r < kLatticeRows; ++r)
        for (int c = 0; c + 1 < kLatticeCols; ++c) t[k++] = {{r, c}, {r, c + 1}};
    for (int r = 0; r + 1 < kLatticeRows; ++r)
        for (int c = 0; c < kLatticeCols; ++c) t[k++] = {{r, c}, {r + 1, c}};
    for (int r = 0; r + 1 < kLatticeRows; ++r)
        for (int c = 0; c + 1 < kLatticeCols; ++c) {
            t[k++] = {{r, c}, {r + 1, c + 1}};
            t[k++] = {{r, c + 1}, {r + 1, c}};
        }
    return t;
}

int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

const std::array<Segment, kSegmentCount>& segment_table() {
    static const auto table = build_table();
    return table;
}

int segment_id(LatticePoint a, LatticePoint b) {
    const auto& t = segment_table();
    for (int k = 0; k < kSegmentCount; ++k) {
        if ((t[k].a == a && t[k].b == b) || (t[k].a == b && t[k].b == a)) return k;
    }
    return -1;
}

std::array<std::pair<int, int>, 5> segment_pixels(int id) {
    if (id < 0 || id >= kSegmentCount) throw std::out_of_range("unknown segment id " + std::to_string(id));
    const auto& s = segment_table()[id];
    const int y0 = s.a.row * kPointSpacing, x0 = s.a.col * kPointSpacing;
    const int dy = sign(s.b.row - s.a.row), dx = sign(s.b.col - s.a.col);
    std::array<std::pair<int, int>, 5> px{};
    for (int t = 0; t < 5; ++t) px[t] = {y0 + t * dy, x0 + t * dx};
    return px;
}

Bitmap rasterize_letter(std::span<const int> segments) {
    Bitmap bm(kLetterPixels, 0);
    for (int id : segments) {
        for (auto [y, x] : segment_pixels(id)) {
            const int row = y - kCropTop;
            if (row < 0 || row >= kLetterRows) continue;
            bm[static_cast<std::size_t>(row) * kLetterCols + x] = 1;
        }
    }
    return bm;
}

GridLetter make_letter(std::span<const int> brimSegments, std::span<const int> bodySegments) {
    for (int a : brimSegments)
        for (int b : bodySegments) {
            if (a == b) throw std::invalid_argument("segment assigned to both brim and body");
        }
    GridLetter l;
    l.segments.assign(brimSegments.begin(), brimSegments.end());
    l.segments.insert(l.segments.end(), bodySegments.begin(), bodySegments.end());
    std::sort(l.segments.begin(), l.segments.end());
    l.segments.erase(std::unique(l.segments.begin(), l.segments.end()), l.segments.end());
    l.pixels = rasterize_letter(l.segments);
    l.brim = rasterize_letter(brimSegments);
    l.body = rasterize_letter(bodySegments);
    return l;
}

bool can_shift(const GridLetter& letter, int rows) {
    if (rows < -kMaxShift || rows > kMaxShift) return false;
    for (int r = 0; r < kLetterRows; ++r)
        for (int c = 0; c < kLetterCols; ++c) {
            if (!letter.pixels[static_cast<std::size_t>(r) * kLetterCols + c]) continue;
            if (r + rows < 0 || r + rows >= kLetterRows) return false;
        }
    return true;
}

GridLetter shift_vertical(const GridLetter& letter, int rows) {
    if (!can_shift(letter, rows)) {
        throw std::out_of_range("shift of " + std::to_string(rows) + " rows leaves the letter window");
    }
    auto move = [rows](const Bitmap& in) {
        Bitmap out(kLetterPixels, 0);
        for (int r = 0; r < kLetterRows; ++r)
            for (int c = 0; c < kLetterCols; ++c) {
                if (in[static_cast<std::size_t>(r) * kLetterCols + c]) {
                    out[static_cast<std::size_t>(r + rows) * kLetterCols + c] = 1;
                }
            }
        return out;
    };
    GridLetter out;
    out.pixels = move(letter.pixels);
    out.brim = move(letter.brim);
    out.body = move(letter.body);
    // Segment ids move by whole lattice rows only.
    if (rows % kPointSpacing == 0) {
        const int dr = rows / kPointSpacing;
        for (int id : letter.segments) {
            const auto& s = segment_table()[id];
            out.segments.push_back(segment_id({s.a.row + dr, s.a.col}, {s.b.row + dr, s.b.col}));
        }
        std::sort(out.segments.begin(), out.segments.end());
    }
    return out;
}

namespace {

// Letters live in lattice rows 2..4 (the central zone). Coordinates below are
// relative to lattice row 2.
int seg(int r1, int c1, int r2, int c2) {
    const int id = segment_id({r1 + 2, c1}, {r2 + 2, c2});
    if (id < 0) throw std::logic_error("bad generator segment");
    return id;
}

struct Part {
    std::vector<int> segments;
};

std::vector<Part> brim_parts() {
    return {
        {{seg(0, 0, 0, 1), seg(0, 1, 0, 2)}},
        {{seg(0, 1, 0, 2)}},
        {{seg(1, 0, 0, 1), seg(0, 1, 0, 2)}},
        {{seg(0, 0, 0, 1), seg(0, 1, 0, 2), seg(0, 2, 1, 2)}},
        {{seg(0, 1, 1, 2)}},
        {{seg(0, 1, 0, 2), seg(0, 2, 1, 2)}},
        {{seg(1, 0, 0, 1), seg(0, 1, 1, 2)}},
        {{seg(0, 0, 0, 1), seg(0, 1, 1, 2)}},
        {{seg(1, 0, 0, 0), seg(0, 0, 0, 1), seg(0, 1, 0, 2)}},
        {{seg(1, 0, 0, 1), seg(0, 1, 0, 2), seg(0, 2, 1, 2)}},
        {{seg(0, 0, 0, 1), seg(0, 0, 1, 1)}},
    };
}

std::vector<Part> bowl_parts() {
    return {
        {{seg(1, 0, 1, 1), seg(1, 1, 1, 2), seg(1, 0, 2, 0), seg(2, 0, 2, 1), seg(2, 1, 2, 2)}},
        {{seg(1, 0, 1, 1), seg(1, 0, 2, 0), seg(2, 0, 2, 1), seg(2, 1, 2, 2)}},
        {{seg(1, 1, 1, 2), seg(1, 1, 2, 0), seg(2, 0, 2, 1), seg(2, 1, 2, 2)}},
        {{seg(1, 0, 1, 1), seg(1, 1, 1, 2), seg(1, 0, 2, 1), seg(2, 1, 2, 2)}},
        {{seg(1, 0, 1, 1), seg(1, 1, 1, 2), seg(1, 0, 2, 0), seg(2, 0, 2, 1), seg(2, 1, 1, 2)}},
        {{seg(1, 1, 1, 2), seg(1, 1, 2, 0), seg(2, 0, 2, 1), seg(2, 1, 1, 2)}},
        {{seg(1, 0, 1, 1), seg(1, 0, 2, 0), seg(2, 0, 2, 1), seg(1, 1, 2, 1)}},
        {{seg(1, 0, 2, 0), seg(2, 0, 2, 1), seg(2, 1, 2, 2), seg(1, 0, 1, 1), seg(1, 1, 2, 2)}},
    };
}

std::vector<Part> stem_parts() {
    return {
        {{seg(0, 2, 1, 2), seg(1, 2, 2, 2)}},
        {{seg(1, 2, 2, 2)}},
        {{}},
    };
}

std::set<std::pair<int, int>> points_of(const std::vector<int>& segs) {
    std::set<std::pair<int, int>> pts;
    for (int id : segs) {
        const auto& s = segment_table()[id];
        pts.insert({s.a.row, s.a.col});
        pts.insert({s.b.row, s.b.col});
    }
    return pts;
}

// Deterministic enumeration of every valid brim/body combination with a
// distinct segment set. The first entry is the prototypical 'a'.
std::vector<GridLetter> letter_pool() {
    std::vector<GridLetter> pool;
    std::set<std::vector<int>> seen;
    const auto brims = brim_parts();
    const auto bowls = bowl_parts();
    const auto stems = stem_parts();
    for (const auto& stem : stems)
        for (const auto& bowl : bowls)
            for (const auto& brim : brims) {
                std::vector<int> body = bowl.segments;
                body.insert(body.end(), stem.segments.begin(), stem.segments.end());
                std::sort(body.begin(), body.end());
                if (std::adjacent_find(body.begin(), body.end()) != body.end()) continue;
                bool clash = false;
                for (int b : brim.segments) clash |= std::binary_search(body.begin(), body.end(), b);
                if (clash) continue;
                // brim and body must touch
                const auto bp = points_of(brim.segments);
                const auto op = points_of(body);
                bool touch = false;
                for (const auto& p : bp) touch |= op.count(p) > 0;
                if (!touch) continue;
                auto letter = make_letter(brim.segments, body);
                if (!seen.insert(letter.segments).second) continue;
                pool.push_back(std::move(letter));
            }
    // Prototype: full top bar, boxed bowl, full-height stem.
    const std::vector<int> protoBrim = {seg(0, 0, 0, 1), seg(0, 1, 0, 2)};
    auto proto = std::find_if(pool.begin(), pool.end(), [&](const GridLetter& l) {
        return l.brim == rasterize_letter(protoBrim) &&
               l.segments.size() == 9;  // 2 brim + 5 bowl + 2 stem
    });
    if (proto != pool.end()) std::rotate(pool.begin(), proto, proto + 1);
    return pool;
}

}  // namespace

std::size_t mini_letter_pool_size() { return letter_pool().size(); }

LetterSet make_mini_letter_corpus(std::size_t n, std::uint64_t seed) {
    constexpr std::size_t kTestLetters = 10;
    if (n < 10) throw std::invalid_argument("mini letter corpus needs at least 10 letters");
    auto pool = letter_pool();
    if (n + kTestLetters > pool.size()) {
        throw std::invalid_argument("mini letter corpus: at most " + std::to_string(pool.size() - kTestLetters) +
                                    " training letters available");
    }
    LetterSet set;
    set.train.push_back(pool.front());
    std::vector<GridLetter> rest(pool.begin() + 1, pool.end());
    Rng rng(seed);
    rng.shuffle(rest);
    set.train.insert(set.train.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n - 1));
    set.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(n - 1),
                    rest.begin() + static_cast<std::ptrdiff_t>(n - 1 + kTestLetters));
    return set;
}

std::string render_marking(const GridLetter& letter) {
    std::string out;
    for (int r = 0; r < kLetterRows; ++r) {
        for (int c = 0; c < kLetterCols; ++c) {
            const auto k = static_cast<std::size_t>(r) * kLetterCols + c;
            const bool brim = letter.brim[k], body = letter.body[k];
            out += brim && body ? 'B' : brim ? 'I' : body ? 'O' : '.';
        }
        out += '\n';
    }
    return out;
}

std::string render_contact_sheet(std::span<const GridLetter> letters, std::size_t perRow) {
    std::string out;
    for (std::size_t start = 0; start < letters.size(); start += perRow) {
        const std::size_t end = std::min(letters.size(), start + perRow);
        for (std::size_t i = start; i < end; ++i) {
            std::string label = "#" + std::to_string(i);
            label.resize(kLetterCols + 2, ' ');
            out += label;
        }
        out += '\n';
        for (int r = 0; r < kLetterRows; ++r) {
            for (std::size_t i = start; i < end; ++i) {
                const auto mark = render_marking(letters[i]);
                out += mark.substr(static_cast<std::size_t>(r) * (kLetterCols + 1), kLetterCols);
                out += "  ";
            }
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

namespace {

void write_raster(std::ostream& os, const Bitmap& bm) {
    for (int r = 0; r < kLetterRows; ++r) {
        for (int c = 0; c < kLetterCols; ++c) os << (bm[static_cast<std::size_t>(r) * kLetterCols + c] ? '#' : '.');
        os << '\n';
    }
}

Bitmap read_raster(std::istream& is) {
    Bitmap bm(kLetterPixels, 0);
    std::string line;
    for (int r = 0; r < kLetterRows; ++r) {
        if (!std::getline(is, line)) throw std::runtime_error("letter: raster truncated");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() != kLetterCols) throw std::runtime_error("letter: raster row has wrong width '" + line + "'");
        for (int c = 0; c < kLetterCols; ++c) {
            if (line[c] == '#') {
                bm[static_cast<std::size_t>(r) * kLetterCols + c] = 1;
            } else if (line[c] != '.') {
                throw std::runtime_error("letter: bad raster character");
            }
        }
    }
    return bm;
}

void expect_line(std::istream& is, const std::string& want) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("letter: expected " + want);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != want) throw std::runtime_error("letter: expected " + want + ", got '" + line + "'");
}

}  // namespace

void write_letter(std::ostream& os, const GridLetter& letter) {
    os << "LETTER\n";
    write_raster(os, letter.pixels);
    os << "BRIM\n";
    write_raster(os, letter.brim);
    os << "BODY\n";
    write_raster(os, letter.body);
}

GridLetter read_letter(std::istream& is) {
    GridLetter l;
    expect_line(is, "LETTER");
    l.pixels = read_raster(is);
    expect_line(is, "BRIM");
    l.brim = read_raster(is);
    expect_line(is, "BODY");
    l.body = read_raster(is);
    return l;
}

}  // namespace analogator

#include "analogator/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "analogator/util.hpp"

namespace analogator {

Grid make_grid(std::size_t rows, std::size_t cols, std::span<const double> values) {
    if (values.size() != rows * cols) throw std::invalid_argument("grid: value count does not match shape");
    return {rows, cols, {values.begin(), values.end()}};
}

Grid scene_grid(std::span<const double> scene, std::size_t width, std::size_t height, std::size_t channels) {
    if (scene.size() != width * height * channels) throw std::invalid_argument("scene_grid: size mismatch");
    Grid g{height, width, std::vector<double>(width * height, 0.0)};
    for (std::size_t cell = 0; cell < width * height; ++cell)
        for (std::size_t k = 0; k < channels; ++k) g.values[cell] = std::max(g.values[cell], scene[cell * channels + k]);
    return g;
}

Grid join_panels(std::span<const Grid> panels, std::size_t gap) {
    Grid out;
    for (const auto& p : panels) out.rows = std::max(out.rows, p.rows);
    for (std::size_t i = 0; i < panels.size(); ++i) out.cols += panels[i].cols + (i ? gap : 0);
    out.values.assign(out.rows * out.cols, 0.0);
    std::size_t left = 0;
    for (const auto& p : panels) {
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < p.cols; ++c) out.values[r * out.cols + left + c] = p.at(r, c);
        left += p.cols + gap;
    }
    return out;
}

void write_pgm(std::ostream& os, const Grid& g, const std::string& comment) {
    os << "P2\n";
    if (!comment.empty()) os << "# " << comment << '\n';
    os << g.cols << ' ' << g.rows << "\n255\n";
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c) {
            const double v = g.at(r, c);
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("write_pgm: value outside [0, 1]");
            os << (c ? " " : "") << static_cast<int>(std::lround(255.0 * (1.0 - v)));
        }
        os << '\n';
    }
}

namespace {

std::string next_token(std::istream& is) {
    std::string tok;
    while (is >> tok) {
        if (tok[0] != '#') return tok;
        std::string rest;
        std::getline(is, rest);
    }
    throw std::runtime_error("pgm: unexpected end of input");
}

}  // namespace

Grid read_pgm(std::istream& is) {
    if (next_token(is) != "P2") throw std::runtime_error("pgm: not a P2 image");
    const auto cols = static_cast<std::size_t>(parse_integer(next_token(is)));
    const auto rows = static_cast<std::size_t>(parse_integer(next_token(is)));
    const auto maxval = parse_integer(next_token(is));
    if (maxval <= 0) throw std::runtime_error("pgm: bad maxval");
    Grid g{rows, cols, std::vector<double>(rows * cols)};
    for (auto& v : g.values) {
        const auto p = parse_integer(next_token(is));
        if (p < 0 || p > maxval) throw std::runtime_error("pgm: pixel outside range");
        v = 1.0 - static_cast<double>(p) / static_cast<double>(maxval);
    }
    return g;
}

std::string render_text_grid(const Grid& g) {
    std::string out;
    char buf[16];
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c) {
            std::snprintf(buf, sizeof buf, "%s%4.2f", c ? " " : "", g.at(r, c));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace analogator

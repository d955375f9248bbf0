#include "analogator/scene.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "analogator/tensor.hpp"
#include "analogator/util.hpp"

namespace analogator {

std::vector<std::uint8_t> Attributes::what(std::size_t shape, std::size_t color) const {
    if (shape >= shapes.size() || color >= colors.size()) throw std::out_of_range("attribute index out of range");
    std::vector<std::uint8_t> w(channels(), 0);
    w[color] = 1;
    w[colors.size() + shape] = 1;
    return w;
}

Attributes Attributes::rgb() { return {{"red", "green", "blue"}, {"square", "circle", "triangle"}}; }

Attributes Attributes::black_white() { return {{"black", "white"}, {"square", "circle", "triangle"}}; }

Attributes Attributes::for_channels(std::size_t k) {
    if (k == 6) return rgb();
    if (k == 5) return black_white();
    throw std::invalid_argument("no attribute alphabet with " + std::to_string(k) + " channels");
}

std::vector<std::uint8_t> SceneObject::where_mask(int width_cells, int height_cells) const {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(width_cells) * height_cells, 0);
    for (int r = row; r < row + height; ++r)
        for (int c = col; c < col + width; ++c) {
            if (r < 0 || c < 0 || r >= height_cells || c >= width_cells) {
                throw std::out_of_range("object extends outside the grid");
            }
            mask[static_cast<std::size_t>(r) * width_cells + c] = 1;
        }
    return mask;
}

bool SceneObject::overlaps(const SceneObject& o) const {
    return row < o.row + o.height && o.row < row + height && col < o.col + o.width && o.col < col + width;
}

namespace {

std::size_t single_bit(std::span<const std::uint8_t> bits, const char* what) {
    std::size_t found = bits.size();
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] > 1) throw std::invalid_argument("what-vector is not binary");
        if (bits[k]) {
            if (found != bits.size()) throw std::invalid_argument(std::string("what-vector has several ") + what + " bits");
            found = k;
        }
    }
    if (found == bits.size()) throw std::invalid_argument(std::string("what-vector has no ") + what + " bit");
    return found;
}

}  // namespace

std::size_t SceneObject::color(const Attributes& attrs) const {
    return single_bit(std::span(what).first(attrs.colors.size()), "color");
}

std::size_t SceneObject::shape(const Attributes& attrs) const {
    return single_bit(std::span(what).subspan(attrs.colors.size()), "shape");
}

SceneObject make_object(int row, int col, std::size_t shape, std::size_t color, const Attributes& attrs) {
    SceneObject o;
    o.row = row;
    o.col = col;
    o.what = attrs.what(shape, color);
    return o;
}

IconicScene encode_scene(std::span<const SceneObject> objects, int width, int height, const Attributes& attrs) {
    const auto k = attrs.channels();
    const auto cells = static_cast<std::size_t>(width) * height;
    std::vector<Tensor2> bindings;
    bindings.reserve(objects.size());
    for (std::size_t a = 0; a < objects.size(); ++a) {
        const auto& obj = objects[a];
        if (obj.what.size() != k) throw std::invalid_argument("what-vector length does not match the alphabet");
        (void)obj.shape(attrs);
        (void)obj.color(attrs);
        for (std::size_t b = 0; b < a; ++b) {
            if (obj.overlaps(objects[b])) throw std::invalid_argument("scene objects overlap");
        }
        const auto mask = obj.where_mask(width, height);
        std::vector<double> where(mask.begin(), mask.end());
        std::vector<double> what(obj.what.begin(), obj.what.end());
        bindings.push_back(analogator::bind(where, what));
    }
    IconicScene scene;
    scene.width = width;
    scene.height = height;
    scene.channels = static_cast<int>(k);
    scene.values = compose(bindings, cells, k).data;
    scene.objects.assign(objects.begin(), objects.end());
    return scene;
}

std::vector<double> decode_at(const IconicScene& scene, std::span<const std::uint8_t> cells) {
    if (cells.size() != static_cast<std::size_t>(scene.width) * scene.height) {
        throw std::invalid_argument("decode_at: cell mask size mismatch");
    }
    std::vector<double> sum(scene.channels, 0.0);
    std::size_t n = 0;
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
        if (!cells[cell]) continue;
        ++n;
        for (int k = 0; k < scene.channels; ++k) sum[k] += scene.values[cell * scene.channels + k];
    }
    if (n == 0) throw std::invalid_argument("decode_at: empty cell selection");
    for (auto& v : sum) v /= static_cast<double>(n);
    return sum;
}

std::vector<std::uint8_t> occupancy(std::span<const SceneObject> objects, int width, int height) {
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(width) * height, 0);
    for (const auto& o : objects) {
        const auto m = o.where_mask(width, height);
        for (std::size_t i = 0; i < occ.size(); ++i) occ[i] |= m[i];
    }
    return occ;
}

const char* flip_name(Flip f) {
    switch (f) {
        case Flip::None: return "none";
        case Flip::Horizontal: return "horizontal";
        case Flip::Vertical: return "vertical";
        case Flip::Both: return "both";
    }
    return "?";
}

std::pair<int, int> transform_cell(int row, int col, int n, GridTransform t) {
    int r = row, c = col;
    if (t.flip == Flip::Horizontal || t.flip == Flip::Both) c = n - 1 - c;
    if (t.flip == Flip::Vertical || t.flip == Flip::Both) r = n - 1 - r;
    const int turns = ((t.rotation % 4) + 4) % 4;
    for (int q = 0; q < turns; ++q) {
        const int nr = c, nc = n - 1 - r;
        r = nr;
        c = nc;
    }
    return {r, c};
}

SceneObject transform_object(const SceneObject& obj, int n, GridTransform t) {
    int minR = n, minC = n, maxR = -1, maxC = -1;
    for (int r = obj.row; r < obj.row + obj.height; ++r)
        for (int c = obj.col; c < obj.col + obj.width; ++c) {
            auto [tr, tc] = transform_cell(r, c, n, t);
            minR = std::min(minR, tr);
            minC = std::min(minC, tc);
            maxR = std::max(maxR, tr);
            maxC = std::max(maxC, tc);
        }
    SceneObject out = obj;
    out.row = minR;
    out.col = minC;
    out.height = maxR - minR + 1;
    out.width = maxC - minC + 1;
    return out;
}

IconicScene transform_scene(const IconicScene& scene, GridTransform t) {
    if (scene.width != scene.height) throw std::invalid_argument("transform_scene: grid must be square");
    const int n = scene.width;
    IconicScene out = scene;
    std::fill(out.values.begin(), out.values.end(), 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            auto [tr, tc] = transform_cell(r, c, n, t);
            for (int k = 0; k < scene.channels; ++k) {
                out.values[(static_cast<std::size_t>(tr) * n + tc) * scene.channels + k] = scene.at(r, c, k);
            }
        }
    for (auto& o : out.objects) o = transform_object(o, n, t);
    return out;
}

void write_scene(std::ostream& os, const IconicScene& scene) {
    os << "SCENE " << scene.width << ' ' << scene.height << ' ' << scene.channels << '\n';
    for (const auto& o : scene.objects) {
        os << "OBJ " << o.row << ' ' << o.col << ' ';
        for (auto b : o.what) os << static_cast<int>(b);
        os << '\n';
    }
}

IconicScene read_scene(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("scene: unexpected end of input");
    const auto head = split_ws(line);
    if (head.size() != 4 || head[0] != "SCENE") throw std::runtime_error("scene: bad header '" + line + "'");
    const int w = static_cast<int>(parse_integer(head[1]));
    const int h = static_cast<int>(parse_integer(head[2]));
    const auto k = static_cast<std::size_t>(parse_integer(head[3]));
    const auto attrs = Attributes::for_channels(k);
    std::vector<SceneObject> objects;
    while (is.peek() == 'O') {
        std::getline(is, line);
        const auto tok = split_ws(line);
        if (tok.size() != 4 || tok[0] != "OBJ" || tok[3].size() != k) {
            throw std::runtime_error("scene: bad object line '" + line + "'");
        }
        SceneObject o;
        o.row = static_cast<int>(parse_integer(tok[1]));
        o.col = static_cast<int>(parse_integer(tok[2]));
        for (char ch : tok[3]) {
            if (ch != '0' && ch != '1') throw std::runtime_error("scene: bad what bits '" + tok[3] + "'");
            o.what.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
        objects.push_back(std::move(o));
    }
    return encode_scene(objects, w, h, attrs);
}

}  // namespace analogator

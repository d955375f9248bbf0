#include <doctest.h>

#include <set>
#include <sstream>

#include "analogator/letters.hpp"
#include "analogator/scene.hpp"
#include "analogator/tensor.hpp"
#include "analogator/util.hpp"

using namespace analogator;

TEST_CASE("binding is the outer product") {
    const std::vector<double> where{0.1, 0.5, 0.9, 0.1}, what{0.9, 0.0};
    const auto t = bind(where, what);
    REQUIRE(t.rows == 4);
    REQUIRE(t.cols == 2);
    CHECK(t(0, 0) == doctest::Approx(0.09));
    CHECK(t(1, 0) == doctest::Approx(0.45));
    CHECK(t(2, 0) == doctest::Approx(0.81));
    CHECK(t(3, 0) == doctest::Approx(0.09));
    CHECK(t(2, 1) == 0.0);
}

TEST_CASE("unbinding an orthogonal role recovers its filler") {
    const std::vector<double> r1{1, 0, 0}, r2{0, 1, 0}, f1{1, 0, 1}, f2{0, 1, 0};
    const Tensor2 parts[] = {bind(r1, f1), bind(r2, f2)};
    const auto sum = compose(parts, 3, 3);
    CHECK(unbind(sum, r1) == f1);
    CHECK(unbind(sum, r2) == f2);
    CHECK(compose({}, 2, 2) == Tensor2(2, 2));
}

TEST_CASE("scene encoding and decoding") {
    const auto attrs = Attributes::rgb();
    const SceneObject objs[] = {make_object(0, 0, 1, 2, attrs), make_object(5, 5, 0, 0, attrs)};
    const auto scene = encode_scene(objs, 7, 7, attrs);
    CHECK(scene.size() == 7 * 7 * 6);
    // channel layout: colors first, then shapes
    CHECK(scene.at(0, 0, 2) == 1.0);
    CHECK(scene.at(0, 0, 3 + 1) == 1.0);
    CHECK(scene.at(0, 0, 0) == 0.0);
    CHECK(scene.at(3, 3, 0) == 0.0);
    const auto mask = objs[0].where_mask(7, 7);
    const auto back = decode_at(scene, mask);
    CHECK(back == std::vector<double>(objs[0].what.begin(), objs[0].what.end()));
}

TEST_CASE("scene validation") {
    const auto attrs = Attributes::rgb();
    const SceneObject overlap[] = {make_object(0, 0, 0, 0, attrs), make_object(1, 1, 1, 1, attrs)};
    CHECK_THROWS_AS(encode_scene(overlap, 7, 7, attrs), std::invalid_argument);
    const SceneObject outside[] = {make_object(6, 6, 0, 0, attrs)};
    CHECK_THROWS(encode_scene(outside, 7, 7, attrs));
    CHECK(Attributes::black_white().channels() == 5);
}

TEST_CASE("quarter turn moves the top-left cell to the top-right") {
    // clockwise: (r, c) -> (c, n-1-r)
    CHECK(transform_cell(0, 0, 7, {Flip::None, 1}) == std::pair{0, 6});
    CHECK(transform_cell(0, 6, 7, {Flip::None, 1}) == std::pair{6, 6});
    CHECK(transform_cell(2, 3, 7, {Flip::None, 4}) == std::pair{2, 3});
    CHECK(transform_cell(1, 2, 7, {Flip::Horizontal, 0}) == std::pair{1, 4});
    CHECK(transform_cell(1, 2, 7, {Flip::Vertical, 0}) == std::pair{5, 2});
    CHECK(transform_cell(1, 2, 7, {Flip::Both, 0}) == std::pair{5, 4});
}

TEST_CASE("corner blocks rotate clockwise through the anchors") {
    const auto attrs = Attributes::rgb();
    for (int k = 0; k < 4; ++k) {
        const auto o = make_object(kCornerAnchors[k].first, kCornerAnchors[k].second, 0, 0, attrs);
        const auto t = transform_object(o, kGeoGrid, {Flip::None, 1});
        CHECK(std::pair{t.row, t.col} == kCornerAnchors[(k + 1) % 4]);
    }
}

TEST_CASE("the eight flip/rotation combinations give the eight symmetries of the square") {
    std::set<std::vector<std::pair<int, int>>> images;
    for (int f = 0; f < 4; ++f)
        for (int r = 0; r < 4; ++r) {
            std::vector<std::pair<int, int>> img;
            for (auto [pr, pc] : {std::pair{0, 1}, std::pair{2, 5}}) img.push_back(transform_cell(pr, pc, 7, {static_cast<Flip>(f), r}));
            images.insert(img);
        }
    CHECK(images.size() == 8);
}

TEST_CASE("transform_scene agrees with transform_object") {
    const auto attrs = Attributes::rgb();
    const SceneObject objs[] = {make_object(0, 0, 1, 2, attrs), make_object(0, 5, 2, 1, attrs)};
    const auto scene = encode_scene(objs, 7, 7, attrs);
    const GridTransform t{Flip::Vertical, 3};
    const auto moved = transform_scene(scene, t);
    std::vector<SceneObject> expect;
    for (const auto& o : objs) expect.push_back(transform_object(o, 7, t));
    CHECK(moved.values == encode_scene(expect, 7, 7, attrs).values);
}

TEST_CASE("scene text round trip") {
    const auto attrs = Attributes::rgb();
    const SceneObject objs[] = {make_object(0, 0, 1, 2, attrs), make_object(5, 0, 2, 0, attrs)};
    const auto scene = encode_scene(objs, 7, 7, attrs);
    std::stringstream ss;
    write_scene(ss, scene);
    const auto back = read_scene(ss);
    CHECK(back.values == scene.values);
    CHECK(back.objects == scene.objects);
}

TEST_CASE("segment table counts by direction") {
    int h = 0, v = 0, d = 0;
    for (const auto& s : segment_table()) {
        if (s.a.row == s.b.row) ++h;
        else if (s.a.col == s.b.col) ++v;
        else ++d;
    }
    CHECK(h == 14);
    CHECK(v == 18);
    CHECK(d == 24);
    CHECK(segment_id({0, 0}, {0, 1}) == segment_id({0, 1}, {0, 0}));
    CHECK(segment_id({0, 0}, {2, 0}) == -1);
}

TEST_CASE("segments cover five raster pixels including both lattice points") {
    const int id = segment_id({3, 1}, {4, 2});
    const auto px = segment_pixels(id);
    CHECK(px.front() == std::pair{12, 4});
    CHECK(px.back() == std::pair{16, 8});
    CHECK(px[2] == std::pair{14, 6});
    CHECK_THROWS_AS(segment_pixels(56), std::out_of_range);
}

TEST_CASE("rasterizing crops to the 17 used rows") {
    // a horizontal on lattice row 1 (raster row 4) lands on cropped row 0
    const int seg[] = {segment_id({1, 0}, {1, 1})};
    const auto bm = rasterize_letter(seg);
    CHECK(bm.size() == 153);
    int on = 0;
    for (int c = 0; c < 9; ++c) on += bm[c];
    CHECK(on == 5);
    // row 0 of the lattice is above the crop
    const int top[] = {segment_id({0, 0}, {0, 1})};
    for (auto b : rasterize_letter(top)) CHECK(b == 0);
}

TEST_CASE("letter shifting") {
    const auto set = make_mini_letter_corpus(10, 1);
    const auto& a = set.train.front();
    for (int s = -kMaxShift; s <= kMaxShift; ++s) CHECK(can_shift(a, s));
    const auto down = shift_vertical(a, 2);
    CHECK(down.pixels[2 * kLetterCols + 4] == a.pixels[4]);
    CHECK(shift_vertical(down, -2).pixels == a.pixels);
    CHECK_THROWS(shift_vertical(a, 5));
}

TEST_CASE("mini letter corpus") {
    const auto set = make_mini_letter_corpus(30, 4);
    CHECK(set.train.size() == 30);
    CHECK(set.test.size() == 10);
    std::set<Bitmap> distinct;
    for (const auto& l : set.train) distinct.insert(l.pixels);
    for (const auto& l : set.test) distinct.insert(l.pixels);
    CHECK(distinct.size() == 40);
    for (const auto& l : set.train) {
        for (std::size_t k = 0; k < kLetterPixels; ++k) CHECK(l.pixels[k] == (l.brim[k] | l.body[k]));
    }
    CHECK(make_mini_letter_corpus(30, 4).train == set.train);
    CHECK_THROWS(make_mini_letter_corpus(mini_letter_pool_size(), 1));
}

TEST_CASE("letter text round trip and marking map") {
    const auto set = make_mini_letter_corpus(10, 2);
    std::stringstream ss;
    write_letter(ss, set.train[3]);
    const auto back = read_letter(ss);
    CHECK(back.pixels == set.train[3].pixels);
    CHECK(back.brim == set.train[3].brim);
    CHECK(back.body == set.train[3].body);
    const auto map = render_marking(set.train[3]);
    CHECK(std::count(map.begin(), map.end(), '\n') == kLetterRows);
}

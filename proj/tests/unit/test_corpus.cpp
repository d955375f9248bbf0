#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "analogator/corpus.hpp"

using namespace analogator;

namespace {

// Sum over relations of (facts with that relation)^2.
std::size_t same_relation_square_sum(const FamilySet& set, std::size_t family) {
    std::map<std::size_t, std::size_t> n;
    for (const auto& f : set.facts)
        if (set.family[f.figure] == family) ++n[f.relation];
    std::size_t sum = 0;
    for (auto [r, k] : n) sum += k * k;
    return sum;
}

Corpus round_trip(const Corpus& c) {
    std::stringstream ss;
    write_corpus(ss, c, "unit");
    return read_corpus(ss);
}

void check_same(const Corpus& a, const Corpus& b) {
    CHECK(b.domain == a.domain);
    CHECK(b.shape == a.shape);
    CHECK(b.pairs == a.pairs);
    CHECK(b.trainIdx == a.trainIdx);
    CHECK(b.testIdx == a.testIdx);
    CHECK(b.hash() == a.hash());
}

}  // namespace

TEST_CASE("letter-part corpus size follows letters x targets x 2 roles") {
    // the published corpus: 229 letters x 3 targets x 2 roles
    CHECK(229 * 3 * 2 == 1374);
    const auto set = make_mini_letter_corpus(30, 1);
    auto c = gen_letterpart(set.train, 3, 1);
    CHECK(c.size() == 30 * 3 * 2);
    append_letter_tests(c, set.train.front(), set.test);
    CHECK(c.testIdx.size() == 10 * 2);
    c.validate();
    CHECK(c.shape == FigureGroundShape{153, 0, 153, 153, 153});
}

TEST_CASE("variable-position corpus size follows letters x 9 shifts x 2 roles") {
    CHECK(229 * 9 * 2 == 4122);
    const auto set = make_mini_letter_corpus(12, 1);
    const auto c = gen_varpos(set.train, set.train.front(), 1);
    CHECK(c.size() == 12 * 9 * 2);
}

TEST_CASE("rotation enumeration count") {
    // empty corner x source type x figure x rotation x target type
    CHECK(enumerate_rotation().size() == 4u * 9 * 3 * 4 * 9);
    CHECK(enumerate_rotation().size() == 3888);
}

TEST_CASE("rotation answers keep the figure's offset from the empty corner") {
    for (const auto& m : enumerate_rotation()) {
        const auto& src = m.source[m.figure];
        const auto& ans = m.target[m.answer];
        int rot = -1;
        for (int r = 0; r < 4; ++r) {
            const auto moved = transform_object(src, kGeoGrid, {Flip::None, r});
            if (moved.row == ans.row && moved.col == ans.col) rot = r;
        }
        REQUIRE(rot >= 0);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto moved = transform_object(m.source[k], kGeoGrid, {Flip::None, rot});
            CHECK(moved.row == m.target[k].row);
            CHECK(moved.col == m.target[k].col);
        }
    }
}

TEST_CASE("oddity source and target counts by brute force") {
    // three objects on three of four corners; each object one of 3 shapes and 3 colors
    std::size_t sources = 0, targets = 0;
    for (int empty = 0; empty < 4; ++empty)
        for (int code = 0; code < 9 * 9 * 9; ++code) {
            std::array<int, 3> shape{}, color{};
            for (int k = 0, c = code; k < 3; ++k, c /= 9) {
                shape[k] = c % 9 / 3;
                color[k] = c % 3;
            }
            auto odd_of = [](const std::array<int, 3>& v) {
                if (v[0] == v[1] && v[1] == v[2]) return -2;  // uniform
                if (v[0] != v[1] && v[1] != v[2] && v[0] != v[2]) return -1;  // all distinct
                return v[0] == v[1] ? 2 : v[0] == v[2] ? 1 : 0;
            };
            const int so = odd_of(shape), co = odd_of(color);
            if (so >= 0 && co == -2) ++sources;             // odd in shape only
            if (so >= 0 && co >= 0 && so != co) ++targets;  // one shape-odd and a different color-odd object
        }
    CHECK(sources == 216);
    CHECK(oddity_source_count_per_dimension() == sources);
    CHECK(oddity_target_count() == targets);
    CHECK(targets == 864);
}

TEST_CASE("oddity corpus answers follow the source's odd dimension") {
    const auto c = gen_oddity(300, 30, Placement::Corners, 5);
    CHECK(c.size() == 300);
    CHECK(c.testIdx.size() == 30);
    const auto attrs = Attributes::rgb();
    for (const auto& meta : c.meta) {
        const auto& m = std::get<GeometricMeta>(meta);
        const auto& f = m.source[m.figure];
        const auto& other = m.source[(m.figure + 1) % 3];
        const bool byShape = f.shape(attrs) != other.shape(attrs);
        const auto& a = m.target[m.answer];
        for (std::size_t k = 0; k < 3; ++k) {
            if (k == m.answer) continue;
            if (byShape) CHECK(m.target[k].shape(attrs) != a.shape(attrs));
            else CHECK(m.target[k].color(attrs) != a.color(attrs));
        }
    }
}

TEST_CASE("twist corpus hint units") {
    const auto h = hint_units({Flip::Vertical, 3});
    CHECK(h == std::vector<double>{0, 0, 0, 1, 0, 1, 0, 0});
    CHECK(hint_units({Flip::None, 0}) == std::vector<double>{1, 0, 0, 0, 0, 0, 0, 1});
    const auto c = gen_twist(200, 20, true, 3);
    CHECK(c.shape.hints == 8);
    CHECK(c.shape.srn_input() == 294 + 8 + 49);
    CHECK(gen_twist(50, 5, false, 3).shape.hints == 0);
}

TEST_CASE("Hinton trees: 104 facts and 1008 pooled same-relation pairs") {
    const auto set = hinton_trees();
    CHECK(set.people.size() == 24);
    CHECK(set.relations.size() == 12);
    CHECK(set.facts.size() == 104);
    // pooled over both trees each relation contributes (2 n_r)^2 ordered pairs
    std::map<std::size_t, std::size_t> n;
    for (const auto& f : set.facts) ++n[f.relation];
    std::size_t pooled = 0;
    for (auto [r, k] : n) pooled += k * k;
    CHECK(pooled == 1008);
    CHECK(same_relation_square_sum(set, 0) * 4 == pooled);
    CHECK(gen_hinton_analogies(8, 1).size() == pooled);
}

TEST_CASE("Hinton trees are isomorphic") {
    const auto set = hinton_trees();
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> english, italian;
    for (const auto& f : set.facts) {
        auto& side = f.figure < 12 ? english : italian;
        side.insert({f.figure % 12, f.ground % 12, f.relation});
    }
    CHECK(english == italian);
    CHECK(set.sentence(set.facts.front()).find(" is the ") != std::string::npos);
}

TEST_CASE("3a held-out pairs cross the two trees") {
    const auto c = gen_hinton_analogies(8, 3);
    CHECK(c.testIdx.size() == 8);
    CHECK(c.shape == FigureGroundShape{24, 0, 24, 24, 24});
    for (auto i : c.testIdx) {
        const auto& m = std::get<FamilyMeta>(c.meta[i]);
        CHECK((m.sourceFigure < 12) != (m.targetFigure < 12));
    }
}

TEST_CASE("African family template") {
    const auto single = african_family_template();
    CHECK(single.people.size() == 6);
    CHECK(single.relations.size() == 11);
    CHECK(single.facts.size() == 22);
    const auto six = replicate_families(single, 6);
    CHECK(six.people.size() == 36);
    CHECK(six.facts.size() == 132);
    CHECK(six.family[35] == 5);
}

TEST_CASE("cross-domain pair counts") {
    const auto single = african_family_template();
    const auto per = same_relation_square_sum(single, 0);
    const auto c = gen_crossdomain(default_topology(), 1);
    CHECK(default_topology().size() == 14);
    CHECK(c.trainIdx.size() == 14 * 2 * per);
    CHECK(c.testIdx.size() == 2 * per);
    CHECK(c.trainIdx.size() == 1344);
    CHECK(c.shape == FigureGroundShape{36, 0, 36, 36, 36});
    const auto s = gen_crossdomain(single_bridge_topology(), 1);
    CHECK(s.trainIdx.size() == 2 * 2 * per);
    CHECK(s.testIdx.size() == c.testIdx.size());
    const auto withIntra = gen_crossdomain(default_topology(), 1, true);
    CHECK(withIntra.trainIdx.size() == 1344 + 6 * per);
    for (auto i : c.testIdx) {
        const auto& m = std::get<FamilyMeta>(c.meta[i]);
        const auto a = m.sourceFigure / 6, b = m.targetFigure / 6;
        CHECK(((a == 0 && b == 5) || (a == 5 && b == 0)));
    }
}

TEST_CASE("people encoding") {
    const std::size_t who[] = {1, 4};
    const auto p = encode_people(who, 6);
    CHECK(p == std::vector<double>{0, 1, 0, 0, 1, 0});
    CHECK(decode_people(p) == std::vector<std::size_t>{1, 4});
    const std::size_t bad[] = {6};
    CHECK_THROWS_AS(encode_people(bad, 6), std::out_of_range);
}

TEST_CASE("split is deterministic and disjoint") {
    auto a = gen_oddity(100, 10, Placement::Random, 2);
    auto b = gen_oddity(100, 10, Placement::Random, 2);
    CHECK(a.testIdx == b.testIdx);
    std::set<std::size_t> all(a.trainIdx.begin(), a.trainIdx.end());
    for (auto i : a.testIdx) CHECK(all.insert(i).second);
    CHECK(all.size() == 100);
    split_fraction(a, 0.25, 9);
    CHECK(a.testIdx.size() == 25);
    a.validate();
}

TEST_CASE("corpus file round trip for every domain") {
    const auto set = make_mini_letter_corpus(10, 1);
    auto letters = gen_letterpart(set.train, 2, 1);
    append_letter_tests(letters, set.train.front(), set.test);
    check_same(letters, round_trip(letters));
    check_same(gen_varpos(set.train, set.train.front(), 1), round_trip(gen_varpos(set.train, set.train.front(), 1)));
    const auto twist = gen_twist(60, 6, true, 1);
    check_same(twist, round_trip(twist));
    const auto rot = gen_rotation(1, 20, 100);
    check_same(rot, round_trip(rot));
    const auto fam = gen_crossdomain(single_bridge_topology(), 1);
    check_same(fam, round_trip(fam));
}

TEST_CASE("corpus reader rejects a tampered answer") {
    const auto c = gen_hinton_analogies(8, 1);
    std::stringstream ss;
    write_corpus(ss, c);
    auto text = ss.str();
    const auto at = text.find("ANSWER ");
    REQUIRE(at != std::string::npos);
    const auto eol = text.find('\n', at);
    text.replace(at, eol - at, "ANSWER 0 0");
    std::istringstream in(text);
    CHECK_THROWS(read_corpus(in));
    std::istringstream junk("CORPUS letter x");
    CHECK_THROWS(read_corpus(junk));
}

TEST_CASE("corpus header") {
    const auto c = gen_rotation(1, 10, 40);
    std::stringstream ss;
    write_corpus(ss, c);
    std::string first;
    std::getline(ss, first);
    CHECK(first == "CORPUS geometric 1 40 30 10");
}

#include "analogator/corpus.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "analogator/util.hpp"

namespace analogator {

const char* domain_name(Domain d) {
    switch (d) {
        case Domain::Letter: return "letter";
        case Domain::Geometric: return "geometric";
        case Domain::Family: return "family";
    }
    return "?";
}

Domain parse_domain(const std::string& name) {
    if (name == "letter") return Domain::Letter;
    if (name == "geometric") return Domain::Geometric;
    if (name == "family") return Domain::Family;
    throw std::invalid_argument("unknown domain '" + name + "'");
}

namespace {

std::vector<double> to_real(const std::vector<std::uint8_t>& bits) { return {bits.begin(), bits.end()}; }

const Bitmap& role_mask(const GridLetter& l, LetterRole role) { return role == LetterRole::Brim ? l.brim : l.body; }
const Bitmap& other_mask(const GridLetter& l, LetterRole role) { return role == LetterRole::Brim ? l.body : l.brim; }

std::vector<std::uint8_t> others_occupancy(const std::vector<SceneObject>& objs, std::size_t skip) {
    std::vector<SceneObject> rest;
    for (std::size_t i = 0; i < objs.size(); ++i)
        if (i != skip) rest.push_back(objs[i]);
    return occupancy(rest, kGeoGrid, kGeoGrid);
}

std::vector<double> one_hot(std::size_t i, std::size_t n) {
    const std::size_t idx[1] = {i};
    return encode_people(idx, n);
}

std::vector<double> two_hot(std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t idx[2] = {a, b};
    return encode_people(idx, n);
}

AnalogyPair build(const LetterMeta& m) {
    AnalogyPair p;
    p.source = to_real(m.source.pixels);
    p.sourceFigureMask = to_real(role_mask(m.source, m.role));
    p.sourceFigure = p.sourceFigureMask;
    p.sourceGround = to_real(other_mask(m.source, m.role));
    p.target = to_real(m.target.pixels);
    p.targetFigure = to_real(role_mask(m.target, m.role));
    p.targetGround = to_real(other_mask(m.target, m.role));
    return p;
}

AnalogyPair build(const GeometricMeta& m) {
    if (m.figure >= m.source.size() || m.answer >= m.target.size()) {
        throw std::invalid_argument("geometric problem: figure or answer index out of range");
    }
    const auto attrs = Attributes::for_channels(static_cast<std::size_t>(m.channels));
    AnalogyPair p;
    p.source = encode_scene(m.source, kGeoGrid, kGeoGrid, attrs).values;
    p.sourceFigureMask = to_real(m.source[m.figure].where_mask(kGeoGrid, kGeoGrid));
    p.sourceFigure = p.sourceFigureMask;
    p.sourceGround = to_real(others_occupancy(m.source, m.figure));
    p.target = encode_scene(m.target, kGeoGrid, kGeoGrid, attrs).values;
    p.targetFigure = to_real(m.target[m.answer].where_mask(kGeoGrid, kGeoGrid));
    p.targetGround = to_real(others_occupancy(m.target, m.answer));
    if (m.hints) {
        if (!m.hasTransform) throw std::invalid_argument("hint units need a transform");
        p.hints = hint_units(m.transform);
    }
    return p;
}

AnalogyPair build(const FamilyMeta& m) {
    if (m.sourceFigure == m.sourceGround || m.targetFigure == m.targetGround) {
        throw std::invalid_argument("family fact relates a person to themself");
    }
    AnalogyPair p;
    p.source = two_hot(m.sourceFigure, m.sourceGround, m.width);
    p.sourceFigureMask = one_hot(m.sourceFigure, m.width);
    p.sourceFigure = p.sourceFigureMask;
    p.sourceGround = one_hot(m.sourceGround, m.width);
    p.target = two_hot(m.targetFigure, m.targetGround, m.width);
    p.targetFigure = one_hot(m.targetFigure, m.width);
    p.targetGround = one_hot(m.targetGround, m.width);
    return p;
}

Domain domain_of(const PairMeta& m) {
    return std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, LetterMeta>) return Domain::Letter;
            else if constexpr (std::is_same_v<T, GeometricMeta>) return Domain::Geometric;
            else return Domain::Family;
        },
        m);
}

}  // namespace

AnalogyPair build_pair(const PairMeta& meta) {
    return std::visit([](const auto& m) { return build(m); }, meta);
}

FigureGroundShape shape_of(const PairMeta& meta) {
    return std::visit(
        [](const auto& m) -> FigureGroundShape {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LetterMeta>) {
                return {kLetterPixels, 0, kLetterPixels, kLetterPixels, kLetterPixels};
            } else if constexpr (std::is_same_v<T, GeometricMeta>) {
                const std::size_t cells = kGeoGrid * kGeoGrid;
                return {cells * static_cast<std::size_t>(m.channels), m.hints ? 8u : 0u, cells, cells, cells};
            } else {
                return {m.width, 0, m.width, m.width, m.width};
            }
        },
        meta);
}

std::vector<double> hint_units(GridTransform t) {
    std::vector<double> h(8, 0.0);
    h[static_cast<std::size_t>(((t.rotation % 4) + 4) % 4)] = 1.0;
    switch (t.flip) {
        case Flip::Horizontal: h[4] = 1.0; break;
        case Flip::Vertical: h[5] = 1.0; break;
        case Flip::Both: h[6] = 1.0; break;
        case Flip::None: h[7] = 1.0; break;
    }
    return h;
}

void Corpus::add(PairMeta m) {
    const auto d = domain_of(m);
    const auto s = shape_of(m);
    if (pairs.empty() && meta.empty()) {
        domain = d;
        shape = s;
    } else if (d != domain || !(s == shape)) {
        throw std::invalid_argument("corpus problems must share one domain and bank shape");
    }
    auto p = build_pair(m);
    check_pair(p, shape);
    trainIdx.push_back(pairs.size());
    pairs.push_back(std::move(p));
    meta.push_back(std::move(m));
}

void Corpus::add_test(PairMeta m) {
    add(std::move(m));
    trainIdx.pop_back();
    testIdx.push_back(pairs.size() - 1);
}

void Corpus::validate() const {
    if (meta.size() != pairs.size()) throw std::logic_error("corpus metadata and patterns disagree");
    std::vector<int> seen(pairs.size(), 0);
    for (auto i : trainIdx) {
        if (i >= seen.size() || seen[i]++) throw std::logic_error("bad or repeated training index");
    }
    for (auto i : testIdx) {
        if (i >= seen.size() || seen[i]++) throw std::logic_error("bad or repeated test index");
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::logic_error("split does not cover corpus");
}

std::uint64_t Corpus::hash() const {
    std::ostringstream os;
    write_corpus(os, *this);
    return fnv1a(os.str());
}

// ---------------------------------------------------------------- letters

Corpus gen_letterpart(std::span<const GridLetter> letters, std::size_t targetsPerSource, std::uint64_t seed) {
    if (letters.empty()) throw std::invalid_argument("gen_letterpart: no letters");
    Corpus c;
    c.seed = seed;
    Rng rng(mix_seed(seed, 0x1e77e5ULL));
    for (LetterRole role : {LetterRole::Brim, LetterRole::Body}) {
        for (std::size_t s = 0; s < letters.size(); ++s) {
            std::vector<std::size_t> pool;
            for (std::size_t t = 0; t < letters.size(); ++t)
                if (t != s) pool.push_back(t);
            if (pool.empty()) pool.push_back(s);
            std::vector<std::size_t> chosen;
            while (chosen.size() < targetsPerSource) {
                auto round = pool;
                rng.shuffle(round);
                for (auto t : round) {
                    if (chosen.size() == targetsPerSource) break;
                    chosen.push_back(t);
                }
            }
            for (auto t : chosen) c.add(LetterMeta{role, 0, letters[s], letters[t]});
        }
    }
    c.provenanceNote = "letter-part pairs: " + std::to_string(letters.size()) + " letters x " +
                       std::to_string(targetsPerSource) + " targets x 2 roles";
    return c;
}

void append_letter_tests(Corpus& c, const GridLetter& prototype, std::span<const GridLetter> testLetters) {
    for (LetterRole role : {LetterRole::Brim, LetterRole::Body})
        for (const auto& t : testLetters) c.add_test(LetterMeta{role, 0, prototype, t});
}

Corpus gen_varpos(std::span<const GridLetter> letters, const GridLetter& prototype, std::uint64_t seed) {
    Corpus c;
    c.seed = seed;
    for (LetterRole role : {LetterRole::Brim, LetterRole::Body})
        for (const auto& l : letters)
            for (int shift = -kMaxShift; shift <= kMaxShift; ++shift)
                c.add(LetterMeta{role, shift, prototype, shift_vertical(l, shift)});
    c.provenanceNote = "variable-position pairs: " + std::to_string(letters.size()) + " letters x 9 shifts x 2 roles";
    return c;
}

// -------------------------------------------------------------- geometric

namespace {

std::array<std::size_t, 2> other_two(std::size_t v) {
    std::array<std::size_t, 2> out{};
    std::size_t k = 0;
    for (std::size_t x = 0; x < 3; ++x)
        if (x != v) out[k++] = x;
    return out;
}

SceneObject corner_object(int corner, std::size_t shape, std::size_t color, const Attributes& attrs) {
    const auto [r, c] = kCornerAnchors[corner];
    return make_object(r, c, shape, color, attrs);
}

struct OdditySource {
    std::vector<SceneObject> objects;
    std::size_t odd = 0;
    int dimension = 0;  // 0 shape, 1 color
    std::string key;
};

struct OddityTarget {
    std::vector<SceneObject> objects;
    std::size_t shapeOdd = 0;
    std::size_t colorOdd = 0;
    std::string key;
};

using Anchors = std::array<std::pair<int, int>, 3>;

Anchors corner_anchors(int empty) {
    Anchors a{};
    for (int k = 0; k < 3; ++k) a[k] = kCornerAnchors[(empty + 1 + k) % 4];
    return a;
}

Anchors random_anchors(Rng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Anchors a{};
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
            a[k] = {static_cast<int>(rng.below(kGeoGrid - 1)), static_cast<int>(rng.below(kGeoGrid - 1))};
            for (int j = 0; j < k; ++j) {
                if (std::abs(a[k].first - a[j].first) < 2 && std::abs(a[k].second - a[j].second) < 2) ok = false;
            }
        }
        if (ok) return a;
    }
    throw std::runtime_error("could not place three objects without overlap");
}

std::string anchors_key(const Anchors& a) {
    std::string k;
    for (const auto& [r, c] : a) k += std::to_string(r) + "," + std::to_string(c) + ";";
    return k;
}

OdditySource make_source(const Anchors& at, std::size_t shape, std::size_t color, std::size_t odd, int dim,
                         std::size_t alt, const Attributes& attrs) {
    OdditySource s;
    s.odd = odd;
    s.dimension = dim;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t sh = shape, co = color;
        if (k == odd) (dim == 0 ? sh : co) = other_two(dim == 0 ? shape : color)[alt];
        s.objects.push_back(make_object(at[k].first, at[k].second, sh, co, attrs));
    }
    s.key = anchors_key(at) + std::to_string(shape) + std::to_string(color) + std::to_string(odd) +
            std::to_string(dim) + std::to_string(alt);
    return s;
}

OddityTarget make_target(const Anchors& at, std::size_t shape, std::size_t color, std::size_t shapeOdd,
                         std::size_t colorOdd, std::size_t shapeAlt, std::size_t colorAlt, const Attributes& attrs) {
    OddityTarget t;
    t.shapeOdd = shapeOdd;
    t.colorOdd = colorOdd;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t sh = k == shapeOdd ? other_two(shape)[shapeAlt] : shape;
        const std::size_t co = k == colorOdd ? other_two(color)[colorAlt] : color;
        t.objects.push_back(make_object(at[k].first, at[k].second, sh, co, attrs));
    }
    t.key = anchors_key(at) + std::to_string(shape) + std::to_string(color) + std::to_string(shapeOdd) +
            std::to_string(colorOdd) + std::to_string(shapeAlt) + std::to_string(colorAlt);
    return t;
}

OdditySource random_source(Rng& rng, const Anchors& at, const Attributes& attrs) {
    const auto shape = rng.below(3), color = rng.below(3), odd = rng.below(3);
    const int dim = static_cast<int>(rng.below(2));
    return make_source(at, shape, color, odd, dim, rng.below(2), attrs);
}

OddityTarget random_target(Rng& rng, const Anchors& at, const Attributes& attrs) {
    const auto shape = rng.below(3), color = rng.below(3), shapeOdd = rng.below(3);
    const auto rest = other_two(shapeOdd);
    const auto colorOdd = rest[rng.below(2)];
    const auto shapeAlt = rng.below(2);
    return make_target(at, shape, color, shapeOdd, colorOdd, shapeAlt, rng.below(2), attrs);
}

std::string objects_key(const std::vector<SceneObject>& objs) {
    std::string k;
    for (const auto& o : objs) {
        k += std::to_string(o.row) + "," + std::to_string(o.col) + ":";
        for (auto b : o.what) k += static_cast<char>('0' + b);
        k += ";";
    }
    return k;
}

}  // namespace

std::vector<GeometricMeta> enumerate_rotation() {
    const auto attrs = Attributes::rgb();
    std::vector<GeometricMeta> out;
    for (int empty = 0; empty < 4; ++empty)
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t fig = 0; fig < 3; ++fig)
                    for (int rot = 0; rot < 4; ++rot)
                        for (std::size_t ts = 0; ts < 3; ++ts)
                            for (std::size_t tc = 0; tc < 3; ++tc) {
                                GeometricMeta m;
                                for (int k = 0; k < 3; ++k) m.source.push_back(corner_object((empty + 1 + k) % 4, s, c, attrs));
                                for (const auto& o : m.source) {
                                    auto t = transform_object(o, kGeoGrid, {Flip::None, rot});
                                    t.what = attrs.what(ts, tc);
                                    m.target.push_back(std::move(t));
                                }
                                m.figure = fig;
                                m.answer = fig;
                                out.push_back(std::move(m));
                            }
    return out;
}

Corpus gen_rotation(std::uint64_t seed, std::size_t testCount, std::size_t samples) {
    auto all = enumerate_rotation();
    Corpus c;
    c.seed = seed;
    Rng rng(mix_seed(seed, 0x2a2a2aULL));
    if (samples == 0 || samples == all.size()) {
        for (auto& m : all) c.add(std::move(m));
    } else if (samples < all.size()) {
        rng.shuffle(all);
        for (std::size_t i = 0; i < samples; ++i) c.add(std::move(all[i]));
    } else {
        for (std::size_t i = 0; i < samples; ++i) c.add(all[rng.below(all.size())]);
    }
    c.provenanceNote = "rotation problems: " + std::to_string(all.size()) +
                       " distinct (4 empty corners x 9 types x 3 figures x 4 rotations x 9 target types); "
                       "reference total 46656 not reproduced by this construction";
    split(c, testCount, seed);
    return c;
}

std::size_t oddity_source_count_per_dimension() {
    const auto attrs = Attributes::rgb();
    std::set<std::string> seen;
    for (int e = 0; e < 4; ++e)
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t odd = 0; odd < 3; ++odd)
                    for (std::size_t alt = 0; alt < 2; ++alt)
                        seen.insert(objects_key(make_source(corner_anchors(e), s, c, odd, 0, alt, attrs).objects));
    return seen.size();
}

std::size_t oddity_target_count() {
    const auto attrs = Attributes::rgb();
    std::set<std::string> seen;
    for (int e = 0; e < 4; ++e)
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t so = 0; so < 3; ++so)
                    for (std::size_t co : other_two(so))
                        for (std::size_t sa = 0; sa < 2; ++sa)
                            for (std::size_t ca = 0; ca < 2; ++ca)
                                seen.insert(objects_key(make_target(corner_anchors(e), s, c, so, co, sa, ca, attrs).objects));
    return seen.size();
}

Corpus gen_oddity(std::size_t samples, std::size_t testHoldout, Placement positions, std::uint64_t seed) {
    const auto attrs = Attributes::rgb();
    Corpus c;
    c.seed = seed;
    Rng rng(mix_seed(seed, 0x0dd17ULL));
    std::unordered_set<std::string> seen;
    std::size_t misses = 0;
    while (c.size() < samples) {
        const auto srcAt = positions == Placement::Corners ? corner_anchors(static_cast<int>(rng.below(4))) : random_anchors(rng);
        const auto src = random_source(rng, srcAt, attrs);
        const auto tgtAt = positions == Placement::Corners ? corner_anchors(static_cast<int>(rng.below(4))) : random_anchors(rng);
        const auto tgt = random_target(rng, tgtAt, attrs);
        if (!seen.insert(src.key + "|" + tgt.key).second) {
            if (++misses > 100 * samples + 1000) throw std::invalid_argument("gen_oddity: too few distinct problems");
            continue;
        }
        GeometricMeta m;
        m.source = src.objects;
        m.figure = src.odd;
        m.target = tgt.objects;
        m.answer = src.dimension == 0 ? tgt.shapeOdd : tgt.colorOdd;
        c.add(std::move(m));
    }
    c.provenanceNote = std::string("oddity problems, ") + (positions == Placement::Corners ? "corner" : "random") +
                       " placement; corner enumeration gives " + std::to_string(2 * oddity_source_count_per_dimension()) +
                       " sources and " + std::to_string(oddity_target_count()) +
                       " targets (reference target count 1080 not reproduced)";
    split(c, testHoldout, seed);
    return c;
}

Corpus gen_twist(std::size_t samples, std::size_t testHoldout, bool hints, std::uint64_t seed) {
    const auto attrs = Attributes::rgb();
    Corpus c;
    c.seed = seed;
    Rng rng(mix_seed(seed, 0x7a157ULL));
    std::unordered_set<std::string> seen;
    std::size_t misses = 0;
    while (c.size() < samples) {
        const int empty = static_cast<int>(rng.below(4));
        const auto src = random_source(rng, corner_anchors(empty), attrs);
        const auto figure = rng.below(3);
        GridTransform t{static_cast<Flip>(rng.below(4)), static_cast<int>(rng.below(4))};
        std::vector<std::size_t> shapePerm{0, 1, 2}, colorPerm{0, 1, 2};
        rng.shuffle(shapePerm);
        rng.shuffle(colorPerm);
        std::string key = src.key + std::to_string(figure) + flip_name(t.flip) + std::to_string(t.rotation);
        for (auto v : shapePerm) key += std::to_string(v);
        for (auto v : colorPerm) key += std::to_string(v);
        if (!seen.insert(key).second) {
            if (++misses > 100 * samples + 1000) throw std::invalid_argument("gen_twist: too few distinct problems");
            continue;
        }
        GeometricMeta m;
        m.source = src.objects;
        m.figure = figure;
        for (const auto& o : src.objects) {
            auto moved = transform_object(o, kGeoGrid, t);
            moved.what = attrs.what(shapePerm[o.shape(attrs)], colorPerm[o.color(attrs)]);
            m.target.push_back(std::move(moved));
        }
        m.answer = figure;
        m.hasTransform = true;
        m.transform = t;
        m.hints = hints;
        c.add(std::move(m));
    }
    c.provenanceNote = std::string("transformed oddity problems (flip then clockwise rotation, attribute relabeling)") +
                       (hints ? " with 8 hint units" : " without hint units");
    split(c, testHoldout, seed);
    return c;
}

// ----------------------------------------------------------------- family

std::vector<FamilyMeta> gen_family_pairs(const FamilySet& set, std::size_t familyA, std::size_t familyB,
                                         std::size_t width) {
    std::vector<FamilyMeta> out;
    for (const auto& a : set.facts) {
        if (set.family.at(a.figure) != familyA) continue;
        for (const auto& b : set.facts) {
            if (set.family.at(b.figure) != familyB || b.relation != a.relation) continue;
            out.push_back({width, a.relation, a.figure, a.ground, b.figure, b.ground});
        }
    }
    return out;
}

Corpus gen_hinton_analogies(std::size_t testCount, std::uint64_t seed) {
    const auto set = hinton_trees();
    Corpus c;
    c.seed = seed;
    std::vector<std::size_t> cross;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (auto& m : gen_family_pairs(set, a, b, set.people.size())) {
                if (a != b) cross.push_back(c.size());
                c.add(m);
            }
    if (testCount > cross.size()) throw std::invalid_argument("gen_hinton_analogies: test set too large");
    Rng rng(mix_seed(seed, 0x3a3aULL));
    rng.shuffle(cross);
    std::vector<std::size_t> test(cross.begin(), cross.begin() + static_cast<std::ptrdiff_t>(testCount));
    std::sort(test.begin(), test.end());
    c.testIdx = test;
    c.trainIdx.clear();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!std::binary_search(test.begin(), test.end(), i)) c.trainIdx.push_back(i);
    c.provenanceNote = "same-relation pairs over the pooled facts of both trees (" + std::to_string(set.facts.size()) +
                       " facts, " + std::to_string(c.size()) + " pairs); test pairs drawn from cross-tree pairs";
    return c;
}

FamilyTopology default_topology() {
    FamilyTopology t;
    for (std::size_t m = 1; m <= 4; ++m) t.emplace_back(0, m);
    for (std::size_t m = 1; m <= 4; ++m) t.emplace_back(5, m);
    for (std::size_t a = 1; a <= 4; ++a)
        for (std::size_t b = a + 1; b <= 4; ++b) t.emplace_back(a, b);
    return t;
}

FamilyTopology single_bridge_topology() { return {{0, 1}, {5, 1}}; }

Corpus gen_crossdomain(const FamilyTopology& topology, std::uint64_t seed, bool includeIntraFamily) {
    const auto set = replicate_families(african_family_template(), 6);
    const auto width = set.people.size();
    Corpus c;
    c.seed = seed;
    std::set<std::pair<std::size_t, std::size_t>> links;
    for (auto [a, b] : topology) {
        if (a >= 6 || b >= 6 || a == b) throw std::invalid_argument("gen_crossdomain: bad family link");
        if ((a == 0 && b == 5) || (a == 5 && b == 0)) throw std::invalid_argument("families 1 and 6 must stay unlinked");
        links.insert({std::min(a, b), std::max(a, b)});
    }
    for (auto [a, b] : links) {
        for (auto& m : gen_family_pairs(set, a, b, width)) c.add(m);
        for (auto& m : gen_family_pairs(set, b, a, width)) c.add(m);
    }
    if (includeIntraFamily)
        for (std::size_t f = 0; f < 6; ++f)
            for (auto& m : gen_family_pairs(set, f, f, width)) c.add(m);
    const auto nTrain = c.size();
    for (auto& m : gen_family_pairs(set, 0, 5, width)) c.add_test(m);
    for (auto& m : gen_family_pairs(set, 5, 0, width)) c.add_test(m);
    c.provenanceNote = "six isomorphic families, " + std::to_string(links.size()) + " links: " +
                       std::to_string(nTrain) + " training pairs, " + std::to_string(c.testIdx.size()) +
                       " test pairs between families 1 and 6 (reference 1768/104)";
    return c;
}

void split(Corpus& c, std::size_t testCount, std::uint64_t seed) {
    if (testCount > c.size()) throw std::invalid_argument("split: test count exceeds corpus size");
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(seed, 0x5b117ULL));
    rng.shuffle(order);
    c.testIdx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(testCount));
    c.trainIdx.assign(order.begin() + static_cast<std::ptrdiff_t>(testCount), order.end());
    std::sort(c.testIdx.begin(), c.testIdx.end());
    std::sort(c.trainIdx.begin(), c.trainIdx.end());
}

void split_fraction(Corpus& c, double testFraction, std::uint64_t seed) {
    if (!(testFraction >= 0.0 && testFraction <= 1.0)) throw std::invalid_argument("split: fraction outside [0, 1]");
    split(c, static_cast<std::size_t>(std::llround(testFraction * static_cast<double>(c.size()))), seed);
}

// ------------------------------------------------------------------- I/O

namespace {

void write_raster(std::ostream& os, std::span<const double> v) {
    for (int r = 0; r < kLetterRows; ++r) {
        for (int col = 0; col < kLetterCols; ++col) os << (v[static_cast<std::size_t>(r) * kLetterCols + col] != 0.0 ? '#' : '.');
        os << '\n';
    }
}

std::string next_line(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("corpus: unexpected end of input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> expect_tokens(std::istream& is, const std::string& keyword, std::size_t count) {
    const auto line = next_line(is);
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] != keyword || tok.size() != count) {
        throw std::runtime_error("corpus: expected '" + keyword + "', got '" + line + "'");
    }
    return tok;
}

std::size_t to_size(const std::string& s) {
    const auto v = parse_integer(s);
    if (v < 0) throw std::runtime_error("corpus: negative count '" + s + "'");
    return static_cast<std::size_t>(v);
}

Flip parse_flip(const std::string& s) {
    for (Flip f : {Flip::None, Flip::Horizontal, Flip::Vertical, Flip::Both})
        if (s == flip_name(f)) return f;
    throw std::runtime_error("corpus: unknown flip '" + s + "'");
}

void write_record(std::ostream& os, const LetterMeta& m, const AnalogyPair& p) {
    os << "ROLE " << (m.role == LetterRole::Brim ? "brim" : "body") << '\n';
    os << "SHIFT " << m.shift << '\n';
    os << "SOURCE\n";
    write_letter(os, m.source);
    os << "TARGET\n";
    write_letter(os, m.target);
    os << "ANSWER\n";
    write_raster(os, p.targetFigure);
}

void write_record(std::ostream& os, const GeometricMeta& m, const AnalogyPair&) {
    const auto attrs = Attributes::for_channels(static_cast<std::size_t>(m.channels));
    os << "SOURCE\n";
    write_scene(os, encode_scene(m.source, kGeoGrid, kGeoGrid, attrs));
    os << "FIGURE " << m.figure << '\n';
    os << "TARGET\n";
    write_scene(os, encode_scene(m.target, kGeoGrid, kGeoGrid, attrs));
    if (m.hasTransform) os << "TRANSFORM " << flip_name(m.transform.flip) << ' ' << m.transform.rotation << '\n';
    os << "HINTS " << (m.hints ? 1 : 0) << '\n';
    os << "ANSWER " << m.answer << '\n';
}

void write_record(std::ostream& os, const FamilyMeta& m, const AnalogyPair&) {
    os << "WIDTH " << m.width << '\n';
    os << "RELATION " << m.relation << '\n';
    os << "SOURCE " << m.sourceFigure << ' ' << m.sourceGround << '\n';
    os << "TARGET " << m.targetFigure << ' ' << m.targetGround << '\n';
    os << "ANSWER " << m.targetFigure << ' ' << m.targetGround << '\n';
}

PairMeta read_record(std::istream& is, Domain d) {
    if (d == Domain::Letter) {
        LetterMeta m;
        const auto role = expect_tokens(is, "ROLE", 2)[1];
        if (role != "brim" && role != "body") throw std::runtime_error("corpus: bad role '" + role + "'");
        m.role = role == "brim" ? LetterRole::Brim : LetterRole::Body;
        m.shift = static_cast<int>(parse_integer(expect_tokens(is, "SHIFT", 2)[1]));
        expect_tokens(is, "SOURCE", 1);
        m.source = read_letter(is);
        expect_tokens(is, "TARGET", 1);
        m.target = read_letter(is);
        expect_tokens(is, "ANSWER", 1);
        std::vector<double> answer;
        for (int r = 0; r < kLetterRows; ++r) {
            const auto row = next_line(is);
            if (row.size() != static_cast<std::size_t>(kLetterCols)) throw std::runtime_error("corpus: bad answer row");
            for (char ch : row) {
                if (ch != '.' && ch != '#') throw std::runtime_error("corpus: bad answer pixel");
                answer.push_back(ch == '#' ? 1.0 : 0.0);
            }
        }
        if (build_pair(m).targetFigure != answer) throw std::runtime_error("corpus: stored answer disagrees with letter");
        return m;
    }
    if (d == Domain::Geometric) {
        GeometricMeta m;
        expect_tokens(is, "SOURCE", 1);
        auto src = read_scene(is);
        m.channels = src.channels;
        m.source = src.objects;
        m.figure = to_size(expect_tokens(is, "FIGURE", 2)[1]);
        expect_tokens(is, "TARGET", 1);
        auto tgt = read_scene(is);
        if (tgt.channels != m.channels) throw std::runtime_error("corpus: source and target alphabets differ");
        m.target = tgt.objects;
        auto line = next_line(is);
        auto tok = split_ws(line);
        if (!tok.empty() && tok[0] == "TRANSFORM") {
            if (tok.size() != 3) throw std::runtime_error("corpus: bad transform line '" + line + "'");
            m.hasTransform = true;
            m.transform = {parse_flip(tok[1]), static_cast<int>(parse_integer(tok[2]))};
            line = next_line(is);
            tok = split_ws(line);
        }
        if (tok.size() != 2 || tok[0] != "HINTS") throw std::runtime_error("corpus: expected HINTS, got '" + line + "'");
        m.hints = parse_integer(tok[1]) != 0;
        m.answer = to_size(expect_tokens(is, "ANSWER", 2)[1]);
        return m;
    }
    FamilyMeta m;
    m.width = to_size(expect_tokens(is, "WIDTH", 2)[1]);
    m.relation = to_size(expect_tokens(is, "RELATION", 2)[1]);
    auto s = expect_tokens(is, "SOURCE", 3);
    auto t = expect_tokens(is, "TARGET", 3);
    auto a = expect_tokens(is, "ANSWER", 3);
    m.sourceFigure = to_size(s[1]);
    m.sourceGround = to_size(s[2]);
    m.targetFigure = to_size(t[1]);
    m.targetGround = to_size(t[2]);
    if (to_size(a[1]) != m.targetFigure || to_size(a[2]) != m.targetGround) {
        throw std::runtime_error("corpus: stored answer disagrees with target fact");
    }
    return m;
}

}  // namespace

void write_corpus(std::ostream& os, const Corpus& c, const std::string& comment) {
    os << "CORPUS " << domain_name(c.domain) << ' ' << c.seed << ' ' << c.size() << ' ' << c.trainIdx.size() << ' '
       << c.testIdx.size() << '\n';
    if (!comment.empty()) os << "# " << comment << '\n';
    os << "NOTE " << c.provenanceNote << '\n';
    os << "SHAPE " << c.shape.scene << ' ' << c.shape.hints << ' ' << c.shape.context << ' ' << c.shape.figure << ' '
       << c.shape.ground << '\n';
    std::vector<char> isTest(c.size(), 0);
    for (auto i : c.testIdx) isTest.at(i) = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        os << "PAIR " << i << ' ' << (isTest[i] ? "test" : "train") << '\n';
        std::visit([&](const auto& m) { write_record(os, m, c.pairs[i]); }, c.meta[i]);
        os << "END\n";
    }
}

Corpus read_corpus(std::istream& is) {
    const auto head = expect_tokens(is, "CORPUS", 6);
    Corpus c;
    const Domain domain = parse_domain(head[1]);
    c.domain = domain;
    c.seed = static_cast<std::uint64_t>(std::stoull(head[2]));
    const auto n = to_size(head[3]);
    const auto nTrain = to_size(head[4]);
    const auto nTest = to_size(head[5]);
    std::string line = next_line(is);
    while (!line.empty() && line[0] == '#') line = next_line(is);
    if (line.rfind("NOTE", 0) != 0) throw std::runtime_error("corpus: expected NOTE line");
    c.provenanceNote = line.size() > 5 ? line.substr(5) : "";
    const auto shape = expect_tokens(is, "SHAPE", 6);
    const FigureGroundShape declared{to_size(shape[1]), to_size(shape[2]), to_size(shape[3]), to_size(shape[4]),
                                     to_size(shape[5])};
    for (std::size_t i = 0; i < n; ++i) {
        const auto rec = expect_tokens(is, "PAIR", 3);
        if (to_size(rec[1]) != i) throw std::runtime_error("corpus: pair records out of order");
        if (rec[2] != "train" && rec[2] != "test") throw std::runtime_error("corpus: bad split tag '" + rec[2] + "'");
        auto m = read_record(is, domain);
        try {
            if (rec[2] == "test") {
                c.add_test(std::move(m));
            } else {
                c.add(std::move(m));
            }
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("corpus: ") + e.what());
        }
        expect_tokens(is, "END", 1);
    }
    if (n > 0 && c.domain != domain) throw std::runtime_error("corpus: records disagree with the header domain");
    c.domain = domain;
    if (n > 0 && !(c.shape == declared)) throw std::runtime_error("corpus: SHAPE line disagrees with records");
    if (n == 0) c.shape = declared;
    if (c.trainIdx.size() != nTrain || c.testIdx.size() != nTest) throw std::runtime_error("corpus: split counts disagree");
    return c;
}

}  // namespace analogator

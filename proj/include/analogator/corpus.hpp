#pragma once

// Corpus generators, splits and the corpus text format for the letter,
// geometric and family domains.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "analogator/family.hpp"
#include "analogator/figure_ground.hpp"
#include "analogator/letters.hpp"
#include "analogator/scene.hpp"

namespace analogator {

enum class Domain { Letter, Geometric, Family };

const char* domain_name(Domain d);
Domain parse_domain(const std::string& name);  // throws std::invalid_argument

enum class LetterRole { Brim, Body };

struct LetterMeta {
    LetterRole role = LetterRole::Brim;
    int shift = 0;  // vertical shift already applied to `target`
    GridLetter source;
    GridLetter target;
};

struct GeometricMeta {
    int channels = 6;
    std::vector<SceneObject> source;
    std::size_t figure = 0;  // index into source
    std::vector<SceneObject> target;
    std::size_t answer = 0;  // index into target
    bool hasTransform = false;
    GridTransform transform;
    bool hints = false;
};

struct FamilyMeta {
    std::size_t width = 0;
    std::size_t relation = 0;
    std::size_t sourceFigure = 0;
    std::size_t sourceGround = 0;
    std::size_t targetFigure = 0;
    std::size_t targetGround = 0;
};

using PairMeta = std::variant<LetterMeta, GeometricMeta, FamilyMeta>;

/// Network patterns for a problem description.
AnalogyPair build_pair(const PairMeta& meta);
FigureGroundShape shape_of(const PairMeta& meta);

/// Eight hint units: rotation one-hot (0..3 quarter turns) then flip one-hot
/// in the order horizontal, vertical, both, none.
std::vector<double> hint_units(GridTransform t);

struct Corpus {
    Domain domain = Domain::Letter;
    FigureGroundShape shape;
    std::uint64_t seed = 0;
    std::string provenanceNote;
    std::vector<PairMeta> meta;
    std::vector<AnalogyPair> pairs;
    std::vector<std::size_t> trainIdx;
    std::vector<std::size_t> testIdx;

    std::size_t size() const { return pairs.size(); }
    /// Append a problem; it joins the training set. Throws on a shape mismatch.
    void add(PairMeta m);
    void add_test(PairMeta m);
    /// Throws std::logic_error unless train and test are disjoint and cover
    /// every index.
    void validate() const;
    /// FNV-1a of the serialized corpus.
    std::uint64_t hash() const;
};

/// Every letter is a source twice (brim, then body as figure); each time it is
/// paired with `targetsPerSource` random other letters in the same role.
Corpus gen_letterpart(std::span<const GridLetter> letters, std::size_t targetsPerSource, std::uint64_t seed);
/// Adds the prototype-to-test-letter problems (both roles) as the test set.
void append_letter_tests(Corpus& corpus, const GridLetter& prototype, std::span<const GridLetter> testLetters);
/// Prototype source; every letter as a target at the 9 shifts -4..+4, both roles.
Corpus gen_varpos(std::span<const GridLetter> letters, const GridLetter& prototype, std::uint64_t seed);

/// Experiment 2a problems: every (empty corner, type, figure, rotation, target type).
std::vector<GeometricMeta> enumerate_rotation();
/// Full enumeration (or `samples` draws with replacement when larger), then a
/// `testCount` hold-out.
Corpus gen_rotation(std::uint64_t seed, std::size_t testCount, std::size_t samples = 0);

enum class Placement { Corners, Random };

/// Number of distinct oddity sources with one odd dimension fixed (corners).
std::size_t oddity_source_count_per_dimension();
/// Number of distinct oddity targets (corners).
std::size_t oddity_target_count();
/// `samples` distinct oddity problems, `testHoldout` of them held out.
Corpus gen_oddity(std::size_t samples, std::size_t testHoldout, Placement positions, std::uint64_t seed);

/// Transformed-oddity problems; hint units are attached when `hints` is set.
Corpus gen_twist(std::size_t samples, std::size_t testHoldout, bool hints, std::uint64_t seed);

/// Ordered same-relation pairs with the source fact from `familyA` and the
/// target fact from `familyB`.
std::vector<FamilyMeta> gen_family_pairs(const FamilySet& facts, std::size_t familyA, std::size_t familyB,
                                         std::size_t width);

/// Experiment 3a: same-relation pairs over the pooled 104 facts of both trees,
/// `testCount` cross-tree pairs held out.
Corpus gen_hinton_analogies(std::size_t testCount, std::uint64_t seed);

/// Undirected family links (0-based) that contribute training pairs.
using FamilyTopology = std::vector<std::pair<std::size_t, std::size_t>>;
/// Families 0 and 5 each linked to 1..4; 1..4 linked among themselves.
FamilyTopology default_topology();
/// Families 0 and 5 each linked only to family 1.
FamilyTopology single_bridge_topology();

/// Experiment 3b over six copies of the 22-fact family: training pairs on the
/// topology's links (both directions), test pairs between families 0 and 5.
Corpus gen_crossdomain(const FamilyTopology& topology, std::uint64_t seed, bool includeIntraFamily = false);

/// Deterministic re-split holding out `testCount` indices.
void split(Corpus& corpus, std::size_t testCount, std::uint64_t seed);
void split_fraction(Corpus& corpus, double testFraction, std::uint64_t seed);

/// `CORPUS <domain> <seed> <nPairs> <nTrain> <nTest>`, NOTE/SHAPE lines, then
/// one PAIR record per problem closed by END.
void write_corpus(std::ostream& os, const Corpus& corpus, const std::string& comment = {});
/// Throws std::runtime_error on malformed input or a stored ANSWER that
/// disagrees with the rebuilt patterns.
Corpus read_corpus(std::istream& is);

}  // namespace analogator

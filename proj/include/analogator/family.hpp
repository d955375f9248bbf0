#pragma once

// Family-tree fact sets and localist person encodings.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace analogator {

/// "<figure> is the <relation> of <ground>". The relation tag is used only to
/// pair facts; it never reaches a network pattern.
struct FamilyFact {
    std::size_t figure = 0;
    std::size_t ground = 0;
    std::size_t relation = 0;

    bool operator==(const FamilyFact&) const = default;
};

struct FamilySet {
    std::vector<std::string> people;
    std::vector<std::size_t> family;  // family index per person
    std::vector<std::string> relations;
    std::vector<FamilyFact> facts;

    std::size_t family_count() const;
    std::size_t person_index(const std::string& name) const;  // throws std::out_of_range
    std::size_t relation_index(const std::string& name) const;
    std::string sentence(const FamilyFact& f) const;
};

/// The two isomorphic 12-person trees (English 0..11, Italian 12..23) with the
/// 12 relations father, mother, husband, wife, son, daughter, brother, sister,
/// uncle, aunt, nephew, niece. Uncles and aunts include those by marriage;
/// nephews and nieces are listed only against blood uncles and aunts.
FamilySet hinton_trees();

/// The six-person, eleven-relation, 22-fact family.
FamilySet african_family_template();

/// `count` isomorphic copies of a single-family template; copy k occupies
/// person indices [k*n, (k+1)*n) and its names carry the suffix ".k+1".
FamilySet replicate_families(const FamilySet& single, std::size_t count);

/// Binary pattern with ones at the given indices. Throws std::out_of_range
/// for an index >= size.
std::vector<double> encode_people(std::span<const std::size_t> people, std::size_t size);
/// Indices of units >= 0.5, ascending.
std::vector<std::size_t> decode_people(std::span<const double> pattern);

}  // namespace analogator

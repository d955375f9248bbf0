#include "analogator/family.hpp"

#include <algorithm>
#include <stdexcept>

namespace analogator {

std::size_t FamilySet::family_count() const {
    return family.empty() ? 0 : *std::max_element(family.begin(), family.end()) + 1;
}

std::size_t FamilySet::person_index(const std::string& name) const {
    const auto it = std::find(people.begin(), people.end(), name);
    if (it == people.end()) throw std::out_of_range("unknown person '" + name + "'");
    return static_cast<std::size_t>(it - people.begin());
}

std::size_t FamilySet::relation_index(const std::string& name) const {
    const auto it = std::find(relations.begin(), relations.end(), name);
    if (it == relations.end()) throw std::out_of_range("unknown relation '" + name + "'");
    return static_cast<std::size_t>(it - relations.begin());
}

std::string FamilySet::sentence(const FamilyFact& f) const {
    return people.at(f.figure) + " is the " + relations.at(f.relation) + " of " + people.at(f.ground);
}

namespace {

// Both trees share this layout; only the names differ.
//  0 grandfather A, 1 grandmother A, 2 grandfather B, 3 grandmother B,
//  4 son of A (married to 5), 5 his wife,
//  6 daughter of A (married to 7), 7 son of B,
//  8 daughter of B (married to 9), 9 her husband,
//  10 son of 6/7, 11 daughter of 6/7.
constexpr int kFather[12] = {-1, -1, -1, -1, 0, -1, 0, 2, 2, -1, 7, 7};
constexpr int kMother[12] = {-1, -1, -1, -1, 1, -1, 1, 3, 3, -1, 6, 6};
constexpr int kSpouse[12] = {1, 0, 3, 2, 5, 4, 7, 6, 9, 8, -1, -1};
constexpr bool kMale[12] = {true, false, true, false, true, false, false, true, false, true, true, false};

constexpr const char* kEnglish[12] = {"Christopher", "Penelope", "Andrew",   "Christine", "Arthur",  "Margaret",
                                      "Victoria",    "James",    "Jennifer", "Charles",   "Colin",   "Charlotte"};
constexpr const char* kItalian[12] = {"Roberto", "Maria", "Pierro", "Francesca", "Emilio", "Gina",
                                      "Lucia",   "Marco", "Angela", "Tomaso",    "Alphonso", "Sophia"};

bool is_parent(int p, int c) { return kFather[c] == p || kMother[c] == p; }

bool blood_siblings(int a, int b) {
    if (a == b) return false;
    return (kFather[a] >= 0 && kFather[a] == kFather[b]) || (kMother[a] >= 0 && kMother[a] == kMother[b]);
}

// a is a blood sibling of one of c's parents.
bool blood_uncle_or_aunt(int a, int c) {
    for (int p : {kFather[c], kMother[c]})
        if (p >= 0 && blood_siblings(a, p)) return true;
    return false;
}

bool uncle_or_aunt(int a, int c) {
    if (blood_uncle_or_aunt(a, c)) return true;
    return kSpouse[a] >= 0 && blood_uncle_or_aunt(kSpouse[a], c);
}

}  // namespace

FamilySet hinton_trees() {
    FamilySet set;
    set.relations = {"father", "mother", "husband", "wife", "son", "daughter",
                     "brother", "sister", "uncle", "aunt", "nephew", "niece"};
    for (int tree = 0; tree < 2; ++tree)
        for (int i = 0; i < 12; ++i) {
            set.people.emplace_back(tree == 0 ? kEnglish[i] : kItalian[i]);
            set.family.push_back(static_cast<std::size_t>(tree));
        }
    for (int tree = 0; tree < 2; ++tree) {
        const auto base = static_cast<std::size_t>(tree * 12);
        auto add = [&](int fig, int gnd, const char* rel) {
            set.facts.push_back({base + fig, base + gnd, set.relation_index(rel)});
        };
        for (int a = 0; a < 12; ++a)
            for (int b = 0; b < 12; ++b) {
                if (a == b) continue;
                const bool m = kMale[a];
                if (is_parent(a, b)) add(a, b, m ? "father" : "mother");
                if (kSpouse[a] == b) add(a, b, m ? "husband" : "wife");
                if (is_parent(b, a)) add(a, b, m ? "son" : "daughter");
                if (blood_siblings(a, b)) add(a, b, m ? "brother" : "sister");
                if (uncle_or_aunt(a, b)) add(a, b, m ? "uncle" : "aunt");
                if (blood_uncle_or_aunt(b, a)) add(a, b, m ? "nephew" : "niece");
            }
    }
    return set;
}

FamilySet african_family_template() {
    FamilySet set;
    set.people = {"Bello", "Matope", "Neema", "Hadiya", "Kissa", "Kwaku"};
    set.family.assign(6, 0);
    set.relations = {"wife",   "husband", "son",           "daughter",     "mother",         "father",
                     "brother", "sister", "parent-in-law", "child-in-law", "sibling-in-law"};
    const char* facts[22][3] = {
        {"Bello", "son", "Matope"},           {"Bello", "son", "Neema"},
        {"Hadiya", "daughter", "Matope"},     {"Hadiya", "daughter", "Neema"},
        {"Matope", "father", "Bello"},        {"Matope", "father", "Hadiya"},
        {"Neema", "mother", "Bello"},         {"Neema", "mother", "Hadiya"},
        {"Bello", "brother", "Hadiya"},       {"Hadiya", "sister", "Bello"},
        {"Kissa", "wife", "Bello"},           {"Neema", "wife", "Matope"},
        {"Matope", "husband", "Neema"},       {"Bello", "husband", "Kissa"},
        {"Hadiya", "wife", "Kwaku"},          {"Kwaku", "husband", "Hadiya"},
        {"Matope", "parent-in-law", "Kissa"}, {"Kissa", "child-in-law", "Matope"},
        {"Neema", "parent-in-law", "Kwaku"},  {"Kwaku", "child-in-law", "Neema"},
        {"Kissa", "sibling-in-law", "Kwaku"}, {"Kwaku", "sibling-in-law", "Kissa"},
    };
    for (const auto& f : facts) {
        set.facts.push_back({set.person_index(f[0]), set.person_index(f[2]), set.relation_index(f[1])});
    }
    return set;
}

FamilySet replicate_families(const FamilySet& single, std::size_t count) {
    if (single.family_count() != 1) throw std::invalid_argument("replicate_families: template must hold one family");
    FamilySet out;
    out.relations = single.relations;
    const auto n = single.people.size();
    for (std::size_t k = 0; k < count; ++k) {
        for (const auto& name : single.people) {
            out.people.push_back(name + "." + std::to_string(k + 1));
            out.family.push_back(k);
        }
        for (const auto& f : single.facts) out.facts.push_back({f.figure + k * n, f.ground + k * n, f.relation});
    }
    return out;
}

std::vector<double> encode_people(std::span<const std::size_t> people, std::size_t size) {
    std::vector<double> v(size, 0.0);
    for (auto p : people) {
        if (p >= size) throw std::out_of_range("person index outside the bank");
        v[p] = 1.0;
    }
    return v;
}

std::vector<std::size_t> decode_people(std::span<const double> pattern) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pattern.size(); ++i)
        if (pattern[i] >= 0.5) out.push_back(i);
    return out;
}

}  // namespace analogator

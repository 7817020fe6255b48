#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gf/cnf.hpp"
#include "gf/error.hpp"

namespace gf {

// Elements of the restricted 3DM universe. Indices are 1-based: w/wbar/a/b
// run over 1..3n, s/sp over 1..|C1|, u/up over 1..3n-|C1|.
enum class ElemKind : uint8_t { W, Wbar, S, Sp, A, B, U, Up };

struct Element {
    ElemKind kind{ElemKind::W};
    int index = 0;

    bool operator==(const Element&) const = default;
};

std::string elem_id(const Element& e);  // "w3", "wbar3", "s1", "sp1", ...
Element elem_from_id(const std::string& id);

// One match (w, x, y) with w from W, x from X, y from Y.
struct Match {
    Element w, x, y;

    bool operator==(const Match&) const = default;
};

// The cyclic map inside each consecutive triple: 3k+1 -> 3k+2 -> 3k+3 -> 3k+1.
int zeta(int i);

// Where a real T1 match came from: clause position within C1 (1-based) and
// the originating literal.
struct MatchOrigin {
    int c1_pos = 0;
    int literal = 0;
};

struct TdmInstance {
    int n = 0;       // triple-group count; |W|=|X|=|Y| = 6n
    int c1_size = 0; // number of s/sp pairs; u/up pairs are 3n - c1_size
    std::vector<Match> t1;
    std::vector<Match> t2; // fixed: 3n straight matches then 3n cyclic ones
    std::vector<std::optional<MatchOrigin>> t1_origin; // parallel to t1
    std::optional<StructuredCnf> source; // present when built by the reduction

    int match_count() const { return int(t1.size() + t2.size()); }
    // Matches are addressed by a global id: t1 first, then t2.
    const Match& match(int id) const;
};

void validate(const TdmInstance& inst);

// Subset of T1 u T2 as global match ids.
struct Matching {
    std::vector<int> match_ids;
};

// Theorem-1 reduction from a structured CNF. Throws StructureError when
// |C1| > 3n (the u-element count would go negative).
TdmInstance reduce_sat_to_3dm(const StructuredCnf& s);

// True iff the matching is perfect: 6n matches covering every element of
// W u X u Y exactly once. Dangling ids raise StructureError.
bool verify_matching(const TdmInstance& inst, const Matching& m);

// Exact-cover backtracking, next element = fewest available matches, ties by
// element id, candidate matches in ascending global id. Guarded at 6n <= 24.
std::optional<Matching> brute_force_perfect_matching(const TdmInstance& inst);

// Completeness direction of Theorem 1: a satisfying assignment of the source
// formula becomes a perfect matching.
Matching matching_from_assignment(const TdmInstance& inst, const Assignment& a);

// Soundness direction: a perfect matching becomes a satisfying assignment.
// Asserts the T2 dichotomy per triple group on the way.
Assignment assignment_from_matching(const TdmInstance& inst, const Matching& m);

// {"n": n, "t1": [[w,x,y]...], "t2": [...]} with elements as id strings.
std::string tdm_to_json(const TdmInstance& inst);
TdmInstance tdm_from_json(const std::string& text);

} // namespace gf

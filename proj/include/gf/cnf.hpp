#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gf/error.hpp"

namespace gf {

// Literals are DIMACS-style signed ints: +v / -v, variables 1-based.
using Clause = std::vector<int>;

struct CnfInstance {
    int variable_count = 0;
    std::vector<Clause> clauses;
};

// Throws StructureError unless every literal is in range and no clause is
// empty.
void validate(const CnfInstance& cnf);

// Total truth assignment, 1-based.
struct Assignment {
    std::vector<bool> value; // size variable_count + 1, index 0 unused

    bool get(int var) const { return value[size_t(var)]; }
    bool literal_true(int lit) const { return lit > 0 ? value[size_t(lit)] : !value[size_t(-lit)]; }
};

// Literal occurrence counts per variable (duplicates inside a clause count).
std::vector<int> occurrence_counts(const CnfInstance& cnf);

// Standard DIMACS CNF. Comment lines start with 'c'; header "p cnf V C";
// clauses are 0-terminated and may span lines. Parse errors carry the line
// number.
CnfInstance parse_dimacs(std::istream& in);
CnfInstance parse_dimacs(const std::string& text);

// Canonical JSON form {"vars": V, "clauses": [[signed ints]]}.
std::string cnf_to_json(const CnfInstance& cnf);
CnfInstance cnf_from_json(const std::string& text);

struct ToveyResult {
    CnfInstance cnf;
    // replicas_of[v] (1-based input variable v) lists the output variables
    // standing in for v, in occurrence order.
    std::vector<std::vector<int>> replicas_of;
};

// Tovey's normalization: afterwards every variable occurs exactly 3 times.
// Single-occurrence variables get a dummy clause (z v ~z); variables with
// d >= 2 occurrences are split into z_1..z_d plus the cycle clauses
// (z_1 v ~z_2) ... (z_d v ~z_1). Zero-occurrence variables are rejected.
ToveyResult tovey_exact3(const CnfInstance& input);

// Same rewriting applied to a one-in-three 3SAT instance: input clauses must
// have exactly 3 literals; the output preserves one-in-three satisfiability,
// has clauses of 2 or 3 literals, and per-variable polarity profile 2+1 or
// 1+2.
ToveyResult tovey_one_in_three(const CnfInstance& input);

struct StructuredCnf {
    CnfInstance base;
    std::vector<int> c1; // indices of the rewritten original clauses
    std::vector<int> c2; // indices of the 3n cycle clauses
    int triple_count = 0; // n; base.variable_count == 3n
};

void validate(const StructuredCnf& s);

// Second Tovey pass: input must have every variable occurring exactly 3
// times; occurrence t of variable i becomes variable 3(i-1)+t, and the cycle
// clauses land in C2.
StructuredCnf tovey_structured(const CnfInstance& input);

bool satisfies(const CnfInstance& cnf, const Assignment& a);

// True iff every clause has exactly one true literal occurrence.
bool check_one_in_three(const CnfInstance& cnf, const Assignment& a);

// Exhaustive oracles, lexicographic order: variable 1 is the most
// significant bit, false < true; first hit wins. Guarded at 24 variables.
std::optional<Assignment> brute_force_sat(const CnfInstance& cnf);
std::optional<Assignment> brute_force_one_in_three(const CnfInstance& cnf);

} // namespace gf

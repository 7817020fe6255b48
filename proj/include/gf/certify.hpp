#pragma once

#include <optional>
#include <string>

#include "gf/cnf.hpp"
#include "gf/reduce3.hpp"
#include "gf/reduce4.hpp"
#include "gf/solver.hpp"

namespace gf {

// FNV-1a 64-bit content digest, hex encoded.
std::string content_digest(const std::string& bytes);

struct CertificateReport {
    std::string family;
    std::string seed_digest;
    nlohmann::json parameters = nlohmann::json::object();
    bool seed_satisfiable = false;
    std::optional<Rational> completeness_makespan; // present iff satisfiable
    std::string soundness_status; // FEASIBLE | REFUTED | BUDGET_EXCEEDED
    std::string soundness_threshold;
    std::uint64_t solver_nodes = 0;
    int rank = 0;
    int rank_bound = 0;
    bool rank_ok = false;
    nlohmann::json inequality_suite = nlohmann::json::object();
    bool inequalities_ok = false;
    bool certified = false;   // every applicable stage passed
    bool operational = true;  // false on budget exhaustion

    nlohmann::json to_json() const;
};

// Full rank-4 pipeline on a DIMACS seed: Tovey twice, 3DM' reduction, gadget
// build at the default parameter policy, exact rank check, inequality
// certificate, completeness witness when the seed is satisfiable, and the
// generic solver decision at threshold 3.
CertificateReport certify_rank4(const std::string& seed_dimacs, const Rational& epsilon,
                                const SolveBudget& budget, int workers = 1);

// Full rank-3 pipeline: one-in-three Tovey, gadget build, rank check,
// inequality certificate, exact-load completeness witness, and the
// structure-aware solver decision at threshold r+1.
CertificateReport certify_rank3(const std::string& seed_dimacs, const Rational& epsilon,
                                const SolveBudget& budget, int workers = 1);

} // namespace gf

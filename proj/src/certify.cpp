#include "gf/certify.hpp"

#include <cinttypes>
#include <cstdio>

#include "gf/tdm.hpp"

namespace gf {

std::string content_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

nlohmann::json CertificateReport::to_json() const {
    nlohmann::json j;
    j["family"] = family;
    j["seed_digest"] = seed_digest;
    j["parameters"] = parameters;
    j["seed_satisfiable"] = seed_satisfiable;
    if (completeness_makespan)
        j["completeness_makespan"] = completeness_makespan->str();
    j["soundness"] = {{"status", soundness_status},
                      {"threshold", soundness_threshold},
                      {"nodes", solver_nodes}};
    j["rank_check"] = {{"rank", rank}, {"bound", rank_bound}, {"ok", rank_ok}};
    j["inequality_suite"] = inequality_suite;
    j["certified"] = certified;
    j["operational"] = operational;
    return j;
}

CertificateReport certify_rank4(const std::string& seed_dimacs, const Rational& epsilon,
                                const SolveBudget& budget, int workers) {
    CertificateReport rep;
    rep.family = "rank4";
    rep.seed_digest = content_digest(seed_dimacs);

    CnfInstance seed = parse_dimacs(seed_dimacs);
    StructuredCnf structured = tovey_structured(tovey_exact3(seed).cnf);
    TdmInstance tdm = reduce_sat_to_3dm(structured);
    Reduce4Params params = default_params4(tdm.n, epsilon);
    rep.parameters = {{"epsilon", params.epsilon.str()},
                      {"N", std::to_string(params.n_scale)},
                      {"n", tdm.n}};
    GadgetInstance4 gadget = build_lrs4(tdm, params);

    RankCheck rc = verify_rank(gadget.lrs);
    rep.rank = rc.rank;
    rep.rank_bound = 4;
    rep.rank_ok = rc.ok;

    Cert4Report ineq = certify_inequalities4(params, tdm.n, workers);
    rep.inequality_suite = ineq.to_json();
    rep.inequalities_ok = ineq.ok;

    // The seed oracle and the structured oracle must agree; the structured
    // assignment feeds the witness maps.
    std::optional<Assignment> seed_sat = brute_force_sat(seed);
    std::optional<Assignment> structured_sat = brute_force_sat(structured.base);
    if (seed_sat.has_value() != structured_sat.has_value())
        throw StructureError("Tovey chain broke satisfiability");
    rep.seed_satisfiable = seed_sat.has_value();

    bool witness_ok = true;
    if (structured_sat) {
        Matching matching = matching_from_assignment(tdm, *structured_sat);
        Schedule schedule = schedule_from_matching(gadget, matching);
        rep.completeness_makespan = makespan(gadget.lrs, schedule);
        Matching round = matching_from_schedule(gadget, schedule);
        witness_ok = verify_matching(tdm, round);
        Assignment back = assignment_from_matching(tdm, round);
        witness_ok = witness_ok && satisfies(structured.base, back);
    }

    rep.soundness_threshold = "3";
    SolveOutcome outcome = decide(gadget.lrs, Rational(3), budget, SolveMode::Generic);
    rep.solver_nodes = outcome.nodes_explored;
    switch (outcome.status) {
    case SolveStatus::Feasible: rep.soundness_status = "FEASIBLE"; break;
    case SolveStatus::Infeasible: rep.soundness_status = "REFUTED"; break;
    case SolveStatus::BudgetExceeded:
        rep.soundness_status = "BUDGET_EXCEEDED";
        rep.operational = false;
        break;
    }

    bool solver_agrees = rep.operational &&
                         (rep.seed_satisfiable ? outcome.status == SolveStatus::Feasible
                                               : outcome.status == SolveStatus::Infeasible);
    rep.certified = rep.rank_ok && rep.inequalities_ok && witness_ok && solver_agrees;
    return rep;
}

CertificateReport certify_rank3(const std::string& seed_dimacs, const Rational& epsilon,
                                const SolveBudget& budget, int workers) {
    (void)workers;
    CertificateReport rep;
    rep.family = "rank3";
    rep.seed_digest = content_digest(seed_dimacs);

    CnfInstance seed = parse_dimacs(seed_dimacs);
    CnfInstance oit = tovey_one_in_three(seed).cnf;
    int n = oit.variable_count;
    int m = int(oit.clauses.size());
    Reduce3Params params = default_params3(n, epsilon);
    rep.parameters = {{"xi", params.xi},
                      {"r", params.r},
                      {"epsilon", params.epsilon.str()},
                      {"N", std::to_string(params.n_scale)},
                      {"n", n},
                      {"m", m}};
    GadgetInstance3 gadget = build_lrs3(oit, params);

    RankCheck rc = verify_rank(gadget.lrs);
    rep.rank = rc.rank;
    rep.rank_bound = 3;
    rep.rank_ok = rc.ok;

    Cert3Report ineq = certify_inequalities3(params, n, m);
    rep.inequality_suite = ineq.to_json();
    rep.inequalities_ok = ineq.ok;

    std::optional<Assignment> seed_sat = brute_force_one_in_three(seed);
    std::optional<Assignment> oit_sat = brute_force_one_in_three(oit);
    if (seed_sat.has_value() != oit_sat.has_value())
        throw StructureError("one-in-three Tovey broke satisfiability");
    rep.seed_satisfiable = oit_sat.has_value();

    bool witness_ok = true;
    if (oit_sat) {
        Schedule schedule = schedule_from_assignment(gadget, *oit_sat);
        rep.completeness_makespan = makespan(gadget.lrs, schedule);
        Assignment back = assignment_from_schedule(gadget, schedule);
        witness_ok = check_one_in_three(oit, back);
    }

    Rational threshold = Rational(params.r) + Rational(1);
    rep.soundness_threshold = threshold.str();
    SolveOutcome outcome = decide(gadget.lrs, threshold, budget, SolveMode::StructureAware);
    rep.solver_nodes = outcome.nodes_explored;
    switch (outcome.status) {
    case SolveStatus::Feasible: rep.soundness_status = "FEASIBLE"; break;
    case SolveStatus::Infeasible: rep.soundness_status = "REFUTED"; break;
    case SolveStatus::BudgetExceeded:
        rep.soundness_status = "BUDGET_EXCEEDED";
        rep.operational = false;
        break;
    }

    bool solver_agrees = rep.operational &&
                         (rep.seed_satisfiable ? outcome.status == SolveStatus::Feasible
                                               : outcome.status == SolveStatus::Infeasible);
    rep.certified = rep.rank_ok && rep.inequalities_ok && witness_ok && solver_agrees;
    return rep;
}

} // namespace gf

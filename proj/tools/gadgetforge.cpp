// gadget-forge: build scheduling hardness gadgets from CNF seeds and verify
// them with exact arithmetic.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gf/certify.hpp"
#include "gf/cnf.hpp"
#include "gf/lrs.hpp"
#include "gf/reduce3.hpp"
#include "gf/reduce4.hpp"
#include "gf/solver.hpp"
#include "gf/tdm.hpp"

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitOperational = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw gf::ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw gf::ParseError("cannot write '" + path + "'");
    out << bytes;
}

int resolve_workers(int flag_value) {
    if (flag_value > 0)
        return flag_value;
    if (const char* env = std::getenv("GADGET_FORGE_WORKERS"))
        return std::max(1, std::atoi(env));
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gadget-forge: exact low-rank scheduling hardness gadgets"};
    app.require_subcommand(1);

    std::string in_path, out_path, schedule_path, family, eps_text, decide_text;
    std::uint64_t budget_nodes = 10'000'000;
    double budget_seconds = 600.0;
    int workers = 0;
    int opt_n = 0, opt_m = 0;
    long nscale = 0;
    bool do_optimize = false;
    bool print_loads = false;
    std::string mode_text = "generic";

    auto add_budget = [&](CLI::App* cmd) {
        cmd->add_option("--budget-nodes", budget_nodes, "node limit for the search");
        cmd->add_option("--budget-seconds", budget_seconds, "time limit in seconds");
        cmd->add_option("--workers", workers, "worker threads (env GADGET_FORGE_WORKERS)");
    };

    CLI::App* reduce = app.add_subcommand("reduce", "run one reduction step");
    reduce->require_subcommand(1);
    CLI::App* r_sat = reduce->add_subcommand("sat-to-3dm", "3SAT seed to 3DM'");
    r_sat->add_option("--in", in_path, "DIMACS seed")->required();
    r_sat->add_option("--out", out_path, "output instance JSON")->required();
    CLI::App* r_lrs4 = reduce->add_subcommand("3dm-to-lrs4", "3DM' to the rank-4 gadget");
    r_lrs4->add_option("--in", in_path, "3DM' instance JSON")->required();
    r_lrs4->add_option("--out", out_path, "output LRS JSON")->required();
    r_lrs4->add_option("--eps", eps_text, "epsilon as p/q (default 1/8)");
    r_lrs4->add_option("--nscale", nscale, "override N (default: policy)");
    CLI::App* r_lrs3 = reduce->add_subcommand("oit-to-lrs3", "one-in-three seed to the rank-3 gadget");
    r_lrs3->add_option("--in", in_path, "DIMACS seed")->required();
    r_lrs3->add_option("--out", out_path, "output LRS JSON")->required();
    r_lrs3->add_option("--eps", eps_text, "epsilon as p/q (default 1/64)");
    r_lrs3->add_option("--nscale", nscale, "override N (default: policy)");

    CLI::App* certify = app.add_subcommand("certify", "run the full gap-certificate pipeline");
    certify->add_option("--family", family, "rank4 or rank3")->required();
    certify->add_option("--seed", in_path, "DIMACS seed")->required();
    certify->add_option("--eps", eps_text, "epsilon as p/q");
    certify->add_option("--out", out_path, "certificate JSON path");
    add_budget(certify);

    CLI::App* solve = app.add_subcommand("solve", "decide or optimize an LRS instance");
    solve->add_option("--in", in_path, "LRS JSON")->required();
    solve->add_option("--decide", decide_text, "threshold as p/q (strict)");
    solve->add_flag("--optimize", do_optimize, "find the exact optimum");
    solve->add_option("--mode", mode_text, "generic or structure");
    solve->add_option("--schedule-out", schedule_path, "write the schedule JSON here");
    add_budget(solve);

    CLI::App* rank_cmd = app.add_subcommand("rank", "exact rank of the processing-time matrix");
    rank_cmd->add_option("--in", in_path, "LRS JSON")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "recompute a schedule's exact loads");
    verify_cmd->add_option("--in", in_path, "LRS JSON")->required();
    verify_cmd->add_option("--schedule", schedule_path, "schedule JSON")->required();
    verify_cmd->add_flag("--loads", print_loads, "print per-machine loads");

    CLI::App* ineq = app.add_subcommand("inequalities", "run an inequality certificate alone");
    ineq->add_option("--family", family, "rank4 or rank3")->required();
    ineq->add_option("--eps", eps_text, "epsilon as p/q");
    ineq->add_option("--n", opt_n, "variable count n")->required();
    ineq->add_option("--m", opt_m, "clause count m (rank3)");
    ineq->add_option("--nscale", nscale, "override N (default: policy)");
    ineq->add_option("--workers", workers, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (r_sat->parsed()) {
            std::string text = slurp(in_path);
            gf::CnfInstance seed = gf::parse_dimacs(text);
            gf::ToveyResult exact3 = gf::tovey_exact3(seed);
            gf::StructuredCnf structured = gf::tovey_structured(exact3.cnf);
            gf::TdmInstance inst = gf::reduce_sat_to_3dm(structured);
            spill(out_path, gf::tdm_to_json(inst));
            nlohmann::json prov;
            prov["seed_digest"] = gf::content_digest(text);
            prov["seed_vars"] = seed.variable_count;
            prov["seed_clauses"] = seed.clauses.size();
            prov["structured"] = nlohmann::json::parse(gf::cnf_to_json(structured.base));
            prov["c1_size"] = inst.c1_size;
            prov["n"] = inst.n;
            nlohmann::json origins = nlohmann::json::array();
            for (size_t i = 0; i < inst.t1.size(); ++i)
                if (inst.t1_origin[i])
                    origins.push_back({{"match", int(i)},
                                       {"c1_pos", inst.t1_origin[i]->c1_pos},
                                       {"literal", inst.t1_origin[i]->literal}});
            prov["real_match_origins"] = origins;
            spill(out_path + ".provenance.json", prov.dump(2) + "\n");
            return kExitCertified;
        }
        if (r_lrs4->parsed()) {
            gf::TdmInstance tdm = gf::tdm_from_json(slurp(in_path));
            gf::Rational eps = eps_text.empty() ? gf::rat(1, 8) : gf::Rational::parse(eps_text);
            gf::Reduce4Params params = gf::default_params4(tdm.n, eps);
            if (nscale > 0) {
                params.n_scale = nscale;
                params.validate();
            }
            gf::GadgetInstance4 g = gf::build_lrs4(tdm, params);
            spill(out_path, gf::lrs_to_json(g.lrs));
            return kExitCertified;
        }
        if (r_lrs3->parsed()) {
            gf::CnfInstance seed = gf::parse_dimacs(slurp(in_path));
            gf::CnfInstance oit = gf::tovey_one_in_three(seed).cnf;
            gf::Rational eps = eps_text.empty() ? gf::rat(1, 64) : gf::Rational::parse(eps_text);
            gf::Reduce3Params params = gf::default_params3(oit.variable_count, eps);
            if (nscale > 0) {
                params.n_scale = nscale;
                params.validate(oit.variable_count);
            }
            gf::GadgetInstance3 g = gf::build_lrs3(oit, params);
            spill(out_path, gf::lrs_to_json(g.lrs));
            return kExitCertified;
        }
        if (certify->parsed()) {
            gf::SolveBudget budget{budget_nodes, budget_seconds};
            std::string text = slurp(in_path);
            gf::CertificateReport rep;
            if (family == "rank4") {
                gf::Rational eps = eps_text.empty() ? gf::rat(1, 8) : gf::Rational::parse(eps_text);
                rep = gf::certify_rank4(text, eps, budget, resolve_workers(workers));
            } else if (family == "rank3") {
                gf::Rational eps = eps_text.empty() ? gf::rat(1, 64) : gf::Rational::parse(eps_text);
                rep = gf::certify_rank3(text, eps, budget, resolve_workers(workers));
            } else {
                throw gf::ParseError("unknown family '" + family + "'");
            }
            std::string body = rep.to_json().dump(2) + "\n";
            if (!out_path.empty())
                spill(out_path, body);
            else
                std::cout << body;
            std::cout << "family=" << rep.family << " satisfiable=" << (rep.seed_satisfiable ? "yes" : "no")
                      << " rank=" << rep.rank << "<=" << rep.rank_bound
                      << " inequalities=" << (rep.inequalities_ok ? "pass" : "FAIL")
                      << " soundness=" << rep.soundness_status
                      << (rep.completeness_makespan
                              ? " completeness_makespan=" + rep.completeness_makespan->str()
                              : "")
                      << " certified=" << (rep.certified ? "yes" : "NO") << "\n";
            if (!rep.operational)
                return kExitOperational;
            return rep.certified ? kExitCertified : kExitRefuted;
        }
        if (solve->parsed()) {
            gf::LrsInstance inst = gf::lrs_from_json(slurp(in_path));
            gf::SolveBudget budget{budget_nodes, budget_seconds};
            if (do_optimize == !decide_text.empty())
                throw gf::ParseError("pass exactly one of --decide or --optimize");
            if (!decide_text.empty()) {
                gf::SolveMode mode = mode_text == "structure" ? gf::SolveMode::StructureAware
                                                              : gf::SolveMode::Generic;
                gf::SolveOutcome res =
                    gf::decide(inst, gf::Rational::parse(decide_text), budget, mode);
                switch (res.status) {
                case gf::SolveStatus::Feasible: {
                    std::cout << "FEASIBLE makespan=" << gf::makespan(inst, *res.schedule).str()
                              << " nodes=" << res.nodes_explored << "\n";
                    if (!schedule_path.empty())
                        spill(schedule_path, gf::schedule_to_json(*res.schedule));
                    return kExitCertified;
                }
                case gf::SolveStatus::Infeasible:
                    std::cout << "INFEASIBLE nodes=" << res.nodes_explored << "\n";
                    return kExitCertified;
                case gf::SolveStatus::BudgetExceeded:
                    std::cout << "BUDGET_EXCEEDED nodes=" << res.nodes_explored << "\n";
                    return kExitOperational;
                }
            }
            gf::OptimizeOutcome res = gf::optimize(inst, budget);
            if (res.status == gf::SolveStatus::BudgetExceeded) {
                std::cout << "BUDGET_EXCEEDED nodes=" << res.nodes_explored << "\n";
                return kExitOperational;
            }
            std::cout << "OPTIMAL makespan=" << res.value->str() << " nodes=" << res.nodes_explored
                      << "\n";
            if (!schedule_path.empty())
                spill(schedule_path, gf::schedule_to_json(*res.schedule));
            return kExitCertified;
        }
        if (rank_cmd->parsed()) {
            gf::LrsInstance inst = gf::lrs_from_json(slurp(in_path));
            gf::RankCheck rc = gf::verify_rank(inst);
            std::cout << "rank=" << rc.rank << " bound=" << inst.d << (rc.ok ? " ok" : " FAIL")
                      << "\n";
            return rc.ok ? kExitCertified : kExitRefuted;
        }
        if (verify_cmd->parsed()) {
            gf::LrsInstance inst = gf::lrs_from_json(slurp(in_path));
            gf::Schedule s = gf::schedule_from_json(slurp(schedule_path));
            if (print_loads)
                for (const auto& m : inst.machines)
                    std::cout << m.id << " " << gf::load(inst, s, m.id).str() << "\n";
            std::cout << gf::makespan(inst, s).str() << "\n";
            return kExitCertified;
        }
        if (ineq->parsed()) {
            if (family == "rank4") {
                gf::Rational eps = eps_text.empty() ? gf::rat(1, 8) : gf::Rational::parse(eps_text);
                gf::Reduce4Params params = gf::default_params4(opt_n, eps);
                if (nscale > 0) {
                    params.n_scale = nscale;
                    params.validate();
                }
                gf::Cert4Report rep = gf::certify_inequalities4(params, opt_n, resolve_workers(workers));
                std::cout << rep.to_json().dump(2) << "\n";
                return rep.ok ? kExitCertified : kExitRefuted;
            }
            if (family == "rank3") {
                gf::Rational eps = eps_text.empty() ? gf::rat(1, 64) : gf::Rational::parse(eps_text);
                if (opt_m == 0)
                    throw gf::ParseError("rank3 inequalities need --m");
                gf::Reduce3Params params = gf::default_params3(opt_n, eps);
                if (nscale > 0) {
                    params.n_scale = nscale;
                    params.validate(opt_n);
                }
                gf::Cert3Report rep = gf::certify_inequalities3(params, opt_n, opt_m);
                std::cout << rep.to_json().dump(2) << "\n";
                return rep.ok ? kExitCertified : kExitRefuted;
            }
            throw gf::ParseError("unknown family '" + family + "'");
        }
    } catch (const gf::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitOperational;
    } catch (const gf::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitOperational;
    } catch (const gf::CertificateError& e) {
        std::cerr << "certificate refuted: " << e.what() << "\n";
        return kExitRefuted;
    } catch (const gf::SoundnessError& e) {
        std::cerr << "soundness error: " << e.what() << "\n";
        return kExitRefuted;
    } catch (const gf::WitnessError& e) {
        std::cerr << "witness error: " << e.what() << "\n";
        return kExitRefuted;
    } catch (const gf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOperational;
    }
    return kExitOperational;
}

#include "gf/reduce3.hpp"

#include <algorithm>
#include <array>

namespace gf {

namespace {

// Offsets of the four v/huge families, in units of xi. They equal the tau
// pair sums of the corresponding truth machines, which is what makes every
// intended third-coordinate load cancel to exactly r.
constexpr long kFamilyXi[5] = {0, 10, 20, 18, 12};
// Truth machine k carries tau families (a=1, b=2, c=3, d=4):
constexpr int kTauPair[5][2] = {{0, 0}, {1, 3}, {2, 4}, {1, 4}, {2, 3}};
constexpr char kTauLetter[5] = {'?', 'a', 'b', 'c', 'd'};

long v_third(const Reduce3Params& p, int k, bool truth) {
    return p.r / 8 - kFamilyXi[k] * p.xi - 2 - (truth ? 0 : 2);
}
long tau_third(const Reduce3Params& p, int fam, bool truth) {
    return (1L << fam) * p.xi + 1 + (truth ? 0 : 1);
}
long u_third(const Reduce3Params& p, bool truth) { return p.r / 4 + (truth ? 2 : 4); }
long phi_third(const Reduce3Params& p, bool truth) { return p.r / 16 + (truth ? 2 : 4); }
long truth_huge_third(const Reduce3Params& p) { return 7 * p.r / 8; }
long clause_huge_third(const Reduce3Params& p, int k) { return 5 * p.r / 8 + kFamilyXi[k] * p.xi; }
long dummy_huge_third(const Reduce3Params& p, int k) { return 13 * p.r / 16 + kFamilyXi[k] * p.xi; }

std::string truth_machine_id(int i, int k) {
    std::string s = "(v" + std::to_string(i) + "." + std::to_string(k);
    s += std::string(",") + kTauLetter[kTauPair[k][0]] + std::to_string(i);
    s += std::string(",") + kTauLetter[kTauPair[k][1]] + std::to_string(i) + ")";
    return s;
}
std::string clause_machine_id(int i, int k, int j) {
    return "(v" + std::to_string(i) + "." + std::to_string(k) + ",u" + std::to_string(j) + ")";
}
std::string dummy_machine_id(int i, int k) {
    return "(v" + std::to_string(i) + "." + std::to_string(k) + ",phi)";
}
std::string v_job_id(int i, int k, bool truth) {
    return "v" + std::to_string(i) + "." + std::to_string(k) + (truth ? "T" : "F");
}
std::string tau_job_id(int i, int fam, bool truth) {
    return kTauLetter[fam] + std::to_string(i) + (truth ? "T" : "F");
}

} // namespace

void Reduce3Params::validate() const {
    if (xi != 8)
        throw StructureError("xi must be 2^3 = 8");
    if (r != 1024 * xi)
        throw StructureError("r must be 2^10 * xi = 8192");
    if (!(Rational(0) < epsilon && epsilon <= rat(1, 64)))
        throw StructureError("epsilon must lie in (0, 1/64]");
    if (n_scale < 1)
        throw StructureError("N must be positive");
}

void Reduce3Params::validate(int n) const {
    validate();
    if (!(Rational(n_scale) >= Rational(n) / (epsilon * epsilon)))
        throw StructureError("need N >= n/eps^2");
}

Reduce3Params default_params3(int n, const Rational& epsilon) {
    Reduce3Params p;
    p.epsilon = epsilon;
    Rational need = Rational(n) / (epsilon * epsilon);
    long N = 1;
    while (Rational(N) < need)
        N *= 2;
    p.n_scale = N;
    p.validate(n);
    return p;
}

GadgetInstance3 build_lrs3(const CnfInstance& cnf, const Reduce3Params& p) {
    validate(cnf);
    int n = cnf.variable_count;
    int m = int(cnf.clauses.size());
    p.validate(n);

    // Shape checks for tovey_one_in_three output.
    std::vector<int> pos(size_t(n) + 1, 0), neg(size_t(n) + 1, 0);
    for (const Clause& c : cnf.clauses) {
        if (c.size() != 2 && c.size() != 3)
            throw StructureError("clause with " + std::to_string(c.size()) + " literals");
        for (int lit : c)
            ++(lit > 0 ? pos : neg)[size_t(std::abs(lit))];
    }
    for (int i = 1; i <= n; ++i) {
        int pq = pos[size_t(i)], nq = neg[size_t(i)];
        if (!((pq == 2 && nq == 1) || (pq == 1 && nq == 2)))
            throw StructureError("variable " + std::to_string(i) + " has polarity profile " +
                                 std::to_string(pq) + "+" + std::to_string(nq));
    }
    if (!(n <= m && m <= 2 * n))
        throw StructureError("need n <= m <= 2n");
    if (2 * n - m < 0 || m - n < 0)
        throw StructureError("dummy job counts would go negative");

    GadgetInstance3 g;
    g.params = p;
    g.cnf = cnf;
    g.lrs.d = 3;
    g.dummy_k.assign(size_t(n) + 1, 0);

    Rational eps = p.epsilon;
    Rational N(p.n_scale);
    long nval = p.n_scale;
    auto np = [&](long e) { return pow_int(N, e); };
    Rational one(1), zero(0);

    // Truth assignment machines, 4 per variable.
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= 4; ++k) {
            g.lrs.machines.push_back({truth_machine_id(i, k), {np(-4L * i - k), np(-i), one}});
            g.minfo.push_back({MachKind3::Truth, i, k, 0});
        }
    // Clause machines, one per literal occurrence; k tracks the first/second
    // occurrence of each polarity.
    std::vector<int> pos_seen(size_t(n) + 1, 0), neg_seen(size_t(n) + 1, 0);
    g.occurrences.resize(size_t(m));
    for (int j = 1; j <= m; ++j) {
        for (int lit : cnf.clauses[size_t(j - 1)]) {
            int i = std::abs(lit);
            int k;
            if (lit > 0)
                k = ++pos_seen[size_t(i)] == 1 ? 1 : 2;
            else
                k = ++neg_seen[size_t(i)] == 1 ? 3 : 4;
            int machine = int(g.lrs.machines.size());
            g.lrs.machines.push_back({clause_machine_id(i, k, j), {np(-4L * i - k), np(-nval - j), one}});
            g.minfo.push_back({MachKind3::Clause, i, k, j});
            g.occurrences[size_t(j - 1)].push_back({i, lit > 0, k, machine});
        }
    }
    // Dummy machines, one per variable, on the k that clause machines left
    // unused.
    for (int i = 1; i <= n; ++i) {
        int k = pos[size_t(i)] == 1 ? 2 : 4;
        g.dummy_k[size_t(i)] = k;
        g.lrs.machines.push_back({dummy_machine_id(i, k), {np(-4L * i - k), zero, one}});
        g.minfo.push_back({MachKind3::Dummy, i, k, 0});
    }
    if (int(g.lrs.machines.size()) != 8 * n)
        throw StructureError("machine count is not 8n");

    auto third = [](long v) { return Rational(v); };

    // Variable jobs: 8 per variable.
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= 4; ++k)
            for (bool truth : {true, false}) {
                g.lrs.jobs.push_back(
                    {v_job_id(i, k, truth), {eps * np(4L * i + k), zero, third(v_third(p, k, truth))}});
                g.jinfo.push_back({JobKind3::Variable, i, k, 0, truth ? 1 : -1, -1});
            }
    // Truth assignment jobs: 8 per variable.
    for (int i = 1; i <= n; ++i)
        for (int fam = 1; fam <= 4; ++fam)
            for (bool truth : {true, false}) {
                g.lrs.jobs.push_back(
                    {tau_job_id(i, fam, truth), {zero, eps * np(i), third(tau_third(p, fam, truth))}});
                g.jinfo.push_back({JobKind3::Tau, i, fam, 0, truth ? 1 : -1, -1});
            }
    // Clause jobs: one u_j^T plus |beta_j|-1 copies of u_j^F.
    for (int j = 1; j <= m; ++j) {
        Rational second = eps * np(nval + j);
        g.lrs.jobs.push_back({"u" + std::to_string(j) + "T", {zero, second, third(u_third(p, true))}});
        g.jinfo.push_back({JobKind3::ClauseJob, 0, 0, j, 1, -1});
        for (size_t f = 1; f < cnf.clauses[size_t(j - 1)].size(); ++f) {
            g.lrs.jobs.push_back({"u" + std::to_string(j) + "F#" + std::to_string(f),
                                  {zero, second, third(u_third(p, false))}});
            g.jinfo.push_back({JobKind3::ClauseJob, 0, 0, j, -1, -1});
        }
    }
    // Dummy jobs: 2n-m true, m-n false.
    for (int t = 1; t <= 2 * n - m; ++t) {
        g.lrs.jobs.push_back({"phiT#" + std::to_string(t), {zero, zero, third(phi_third(p, true))}});
        g.jinfo.push_back({JobKind3::Dummy, 0, 0, 0, 1, -1});
    }
    for (int t = 1; t <= m - n; ++t) {
        g.lrs.jobs.push_back({"phiF#" + std::to_string(t), {zero, zero, third(phi_third(p, false))}});
        g.jinfo.push_back({JobKind3::Dummy, 0, 0, 0, -1, -1});
    }
    // Huge jobs, one per machine.
    for (size_t mi = 0; mi < g.lrs.machines.size(); ++mi) {
        const MachineInfo3& info = g.minfo[mi];
        std::vector<Rational> size;
        switch (info.kind) {
        case MachKind3::Truth:
            size = {eps * np(4L * info.var + info.k), eps * np(info.var),
                    third(truth_huge_third(p))};
            break;
        case MachKind3::Clause:
            size = {zero, eps * np(nval + info.clause), third(clause_huge_third(p, info.k))};
            break;
        case MachKind3::Dummy:
            size = {zero, np(2L * nval), third(dummy_huge_third(p, info.k))};
            break;
        }
        g.lrs.jobs.push_back({"H" + g.lrs.machines[mi].id, std::move(size)});
        g.jinfo.push_back({JobKind3::Huge, info.var, 0, info.clause, 0, int(mi)});
    }
    if (int(g.lrs.jobs.size()) != 28 * n)
        throw StructureError("job count is not 28n");

    nlohmann::json kind_of_job = nlohmann::json::object();
    static const char* kind_name[] = {"variable", "truth-assignment", "clause", "dummy", "huge"};
    for (size_t j = 0; j < g.lrs.jobs.size(); ++j)
        kind_of_job[g.lrs.jobs[j].id] = kind_name[size_t(g.jinfo[j].kind)];
    nlohmann::json label_of_machine = nlohmann::json::object();
    for (const auto& mach : g.lrs.machines)
        label_of_machine[mach.id] = mach.id;
    g.lrs.meta = {{"family", "rank3"},          {"xi", p.xi},
                  {"r", p.r},                   {"epsilon", p.epsilon.str()},
                  {"N", std::to_string(nval)},  {"kind_of_job", kind_of_job},
                  {"label_of_machine", label_of_machine}};

    validate(g.lrs);
    if (!all_nonnegative(g.lrs))
        throw StructureError("rank-3 gadget has a negative coordinate");
    assert_third_coordinate_bound(g.lrs);
    return g;
}

namespace {

Rational third_load(const GadgetInstance3& g, const std::vector<std::vector<int>>& jobs_on, size_t m) {
    Rational sum;
    for (int j : jobs_on[m])
        sum += g.lrs.jobs[size_t(j)].size[2];
    return sum;
}

std::vector<std::vector<int>> jobs_per_machine(const GadgetInstance3& g, const Schedule& s) {
    validate(g.lrs, s);
    std::vector<std::vector<int>> jobs_on(g.lrs.machines.size());
    for (size_t j = 0; j < g.lrs.jobs.size(); ++j)
        jobs_on[size_t(g.lrs.machine_index(s.assignment.at(g.lrs.jobs[j].id)))].push_back(int(j));
    return jobs_on;
}

} // namespace

Schedule schedule_from_assignment(const GadgetInstance3& inst, const Assignment& a) {
    if (!check_one_in_three(inst.cnf, a))
        throw WitnessError("assignment does not satisfy every clause exactly once");

    int n = inst.cnf.variable_count;
    Schedule s;
    auto place = [&](const std::string& job, size_t machine) {
        s.assignment[job] = inst.lrs.machines[machine].id;
    };

    // Truth assignment machines: a false variable runs its T jobs on
    // machines 1,2 and F jobs on 3,4; a true variable mirrors that.
    for (size_t mi = 0; mi < inst.lrs.machines.size(); ++mi) {
        const MachineInfo3& info = inst.minfo[mi];
        if (info.kind != MachKind3::Truth)
            continue;
        bool truth = (info.k <= 2) != a.get(info.var);
        place(v_job_id(info.var, info.k, truth), mi);
        place(tau_job_id(info.var, kTauPair[info.k][0], truth), mi);
        place(tau_job_id(info.var, kTauPair[info.k][1], truth), mi);
    }
    // Clause machines: the unique satisfying occurrence takes u_j^T with its
    // true variable job, the others take u_j^F with false variable jobs.
    for (size_t jc = 0; jc < inst.occurrences.size(); ++jc) {
        int j = int(jc) + 1;
        int next_f = 1;
        for (const Occurrence3& occ : inst.occurrences[jc]) {
            bool literal_true = occ.positive == a.get(occ.var);
            place(v_job_id(occ.var, occ.k, literal_true), size_t(occ.machine));
            if (literal_true)
                place("u" + std::to_string(j) + "T", size_t(occ.machine));
            else
                place("u" + std::to_string(j) + "F#" + std::to_string(next_f++), size_t(occ.machine));
        }
    }
    // Dummy machines soak up the leftover variable job, paired with a dummy
    // job of the same truth tag.
    int next_phi_t = 1, next_phi_f = 1;
    for (size_t mi = 0; mi < inst.lrs.machines.size(); ++mi) {
        const MachineInfo3& info = inst.minfo[mi];
        if (info.kind != MachKind3::Dummy)
            continue;
        bool leftover = info.k == 2 ? a.get(info.var) : !a.get(info.var);
        place(v_job_id(info.var, info.k, leftover), mi);
        if (leftover)
            place("phiT#" + std::to_string(next_phi_t++), mi);
        else
            place("phiF#" + std::to_string(next_phi_f++), mi);
    }
    if (next_phi_t - 1 != 2 * n - int(inst.cnf.clauses.size()) ||
        next_phi_f - 1 != int(inst.cnf.clauses.size()) - n)
        throw WitnessError("dummy job consumption mismatch");
    // Huge jobs sit on their home machines.
    for (size_t j = 0; j < inst.lrs.jobs.size(); ++j)
        if (inst.jinfo[j].kind == JobKind3::Huge)
            place(inst.lrs.jobs[j].id, size_t(inst.jinfo[j].machine));

    // Exact load identities: third-coordinate load r on every machine, full
    // load strictly inside (r, r+1/2).
    auto jobs_on = jobs_per_machine(inst, s);
    Rational r_exact(inst.params.r);
    Rational half_window = r_exact + rat(1, 2);
    for (size_t mi = 0; mi < inst.lrs.machines.size(); ++mi) {
        if (third_load(inst, jobs_on, mi) != r_exact)
            throw StructureError("machine " + inst.lrs.machines[mi].id +
                                 " third-coordinate load is not exactly r");
        Rational full;
        for (int j : jobs_on[mi])
            full += processing_time(inst.lrs, int(mi), j);
        if (!(r_exact < full && full < half_window))
            throw StructureError("machine " + inst.lrs.machines[mi].id + " full load " + full.str() +
                                 " is outside (r, r+1/2)");
    }
    return s;
}

Assignment assignment_from_schedule(const GadgetInstance3& inst, const Schedule& s) {
    Rational ms = makespan(inst.lrs, s);
    Rational threshold = Rational(inst.params.r) + Rational(1);
    if (!(ms < threshold))
        throw SoundnessError("schedule has makespan " + ms.str() + " >= r+1");

    auto jobs_on = jobs_per_machine(inst, s);
    size_t machines = inst.lrs.machines.size();
    auto fail = [&](const std::string& lemma, size_t mi, const std::string& what) {
        throw SoundnessError(lemma + ": machine " + inst.lrs.machines[mi].id + ": " + what);
    };

    // Load window: integer third-coordinate loads are <= r each and sum to
    // 8nr, so each must equal r exactly.
    Rational r_exact(inst.params.r);
    for (size_t mi = 0; mi < machines; ++mi)
        if (third_load(inst, jobs_on, mi) != r_exact)
            fail("load-window", mi, "third-coordinate load != r");

    // Huge placement: one huge job per machine, staying inside its class.
    for (size_t mi = 0; mi < machines; ++mi) {
        int huges = 0;
        for (int j : jobs_on[mi])
            if (inst.jinfo[size_t(j)].kind == JobKind3::Huge) {
                ++huges;
                MachKind3 home = inst.minfo[size_t(inst.jinfo[size_t(j)].machine)].kind;
                if (home != inst.minfo[mi].kind)
                    fail("huge-placement", mi, "huge job " + inst.lrs.jobs[size_t(j)].id +
                                                   " crossed machine classes");
            }
        if (huges != 1)
            fail("huge-placement", mi, std::to_string(huges) + " huge jobs");
    }
    // Job multiplicities per lemma: one variable job per machine, one clause
    // job per clause machine, one dummy job per dummy machine, none astray.
    for (size_t mi = 0; mi < machines; ++mi) {
        int vars = 0, clauses = 0, dummies = 0;
        for (int j : jobs_on[mi]) {
            JobKind3 k = inst.jinfo[size_t(j)].kind;
            vars += k == JobKind3::Variable;
            clauses += k == JobKind3::ClauseJob;
            dummies += k == JobKind3::Dummy;
        }
        if (vars != 1)
            fail("variable-job", mi, std::to_string(vars) + " variable jobs");
        if (clauses != (inst.minfo[mi].kind == MachKind3::Clause ? 1 : 0))
            fail("clause-job", mi, std::to_string(clauses) + " clause jobs");
        if (dummies != (inst.minfo[mi].kind == MachKind3::Dummy ? 1 : 0))
            fail("dummy-job", mi, std::to_string(dummies) + " dummy jobs");
    }
    // Variable-satisfied, satisfied, truth-benevolent.
    std::vector<int> v_truth_of_machine(machines, 0);
    for (size_t mi = 0; mi < machines; ++mi) {
        const MachineInfo3& info = inst.minfo[mi];
        int tag = 0;
        bool tag_set = false;
        std::array<int, 2> taus_seen = {0, 0};
        for (int j : jobs_on[mi]) {
            const JobInfo3& ji = inst.jinfo[size_t(j)];
            switch (ji.kind) {
            case JobKind3::Variable:
                if (ji.var != info.var || ji.fam != info.k)
                    fail("variable-satisfied", mi, "carries " + inst.lrs.jobs[size_t(j)].id);
                v_truth_of_machine[mi] = ji.truth;
                break;
            case JobKind3::Huge:
                if (ji.machine != int(mi))
                    fail("huge-satisfied", mi, "carries " + inst.lrs.jobs[size_t(j)].id);
                continue; // huge jobs carry no truth tag
            case JobKind3::Tau: {
                if (info.kind != MachKind3::Truth)
                    fail("satisfied", mi, "truth-assignment job on a non-truth machine");
                if (ji.var != info.var)
                    fail("satisfied", mi, "carries " + inst.lrs.jobs[size_t(j)].id);
                if (ji.fam == kTauPair[info.k][0])
                    ++taus_seen[0];
                else if (ji.fam == kTauPair[info.k][1])
                    ++taus_seen[1];
                else
                    fail("satisfied", mi, "carries " + inst.lrs.jobs[size_t(j)].id);
                break;
            }
            case JobKind3::ClauseJob:
                if (ji.clause != info.clause)
                    fail("satisfied", mi, "carries " + inst.lrs.jobs[size_t(j)].id);
                break;
            case JobKind3::Dummy:
                break; // dummy machines accept either phi job
            }
            if (!tag_set) {
                tag = ji.truth;
                tag_set = true;
            } else if (tag != ji.truth) {
                fail("truth-benevolent", mi, "mixes true and false jobs");
            }
        }
        if (info.kind == MachKind3::Truth && (taus_seen[0] != 1 || taus_seen[1] != 1))
            fail("satisfied", mi, "does not carry exactly its two truth-assignment jobs");
    }

    // Read the assignment off the truth machines: T jobs on machines 1,2
    // mean false, T jobs on 3,4 mean true.
    int n = inst.cnf.variable_count;
    Assignment a;
    a.value.assign(size_t(n) + 1, false);
    for (int i = 1; i <= n; ++i) {
        std::array<int, 5> pattern = {0, 0, 0, 0, 0};
        for (size_t mi = 0; mi < machines; ++mi)
            if (inst.minfo[mi].kind == MachKind3::Truth && inst.minfo[mi].var == i)
                pattern[size_t(inst.minfo[mi].k)] = v_truth_of_machine[mi];
        bool false_pattern = pattern[1] == 1 && pattern[2] == 1 && pattern[3] == -1 && pattern[4] == -1;
        bool true_pattern = pattern[1] == -1 && pattern[2] == -1 && pattern[3] == 1 && pattern[4] == 1;
        if (!false_pattern && !true_pattern)
            throw SoundnessError("variable " + std::to_string(i) +
                                 " has an inconsistent truth-machine pattern");
        a.value[size_t(i)] = true_pattern;
    }
    if (!check_one_in_three(inst.cnf, a))
        throw SoundnessError("extracted assignment is not one-in-three satisfying");
    return a;
}

nlohmann::json Cert3Report::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["checks"] = nlohmann::json::array();
    for (const Cert3Check& c : checks)
        j["checks"].push_back({{"name", c.name}, {"detail", c.detail}, {"pass", c.pass}});
    return j;
}

Cert3Report certify_inequalities3(const Reduce3Params& p, int n, int m) {
    p.validate();
    if (n < 1 || m < n || 3 * n - 2 * m < 0)
        throw StructureError("need n >= 1 and n <= m <= 3n/2");

    Cert3Report rep;
    auto check = [&](const std::string& name, long lhs, const char* op, long rhs) {
        bool pass = std::string(op) == ">" ? lhs > rhs : lhs == rhs;
        rep.checks.push_back(
            {name, std::to_string(lhs) + " " + op + " " + std::to_string(rhs), pass});
        rep.ok = rep.ok && pass;
    };

    long r = p.r, xi = p.xi;
    check("huge-lower-bound", 5 * r / 8 - 20 * xi, ">", r / 2 + 1);
    check("clause-on-truth", r / 4 + 7 * r / 8, ">", r + 1);
    check("clause-on-dummy", r / 4 + 13 * r / 16 + 20 * xi, ">", r + 1);
    check("two-clause-jobs", 5 * r / 8 + 20 * xi + r / 2, ">", r + 1);
    check("two-variable-jobs", r / 4 - 40 * xi - 8, ">", 3 * r / 16);

    long min_two_v = 2 * v_third(p, 2, false); // the two smallest variable thirds
    check("two-variable-jobs-on-truth", truth_huge_third(p) + min_two_v, ">", r);
    check("two-variable-jobs-on-clause", clause_huge_third(p, 1) + u_third(p, true) + min_two_v, ">", r);
    check("two-variable-jobs-on-dummy", dummy_huge_third(p, 4) + min_two_v, ">", r);

    long tau_total = 0;
    for (int fam = 1; fam <= 4; ++fam)
        tau_total += tau_third(p, fam, true) + tau_third(p, fam, false);
    check("truth-assignment-total", tau_total, "==", 60 * xi + 12);
    check("truth-window-low", tau_total, ">", 60 * xi + 8 - 1);   // total >= low
    check("truth-window-high", 60 * xi + 20, ">", tau_total - 1); // total <= high
    check("truth-window-missing-job", 60 * xi + 8, ">", tau_total - tau_third(p, 1, true));

    // Intended third-coordinate loads are exactly r on every machine shape,
    // for both uniform truth tags.
    for (int k = 1; k <= 4; ++k)
        for (bool t : {true, false}) {
            long sum = v_third(p, k, t) + tau_third(p, kTauPair[k][0], t) +
                       tau_third(p, kTauPair[k][1], t) + truth_huge_third(p);
            check("intended-load-truth-k" + std::to_string(k) + (t ? "-T" : "-F"), sum, "==", r);
            long csum = v_third(p, k, t) + u_third(p, t) + clause_huge_third(p, k);
            check("intended-load-clause-k" + std::to_string(k) + (t ? "-T" : "-F"), csum, "==", r);
        }
    for (int k : {2, 4})
        for (bool t : {true, false}) {
            long dsum = v_third(p, k, t) + phi_third(p, t) + dummy_huge_third(p, k);
            check("intended-load-dummy-k" + std::to_string(k) + (t ? "-T" : "-F"), dsum, "==", r);
        }

    // Truth-benevolence margins: every mixed-tag combination misses r by 1
    // or 2, never 0.
    bool margins_ok = true;
    std::string margin_detail;
    for (int k = 1; k <= 4 && margins_ok; ++k) {
        for (int mask = 0; mask < 8; ++mask) {
            bool gv = mask & 1, g1 = mask & 2, g2 = mask & 4;
            long sum = v_third(p, k, gv) + tau_third(p, kTauPair[k][0], g1) +
                       tau_third(p, kTauPair[k][1], g2) + truth_huge_third(p);
            bool uniform = (gv == g1) && (g1 == g2);
            long delta = sum - r;
            if (uniform ? delta != 0 : (delta == 0 || std::abs(delta) > 2)) {
                margins_ok = false;
                margin_detail = "truth machine k=" + std::to_string(k) + " mask " + std::to_string(mask);
            }
        }
        for (int mask = 0; mask < 4 && margins_ok; ++mask) {
            bool gv = mask & 1, gu = mask & 2;
            long sum = v_third(p, k, gv) + u_third(p, gu) + clause_huge_third(p, k);
            long delta = sum - r;
            if (gv == gu ? delta != 0 : (delta == 0 || std::abs(delta) > 2)) {
                margins_ok = false;
                margin_detail = "clause machine k=" + std::to_string(k) + " mask " + std::to_string(mask);
            }
        }
    }
    for (int k : {2, 4})
        for (int mask = 0; mask < 4 && margins_ok; ++mask) {
            bool gv = mask & 1, gp = mask & 2;
            long sum = v_third(p, k, gv) + phi_third(p, gp) + dummy_huge_third(p, k);
            long delta = sum - r;
            if (gv == gp ? delta != 0 : (delta == 0 || std::abs(delta) > 2)) {
                margins_ok = false;
                margin_detail = "dummy machine k=" + std::to_string(k) + " mask " + std::to_string(mask);
            }
        }
    rep.checks.push_back({"benevolence-margins",
                          margins_ok ? "all mixed tags miss r by 1 or 2" : margin_detail, margins_ok});
    rep.ok = rep.ok && margins_ok;

    // Total work: the third coordinates of all jobs sum to exactly 8nr.
    long s3 = 3 * n - 2 * m; // 3-literal clauses
    long s2 = 3 * (m - n);   // 2-literal clauses
    long total = 0;
    for (int k = 1; k <= 4; ++k)
        total += n * (v_third(p, k, true) + v_third(p, k, false));
    total += n * tau_total;
    total += s3 * (u_third(p, true) + 2 * u_third(p, false));
    total += s2 * (u_third(p, true) + u_third(p, false));
    total += (2 * n - m) * phi_third(p, true) + (m - n) * phi_third(p, false);
    total += n * 4 * truth_huge_third(p);
    // Clause machines of one variable use k = {1,2,3} or {1,3,4}; either way
    // their huge thirds plus the dummy huge third add up the same.
    total += n * (clause_huge_third(p, 1) + clause_huge_third(p, 3));
    long mix_a = clause_huge_third(p, 2) + dummy_huge_third(p, 4);
    long mix_b = clause_huge_third(p, 4) + dummy_huge_third(p, 2);
    check("huge-mix-invariance", mix_a, "==", mix_b);
    total += n * mix_a;
    check("total-work", total, "==", 8 * n * r);

    return rep;
}

} // namespace gf

#pragma once

#include <string>
#include <vector>

#include "gf/cnf.hpp"
#include "gf/lrs.hpp"

namespace gf {

struct Reduce3Params {
    long xi = 8;    // 2^3
    long r = 8192;  // 2^10 * xi
    Rational epsilon = rat(1, 64);
    long n_scale = 0; // N

    void validate() const;       // xi == 8, r == 1024*xi, 0 < eps <= 1/64
    void validate(int n) const;  // additionally N >= n/eps^2
};

// Policy: N = smallest power of two >= n/eps^2.
Reduce3Params default_params3(int n, const Rational& epsilon = rat(1, 64));

enum class JobKind3 { Variable, Tau, ClauseJob, Dummy, Huge };
enum class MachKind3 { Truth, Clause, Dummy };

struct MachineInfo3 {
    MachKind3 kind{};
    int var = 0;    // i
    int k = 0;      // 1..4
    int clause = 0; // j for clause machines, else 0
};

struct JobInfo3 {
    JobKind3 kind{};
    int var = 0;     // i for variable/tau jobs
    int fam = 0;     // variable jobs: k 1..4; tau jobs: 1=a 2=b 3=c 4=d
    int clause = 0;  // j for clause jobs and clause-huge jobs
    int truth = 0;   // +1 T, -1 F, 0 for huge jobs
    int machine = -1; // huge jobs: home machine index
};

// Per-clause literal occurrence and the machine built for it.
struct Occurrence3 {
    int var = 0;
    bool positive = false;
    int k = 0;       // 1/2 for positive first/second, 3/4 for negative
    int machine = -1;
};

struct GadgetInstance3 {
    LrsInstance lrs;
    Reduce3Params params;
    CnfInstance cnf; // the normalized one-in-three source
    std::vector<MachineInfo3> minfo; // parallel to lrs.machines
    std::vector<JobInfo3> jinfo;     // parallel to lrs.jobs
    std::vector<std::vector<Occurrence3>> occurrences; // per clause (1-based -> index j-1)
    std::vector<int> dummy_k; // per variable (1-based): 2 or 4
};

// The 8n-machine / 28n-job construction. Input must come out of
// tovey_one_in_three: every variable occurs 3 times with polarity profile
// 2+1 or 1+2, clauses have 2 or 3 literals.
GadgetInstance3 build_lrs3(const CnfInstance& cnf, const Reduce3Params& p);

// Table-4 schedule for a one-in-three satisfying assignment. Asserts the
// exact load identities: every third-coordinate load equals r, every full
// load lies in (r, r+1/2).
Schedule schedule_from_assignment(const GadgetInstance3& inst, const Assignment& a);

// Soundness extraction: replays the lemma chain as runtime assertions on a
// schedule of makespan strictly below r+1, then reads the assignment off the
// truth machines and verifies it is one-in-three satisfying.
Assignment assignment_from_schedule(const GadgetInstance3& inst, const Schedule& s);

struct Cert3Check {
    std::string name;
    std::string detail;
    bool pass = false;
};

struct Cert3Report {
    bool ok = true;
    std::vector<Cert3Check> checks;

    nlohmann::json to_json() const;
};

// Exact verification of every numeric inequality the lemma chain uses, plus
// the total-work identity (sum of all third coordinates == 8nr for any valid
// n, m).
Cert3Report certify_inequalities3(const Reduce3Params& p, int n, int m);

} // namespace gf

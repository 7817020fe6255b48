#pragma once

#include <string>
#include <vector>

#include "gf/lrs.hpp"
#include "gf/tdm.hpp"

namespace gf {

struct Reduce4Params {
    Rational epsilon;
    long n_scale = 0; // N

    void validate() const; // 0 < eps < 1/6, N >= 1/eps^2, eps*N >= 4
};

// Policy: N = max(64, ceil(3n/eps^2)) rounded up to the next power of two.
// The inequality certificate below makes the choice self-validating.
Reduce4Params default_params4(int n, const Rational& epsilon);

// Rank-4 gadget: one machine per match, one real job per X u Y element,
// d(w)-1 dummy jobs per W element.
struct GadgetInstance4 {
    LrsInstance lrs;
    TdmInstance tdm;
    Reduce4Params params;
    std::vector<int> match_of_machine;  // machine index -> global match id
    std::vector<Element> element_of_job; // job index -> its element (W element for dummies)
};

GadgetInstance4 build_lrs4(const TdmInstance& tdm, const Reduce4Params& p);

enum class TimeClass {
    Matched,  // non-W element on a containing match machine, time <= 1+6eps
    WMatched, // W job on a containing match machine, time exactly 2
    Blocked,  // time >= 3
};

// Every (machine, job) pair of a well-formed gadget falls in exactly one
// class; anything else is a construction bug and throws CertificateError.
TimeClass classify_time(const GadgetInstance4& inst, int machine, int job);
TimeClass classify_time(const GadgetInstance4& inst, const std::string& machine, const std::string& job);

// Completeness: real jobs onto their matched machines, one W dummy onto each
// remaining machine. Asserts exact makespan <= 2+6eps.
Schedule schedule_from_matching(const GadgetInstance4& inst, const Matching& m);

// Soundness: from any schedule of makespan strictly below 3, the machines
// not carrying W jobs form a perfect matching.
Matching matching_from_schedule(const GadgetInstance4& inst, const Schedule& s);

struct Cert4Report {
    bool ok = true;
    long pairs_checked = 0;
    bool has_blocked = false;
    Rational min_blocked;
    bool has_matched = false;
    Rational max_matched; // over Matched pairs (W pairs are pinned to 2)
    std::vector<std::string> violations;

    nlohmann::json to_json() const;
};

// Exhaustively classifies the full (job family, machine family, index) grid
// for the given n: every s/u pair index against every W index, plus the whole
// fixed T2 block. Matched times must stay <= 1+6eps (exactly 2 for W jobs),
// blocked times >= 3.
Cert4Report certify_inequalities4(const Reduce4Params& p, int n, int workers = 1);

} // namespace gf

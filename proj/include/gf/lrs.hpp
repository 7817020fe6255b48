#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "gf/exact.hpp"

namespace gf {

// Factored low-rank scheduling instance: speeds are rows of M (m x D), sizes
// are columns of J (D x n); the processing-time matrix P = M J is never
// stored densely outside full_matrix().
struct LrsInstance {
    struct MachineEntry {
        std::string id;
        std::vector<Rational> speed; // length d
    };
    struct JobEntry {
        std::string id;
        std::vector<Rational> size; // length d
    };

    int d = 0;
    std::vector<MachineEntry> machines;
    std::vector<JobEntry> jobs;
    nlohmann::json meta = nlohmann::json::object();

    int machine_index(const std::string& id) const;
    int job_index(const std::string& id) const;
};

// Checks dimensions and id uniqueness.
void validate(const LrsInstance& inst);

// Total assignment job id -> machine id. std::map keeps serialization
// deterministic.
struct Schedule {
    std::map<std::string, std::string> assignment;
};

void validate(const LrsInstance& inst, const Schedule& s);

// Exact processing time u_i . v_j. Unknown ids raise MathError.
Rational processing_time(const LrsInstance& inst, const std::string& machine, const std::string& job);
Rational processing_time(const LrsInstance& inst, int machine, int job);

// Exact total load of one machine under a total schedule.
Rational load(const LrsInstance& inst, const Schedule& s, const std::string& machine);

// Max load over all machines; 0 when there are no jobs.
Rational makespan(const LrsInstance& inst, const Schedule& s);

// Dense m x n matrix of exact processing times.
Matrix full_matrix(const LrsInstance& inst);

struct RankCheck {
    int rank = 0;
    bool ok = false; // rank <= d
};

RankCheck verify_rank(const LrsInstance& inst);

// True iff all speed/size coordinates are nonnegative; the gadget pipelines
// assert this on every constructed instance.
bool all_nonnegative(const LrsInstance& inst);

// Rank-3 gadgets promise p_ij >= third size coordinate for every pair; holds
// whenever speeds are nonnegative with third coordinate 1.
void assert_third_coordinate_bound(const LrsInstance& inst);

std::string lrs_to_json(const LrsInstance& inst);
LrsInstance lrs_from_json(const std::string& text);

std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);

} // namespace gf

#include "gf/solver.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <climits>

namespace gf {

void SolveBudget::validate() const {
    if (node_limit == 0 || !(time_limit_seconds > 0))
        throw StructureError("solve budget must be positive");
}

Schedule greedy(const LrsInstance& inst) {
    validate(inst);
    if (!inst.jobs.empty() && inst.machines.empty())
        throw StructureError("no machines to schedule onto");
    std::vector<Rational> loads(inst.machines.size());
    Schedule s;
    for (size_t j = 0; j < inst.jobs.size(); ++j) {
        int best = 0;
        Rational best_load;
        for (size_t m = 0; m < inst.machines.size(); ++m) {
            Rational cand = loads[m] + processing_time(inst, int(m), int(j));
            if (m == 0 || cand < best_load) {
                best = int(m);
                best_load = cand;
            }
        }
        loads[size_t(best)] = best_load;
        s.assignment[inst.jobs[j].id] = inst.machines[size_t(best)].id;
    }
    return s;
}

namespace {

// Job groups with an at-most-one-per-machine rule in structure-aware mode.
enum class Group : uint8_t { None, Huge, ClauseJob, Variable };

enum class MachClass : uint8_t { Truth, Clause, Dummy, Other };

struct Tags {
    bool valid = false;
    std::vector<MachClass> machine_class;
    std::vector<Group> group;            // per job
    std::vector<MachClass> huge_class;   // per job, home class for huge jobs
};

MachClass class_of_label(const std::string& label) {
    if (label.find(",phi)") != std::string::npos)
        return MachClass::Dummy;
    if (label.find(",u") != std::string::npos)
        return MachClass::Clause;
    return MachClass::Truth;
}

// Reads the rank-3 gadget tags out of the instance metadata; anything
// unexpected switches structure-aware mode off for this instance.
Tags parse_tags(const LrsInstance& inst) {
    Tags t;
    if (!inst.meta.is_object() || inst.meta.value("family", "") != "rank3")
        return t;
    if (!inst.meta.contains("kind_of_job") || !inst.meta.contains("label_of_machine"))
        return t;
    const auto& kinds = inst.meta.at("kind_of_job");
    const auto& labels = inst.meta.at("label_of_machine");
    t.machine_class.resize(inst.machines.size(), MachClass::Other);
    t.group.resize(inst.jobs.size(), Group::None);
    t.huge_class.resize(inst.jobs.size(), MachClass::Other);
    for (size_t m = 0; m < inst.machines.size(); ++m) {
        if (!labels.contains(inst.machines[m].id))
            return t;
        t.machine_class[m] = class_of_label(labels.at(inst.machines[m].id).get<std::string>());
    }
    for (size_t j = 0; j < inst.jobs.size(); ++j) {
        if (!kinds.contains(inst.jobs[j].id))
            return t;
        std::string kind = kinds.at(inst.jobs[j].id).get<std::string>();
        if (kind == "huge") {
            t.group[j] = Group::Huge;
            // Huge job ids are "H" + home machine label.
            const std::string& id = inst.jobs[j].id;
            if (id.size() < 2 || id[0] != 'H')
                return t;
            t.huge_class[j] = class_of_label(id.substr(1));
        } else if (kind == "clause") {
            t.group[j] = Group::ClauseJob;
        } else if (kind == "variable") {
            t.group[j] = Group::Variable;
        } else if (kind != "truth-assignment" && kind != "dummy") {
            return t;
        }
    }
    t.valid = true;
    return t;
}

struct DecideSearch {
    const LrsInstance& inst;
    Rational threshold;
    const SolveBudget& budget;
    int m, n;
    std::vector<std::vector<Rational>> p; // [job][machine]
    std::vector<std::vector<int>> dom;    // eligible machines per job
    Tags tags;
    bool use_structure = false;

    // Static per-machine reservation bounds (lower bounds on the time of the
    // group jobs every machine still has to host).
    std::vector<Rational> min_huge, min_u, min_v;
    std::vector<bool> has_min_huge, has_min_u, has_min_v;

    std::vector<Rational> loads;
    std::vector<int> assigned;     // job -> machine or -1
    std::vector<uint8_t> slot_huge, slot_u, slot_v; // per machine
    Rational sum_loads;
    Rational sum_min_remaining; // over unassigned jobs, static minimum times
    std::vector<Rational> static_min; // per job
    Rational total_capacity;    // m * threshold

    std::uint64_t nodes = 0;
    bool out_of_budget = false;
    std::chrono::steady_clock::time_point deadline;

    explicit DecideSearch(const LrsInstance& i, const Rational& thr, const SolveBudget& b)
        : inst(i), threshold(thr), budget(b), m(int(i.machines.size())), n(int(i.jobs.size())) {}

    bool budget_ok() {
        if (out_of_budget)
            return false;
        if (nodes >= budget.node_limit ||
            (nodes % 1024 == 0 && std::chrono::steady_clock::now() > deadline)) {
            out_of_budget = true;
            return false;
        }
        return true;
    }

    // Exact guards for the structure deductions; any failure degrades to the
    // generic search.
    void apply_structure_deductions() {
        if (!tags.valid)
            return;
        std::vector<int> huge_jobs, u_jobs, v_jobs;
        for (int j = 0; j < n; ++j) {
            if (tags.group[size_t(j)] == Group::Huge)
                huge_jobs.push_back(j);
            else if (tags.group[size_t(j)] == Group::ClauseJob)
                u_jobs.push_back(j);
            else if (tags.group[size_t(j)] == Group::Variable)
                v_jobs.push_back(j);
        }
        if (huge_jobs.size() != inst.machines.size())
            return;

        // Guard (one huge per machine): the two smallest huge times on every
        // machine already exceed the threshold together.
        for (int mach = 0; mach < m; ++mach) {
            Rational best, second;
            int found = 0;
            for (int j : huge_jobs) {
                const Rational& t = p[size_t(j)][size_t(mach)];
                if (found == 0 || t < best) {
                    second = found ? best : second;
                    best = t;
                    ++found;
                } else if (found == 1 || t < second) {
                    second = t;
                    ++found;
                }
            }
            if (found >= 2 && best + second < threshold)
                return;
        }
        // Guard (huge class routing): dummy huge jobs are time-blocked off
        // every non-dummy machine, clause huge jobs off truth machines; the
        // class counts match, so with one huge per machine each class stays
        // home and we may restrict every huge's domain to its class.
        size_t dummy_machines = 0, clause_machines = 0, truth_machines = 0;
        for (int mach = 0; mach < m; ++mach) {
            switch (tags.machine_class[size_t(mach)]) {
            case MachClass::Dummy: ++dummy_machines; break;
            case MachClass::Clause: ++clause_machines; break;
            case MachClass::Truth: ++truth_machines; break;
            default: return;
            }
        }
        size_t dummy_huges = 0, clause_huges = 0, truth_huges = 0;
        for (int j : huge_jobs) {
            MachClass home = tags.huge_class[size_t(j)];
            for (int mach = 0; mach < m; ++mach) {
                MachClass mc = tags.machine_class[size_t(mach)];
                bool must_block = (home == MachClass::Dummy && mc != MachClass::Dummy) ||
                                  (home == MachClass::Clause && mc == MachClass::Truth);
                if (must_block && p[size_t(j)][size_t(mach)] < threshold)
                    return;
            }
            switch (home) {
            case MachClass::Dummy: ++dummy_huges; break;
            case MachClass::Clause: ++clause_huges; break;
            case MachClass::Truth: ++truth_huges; break;
            default: return;
            }
        }
        if (dummy_huges != dummy_machines || clause_huges != clause_machines ||
            truth_huges != truth_machines)
            return;
        // Guard (clause jobs): time-blocked off truth machines; off dummy
        // machines once the dummy huge is accounted; at most one per clause
        // machine under the machine's own huge.
        for (int j : u_jobs)
            for (int mach = 0; mach < m; ++mach) {
                MachClass mc = tags.machine_class[size_t(mach)];
                if (mc == MachClass::Truth && p[size_t(j)][size_t(mach)] < threshold)
                    return;
                if (mc == MachClass::Dummy) {
                    Rational huge_min;
                    bool have = false;
                    for (int h : huge_jobs)
                        if (tags.huge_class[size_t(h)] == MachClass::Dummy) {
                            const Rational& t = p[size_t(h)][size_t(mach)];
                            if (!have || t < huge_min) {
                                huge_min = t;
                                have = true;
                            }
                        }
                    if (!have || huge_min + p[size_t(j)][size_t(mach)] < threshold)
                        return;
                }
            }
        for (int mach = 0; mach < m; ++mach) {
            if (tags.machine_class[size_t(mach)] != MachClass::Clause)
                continue;
            Rational huge_min, u1, u2;
            bool have_h = false;
            int found_u = 0;
            for (int h : huge_jobs)
                if (tags.huge_class[size_t(h)] == MachClass::Clause) {
                    const Rational& t = p[size_t(h)][size_t(mach)];
                    if (!have_h || t < huge_min) {
                        huge_min = t;
                        have_h = true;
                    }
                }
            for (int j : u_jobs) {
                const Rational& t = p[size_t(j)][size_t(mach)];
                if (found_u == 0 || t < u1) {
                    u2 = found_u ? u1 : u2;
                    u1 = t;
                    ++found_u;
                } else if (found_u == 1 || t < u2) {
                    u2 = t;
                    ++found_u;
                }
            }
            if (found_u >= 2 && have_h && huge_min + u1 + u2 < threshold)
                return;
        }
        // Guard (one variable job per machine): machine's own class huge,
        // plus a clause job where the machine requires one, plus the two
        // smallest variable jobs overload every machine.
        if (v_jobs.size() != inst.machines.size())
            return;
        for (int mach = 0; mach < m; ++mach) {
            Rational huge_min, u_min, v1, v2;
            bool have_h = false, have_u = false;
            int found_v = 0;
            for (int h : huge_jobs)
                if (tags.huge_class[size_t(h)] == tags.machine_class[size_t(mach)]) {
                    const Rational& t = p[size_t(h)][size_t(mach)];
                    if (!have_h || t < huge_min) {
                        huge_min = t;
                        have_h = true;
                    }
                }
            for (int j : u_jobs) {
                const Rational& t = p[size_t(j)][size_t(mach)];
                if (!have_u || t < u_min) {
                    u_min = t;
                    have_u = true;
                }
            }
            for (int j : v_jobs) {
                const Rational& t = p[size_t(j)][size_t(mach)];
                if (found_v == 0 || t < v1) {
                    v2 = found_v ? v1 : v2;
                    v1 = t;
                    ++found_v;
                } else if (found_v == 1 || t < v2) {
                    v2 = t;
                    ++found_v;
                }
            }
            if (!have_h)
                return;
            Rational base = huge_min;
            if (tags.machine_class[size_t(mach)] == MachClass::Clause) {
                if (!have_u)
                    return;
                base += u_min;
            }
            if (found_v >= 2 && base + v1 + v2 < threshold)
                return;
        }

        // All guards hold: restrict domains and turn on the slot rules and
        // per-machine reservations.
        for (int j : huge_jobs) {
            std::vector<int> restricted;
            for (int mach : dom[size_t(j)])
                if (tags.machine_class[size_t(mach)] == tags.huge_class[size_t(j)])
                    restricted.push_back(mach);
            dom[size_t(j)] = std::move(restricted);
        }
        for (int j : u_jobs) {
            std::vector<int> restricted;
            for (int mach : dom[size_t(j)])
                if (tags.machine_class[size_t(mach)] == MachClass::Clause)
                    restricted.push_back(mach);
            dom[size_t(j)] = std::move(restricted);
        }
        min_huge.assign(size_t(m), Rational(0));
        min_u.assign(size_t(m), Rational(0));
        min_v.assign(size_t(m), Rational(0));
        has_min_huge.assign(size_t(m), false);
        has_min_u.assign(size_t(m), false);
        has_min_v.assign(size_t(m), false);
        for (int mach = 0; mach < m; ++mach) {
            for (int j : huge_jobs)
                if (tags.huge_class[size_t(j)] == tags.machine_class[size_t(mach)]) {
                    const Rational& t = p[size_t(j)][size_t(mach)];
                    if (!has_min_huge[size_t(mach)] || t < min_huge[size_t(mach)]) {
                        min_huge[size_t(mach)] = t;
                        has_min_huge[size_t(mach)] = true;
                    }
                }
            for (int j : u_jobs) {
                const Rational& t = p[size_t(j)][size_t(mach)];
                if (!has_min_u[size_t(mach)] || t < min_u[size_t(mach)]) {
                    min_u[size_t(mach)] = t;
                    has_min_u[size_t(mach)] = true;
                }
            }
            for (int j : v_jobs) {
                const Rational& t = p[size_t(j)][size_t(mach)];
                if (!has_min_v[size_t(mach)] || t < min_v[size_t(mach)]) {
                    min_v[size_t(mach)] = t;
                    has_min_v[size_t(mach)] = true;
                }
            }
        }
        use_structure = true;
    }

    // Can job j go on machine mach right now? Exact capacity, the structure
    // slot rules, and the reservation that every machine must still fit its
    // outstanding huge / clause / variable job.
    bool placement_ok(int j, int mach) {
        const Rational& t = p[size_t(j)][size_t(mach)];
        Group g = use_structure ? tags.group[size_t(j)] : Group::None;
        if (use_structure) {
            if (g == Group::Huge && slot_huge[size_t(mach)])
                return false;
            if (g == Group::Variable && slot_v[size_t(mach)])
                return false;
            if (g == Group::ClauseJob && slot_u[size_t(mach)])
                return false;
        }
        Rational need = loads[size_t(mach)] + t;
        if (use_structure) {
            if (!slot_huge[size_t(mach)] && g != Group::Huge && has_min_huge[size_t(mach)])
                need += min_huge[size_t(mach)];
            if (tags.machine_class[size_t(mach)] == MachClass::Clause && !slot_u[size_t(mach)] &&
                g != Group::ClauseJob && has_min_u[size_t(mach)])
                need += min_u[size_t(mach)];
            if (!slot_v[size_t(mach)] && g != Group::Variable && has_min_v[size_t(mach)])
                need += min_v[size_t(mach)];
        }
        return need < threshold;
    }

    bool search(int unassigned) {
        if (unassigned == 0)
            return true;
        if (!budget_ok())
            return false;
        // Total-work bound: all loads stay strictly below the threshold.
        if (sum_loads + sum_min_remaining >= total_capacity)
            return false;

        int best_job = -1, best_count = INT_MAX, best_single = -1;
        for (int j = 0; j < n && best_count > 1; ++j) {
            if (assigned[size_t(j)] >= 0)
                continue;
            int count = 0, single = -1;
            for (int mach : dom[size_t(j)]) {
                if (placement_ok(j, mach)) {
                    if (count == 0)
                        single = mach;
                    if (++count >= best_count)
                        break;
                }
            }
            if (count < best_count) {
                best_count = count;
                best_job = j;
                best_single = single;
            }
            if (best_count == 0)
                return false;
        }
        (void)best_single;

        int j = best_job;
        for (int mach : dom[size_t(j)]) {
            if (!placement_ok(j, mach))
                continue;
            ++nodes;
            const Rational& t = p[size_t(j)][size_t(mach)];
            loads[size_t(mach)] += t;
            sum_loads += t;
            sum_min_remaining -= static_min[size_t(j)];
            assigned[size_t(j)] = mach;
            Group g = use_structure ? tags.group[size_t(j)] : Group::None;
            if (g == Group::Huge)
                slot_huge[size_t(mach)] = 1;
            else if (g == Group::ClauseJob)
                slot_u[size_t(mach)] = 1;
            else if (g == Group::Variable)
                slot_v[size_t(mach)] = 1;

            if (search(unassigned - 1))
                return true;

            if (g == Group::Huge)
                slot_huge[size_t(mach)] = 0;
            else if (g == Group::ClauseJob)
                slot_u[size_t(mach)] = 0;
            else if (g == Group::Variable)
                slot_v[size_t(mach)] = 0;
            assigned[size_t(j)] = -1;
            sum_min_remaining += static_min[size_t(j)];
            sum_loads -= t;
            loads[size_t(mach)] -= t;
            if (out_of_budget)
                return false;
        }
        return false;
    }
};

} // namespace

SolveOutcome decide(const LrsInstance& inst, const Rational& threshold, const SolveBudget& budget,
                    SolveMode mode) {
    validate(inst);
    budget.validate();
    if (!(threshold > Rational(0)))
        throw MathError("decision threshold must be positive");

    SolveOutcome out;
    if (inst.jobs.empty()) {
        out.status = SolveStatus::Feasible;
        out.schedule = Schedule{};
        return out;
    }
    if (inst.machines.empty()) {
        out.status = SolveStatus::Infeasible;
        return out;
    }

    DecideSearch ctx(inst, threshold, budget);
    ctx.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(budget.time_limit_seconds));
    ctx.p.resize(size_t(ctx.n));
    ctx.dom.resize(size_t(ctx.n));
    ctx.static_min.resize(size_t(ctx.n));
    for (int j = 0; j < ctx.n; ++j) {
        ctx.p[size_t(j)].reserve(size_t(ctx.m));
        for (int mach = 0; mach < ctx.m; ++mach)
            ctx.p[size_t(j)].push_back(processing_time(inst, mach, j));
        for (int mach = 0; mach < ctx.m; ++mach)
            if (ctx.p[size_t(j)][size_t(mach)] < threshold)
                ctx.dom[size_t(j)].push_back(mach);
        if (ctx.dom[size_t(j)].empty()) {
            out.status = SolveStatus::Infeasible;
            return out;
        }
    }
    if (mode == SolveMode::StructureAware) {
        ctx.tags = parse_tags(inst);
        ctx.apply_structure_deductions();
        for (int j = 0; j < ctx.n; ++j)
            if (ctx.dom[size_t(j)].empty()) {
                out.status = SolveStatus::Infeasible;
                return out;
            }
    }
    for (int j = 0; j < ctx.n; ++j) {
        Rational mn;
        bool first = true;
        for (int mach : ctx.dom[size_t(j)]) {
            if (first || ctx.p[size_t(j)][size_t(mach)] < mn) {
                mn = ctx.p[size_t(j)][size_t(mach)];
                first = false;
            }
        }
        ctx.static_min[size_t(j)] = mn;
        ctx.sum_min_remaining += mn;
    }
    ctx.loads.assign(size_t(ctx.m), Rational(0));
    ctx.assigned.assign(size_t(ctx.n), -1);
    ctx.slot_huge.assign(size_t(ctx.m), 0);
    ctx.slot_u.assign(size_t(ctx.m), 0);
    ctx.slot_v.assign(size_t(ctx.m), 0);
    ctx.total_capacity = Rational(ctx.m) * threshold;

    bool found = ctx.search(ctx.n);
    out.nodes_explored = ctx.nodes;
    if (ctx.out_of_budget) {
        out.status = SolveStatus::BudgetExceeded;
        return out;
    }
    if (!found) {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    Schedule s;
    for (int j = 0; j < ctx.n; ++j)
        s.assignment[inst.jobs[size_t(j)].id] = inst.machines[size_t(ctx.assigned[size_t(j)])].id;
    if (!(makespan(inst, s) < threshold))
        throw StructureError("solver returned a schedule violating the threshold");
    out.status = SolveStatus::Feasible;
    out.schedule = std::move(s);
    return out;
}

OptimizeOutcome optimize(const LrsInstance& inst, const SolveBudget& budget) {
    validate(inst);
    budget.validate();
    OptimizeOutcome out;
    if (inst.jobs.empty()) {
        out.status = SolveStatus::Feasible;
        out.schedule = Schedule{};
        out.value = Rational(0);
        return out;
    }
    if (inst.machines.empty())
        throw StructureError("no machines to schedule onto");

    int m = int(inst.machines.size());
    int n = int(inst.jobs.size());
    std::vector<std::vector<Rational>> p(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        for (int mach = 0; mach < m; ++mach)
            p[size_t(j)].push_back(processing_time(inst, mach, j));

    // Static job order: hardest first (largest minimum time), ties by index.
    std::vector<int> order(static_cast<size_t>(n));
    std::vector<Rational> min_time(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        order[size_t(j)] = j;
        min_time[size_t(j)] = *std::min_element(p[size_t(j)].begin(), p[size_t(j)].end());
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return min_time[size_t(b)] < min_time[size_t(a)]; });
    std::vector<Rational> suffix_min(static_cast<size_t>(n) + 1);
    for (int idx = n - 1; idx >= 0; --idx)
        suffix_min[size_t(idx)] = suffix_min[size_t(idx) + 1] + min_time[size_t(order[size_t(idx)])];

    Schedule incumbent = greedy(inst);
    Rational best = makespan(inst, incumbent);
    std::vector<int> choice(size_t(n), -1);
    std::vector<Rational> loads(static_cast<size_t>(m));
    Rational sum_loads;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget.time_limit_seconds));
    Rational m_rat(m);

    std::function<void(int)> walk = [&](int idx) {
        if (out_of_budget)
            return;
        if (nodes >= budget.node_limit ||
            (nodes % 1024 == 0 && std::chrono::steady_clock::now() > deadline)) {
            out_of_budget = true;
            return;
        }
        if (idx == n) {
            // Every load is < best by construction.
            Rational value;
            for (const Rational& l : loads)
                if (l > value)
                    value = l;
            best = value;
            Schedule s;
            for (int j = 0; j < n; ++j)
                s.assignment[inst.jobs[size_t(j)].id] = inst.machines[size_t(choice[size_t(j)])].id;
            incumbent = std::move(s);
            return;
        }
        // Average-load bound.
        if (sum_loads + suffix_min[size_t(idx)] >= m_rat * best)
            return;
        int j = order[size_t(idx)];
        for (int mach = 0; mach < m; ++mach) {
            Rational next = loads[size_t(mach)] + p[size_t(j)][size_t(mach)];
            if (!(next < best))
                continue;
            ++nodes;
            Rational saved = loads[size_t(mach)];
            loads[size_t(mach)] = next;
            sum_loads += p[size_t(j)][size_t(mach)];
            choice[size_t(j)] = mach;
            walk(idx + 1);
            choice[size_t(j)] = -1;
            sum_loads -= p[size_t(j)][size_t(mach)];
            loads[size_t(mach)] = saved;
            if (out_of_budget)
                return;
        }
    };
    walk(0);

    out.nodes_explored = nodes;
    if (out_of_budget) {
        out.status = SolveStatus::BudgetExceeded;
        return out;
    }
    out.status = SolveStatus::Feasible;
    out.schedule = incumbent;
    out.value = best;
    return out;
}

} // namespace gf

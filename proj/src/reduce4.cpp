#include "gf/reduce4.hpp"

#include <algorithm>
#include <thread>

namespace gf {

void Reduce4Params::validate() const {
    Rational eps = epsilon;
    if (!(Rational(0) < eps && eps < rat(1, 6)))
        throw StructureError("epsilon must lie in (0, 1/6)");
    if (n_scale < 1)
        throw StructureError("N must be positive");
    Rational N(n_scale);
    if (!(N >= Rational(1) / (eps * eps)))
        throw StructureError("need N >= 1/eps^2");
    if (!(eps * N >= Rational(4)))
        throw StructureError("need eps*N >= 4");
}

Reduce4Params default_params4(int n, const Rational& epsilon) {
    Reduce4Params p;
    p.epsilon = epsilon;
    Rational need = Rational(3 * n) / (epsilon * epsilon);
    long N = 64;
    while (Rational(N) < need)
        N *= 2;
    p.n_scale = N;
    p.validate();
    return p;
}

namespace {

// 1-based cycle position of an index inside its triple: 1, 2 or 3.
int triple_pos(int i) { return (i - 1) % 3 + 1; }

// The table rows are written for triples {3i, 3i+1, 3i+2}; this maps them by
// cycle position onto the 1-based triples {3k+1, 3k+2, 3k+3} that the formal
// zeta definition uses.
struct Vectors {
    Rational eps;
    Rational N;

    Rational np(long e) const { return pow_int(N, e); }

    std::vector<Rational> straight_speed(int q) const {
        switch (triple_pos(q)) {
        case 1: return {np(q), np(-q), np(-q), np(-q - 1)};
        case 2: return {np(q), np(-q), np(-q), Rational(2) * np(-q + 1)};
        default: return {np(q), np(-q), np(-q), Rational(2) / eps * np(-q + 1)};
        }
    }
    std::vector<Rational> cyclic_speed(int q) const {
        switch (triple_pos(q)) {
        case 1: return {np(-q), np(q), eps * np(-q), np(-q)};
        case 2: return {np(-q), np(q), np(-q), Rational(1) / eps * np(-q)};
        default: return {np(-q), np(q), np(-q), Rational(2) * np(-q + 1)};
        }
    }
    std::vector<Rational> pair_speed(bool w_positive, int i, int j, long nval) const {
        if (w_positive)
            return {np(i), np(-i), np(j + nval), np(-j - nval)};
        return {np(-i), np(i), np(j + nval), np(-j - nval)};
    }

    std::vector<Rational> w_size(int i) const { return {np(-i), np(i), Rational(0), Rational(0)}; }
    std::vector<Rational> wbar_size(int i) const { return {np(i), np(-i), Rational(0), Rational(0)}; }
    std::vector<Rational> pair_size(int j, long nval) const {
        return {Rational(0), Rational(0), rat(1, 2) * np(-j - nval), rat(1, 2) * np(j + nval)};
    }
    std::vector<Rational> a_size(int i) const { return {np(-i), np(-i), eps * np(i), Rational(0)}; }
    std::vector<Rational> b_size(int q) const {
        switch (triple_pos(q)) {
        case 1: return {eps * np(-q), eps * np(-q - 2), rat(1, 2) * np(q), rat(1, 2) * np(q + 1)};
        case 2:
            return {eps * np(-q), Rational(1) / eps * np(-q), rat(1, 2) / eps * np(q - 1),
                    rat(1, 2) * np(q - 1)};
        default:
            return {eps * np(-q), eps * np(-q + 1), rat(1, 2) * np(q - 1), eps / Rational(2) * np(q - 1)};
        }
    }
};

// Unified pair index: s_j keeps j, u_k sits at |C1|+k. The s and u elements
// play the same role in the tables.
int pair_index(const TdmInstance& tdm, const Element& e) {
    if (e.kind == ElemKind::S || e.kind == ElemKind::Sp)
        return e.index;
    return tdm.c1_size + e.index;
}

std::string match_str(const Match& t) {
    return "(" + elem_id(t.w) + "," + elem_id(t.x) + "," + elem_id(t.y) + ")";
}

std::vector<Rational> machine_speed(const Vectors& v, const TdmInstance& tdm, const Match& t, long nval) {
    if (t.x.kind == ElemKind::A) {
        int q = t.x.index;
        return t.w.kind == ElemKind::W ? v.straight_speed(q) : v.cyclic_speed(q);
    }
    return v.pair_speed(t.w.kind == ElemKind::W, t.w.index, pair_index(tdm, t.x), nval);
}

std::vector<Rational> element_size(const Vectors& v, const TdmInstance& tdm, const Element& e, long nval) {
    switch (e.kind) {
    case ElemKind::W: return v.w_size(e.index);
    case ElemKind::Wbar: return v.wbar_size(e.index);
    case ElemKind::S:
    case ElemKind::Sp:
    case ElemKind::U:
    case ElemKind::Up: return v.pair_size(pair_index(tdm, e), nval);
    case ElemKind::A: return v.a_size(e.index);
    case ElemKind::B: return v.b_size(e.index);
    }
    throw StructureError("bad element kind");
}

bool match_contains(const Match& t, const Element& e) {
    return t.w == e || t.x == e || t.y == e;
}

} // namespace

GadgetInstance4 build_lrs4(const TdmInstance& tdm, const Reduce4Params& p) {
    p.validate();
    validate(tdm);
    GadgetInstance4 g;
    g.tdm = tdm;
    g.params = p;
    g.lrs.d = 4;

    Vectors v{p.epsilon, Rational(p.n_scale)};
    long nval = p.n_scale;

    // One machine per match, in global match order.
    for (int id = 0; id < tdm.match_count(); ++id) {
        const Match& t = tdm.match(id);
        g.lrs.machines.push_back({match_str(t), machine_speed(v, tdm, t, nval)});
        g.match_of_machine.push_back(id);
    }

    // One real job per element of X u Y.
    int n3 = 3 * tdm.n;
    int u_count = n3 - tdm.c1_size;
    std::vector<Element> reals;
    for (int j = 1; j <= tdm.c1_size; ++j)
        reals.push_back({ElemKind::S, j});
    for (int i = 1; i <= n3; ++i)
        reals.push_back({ElemKind::A, i});
    for (int k = 1; k <= u_count; ++k)
        reals.push_back({ElemKind::U, k});
    for (int j = 1; j <= tdm.c1_size; ++j)
        reals.push_back({ElemKind::Sp, j});
    for (int i = 1; i <= n3; ++i)
        reals.push_back({ElemKind::B, i});
    for (int k = 1; k <= u_count; ++k)
        reals.push_back({ElemKind::Up, k});
    for (const Element& e : reals) {
        g.lrs.jobs.push_back({elem_id(e), element_size(v, tdm, e, nval)});
        g.element_of_job.push_back(e);
    }

    // d(w)-1 dummy jobs per W element.
    auto push_dummies = [&](const Element& e) {
        int d = 0;
        for (int id = 0; id < tdm.match_count(); ++id)
            if (tdm.match(id).w == e)
                ++d;
        for (int k = 1; k < d; ++k) {
            g.lrs.jobs.push_back({elem_id(e) + "#" + std::to_string(k), element_size(v, tdm, e, nval)});
            g.element_of_job.push_back(e);
        }
    };
    for (int i = 1; i <= n3; ++i)
        push_dummies({ElemKind::W, i});
    for (int i = 1; i <= n3; ++i)
        push_dummies({ElemKind::Wbar, i});

    nlohmann::json mom = nlohmann::json::object();
    for (size_t m = 0; m < g.lrs.machines.size(); ++m) {
        const Match& t = tdm.match(g.match_of_machine[m]);
        mom[g.lrs.machines[m].id] = {elem_id(t.w), elem_id(t.x), elem_id(t.y)};
    }
    g.lrs.meta = {{"family", "rank4"},
                  {"epsilon", p.epsilon.str()},
                  {"N", std::to_string(p.n_scale)},
                  {"match_of_machine", mom}};

    validate(g.lrs);
    if (!all_nonnegative(g.lrs))
        throw StructureError("rank-4 gadget has a negative coordinate");
    return g;
}

TimeClass classify_time(const GadgetInstance4& inst, int machine, int job) {
    const Match& t = inst.tdm.match(inst.match_of_machine[size_t(machine)]);
    const Element& e = inst.element_of_job[size_t(job)];
    Rational time = processing_time(inst.lrs, machine, job);
    bool contains = match_contains(t, e);
    bool w_side = e.kind == ElemKind::W || e.kind == ElemKind::Wbar;
    if (w_side && contains && time == Rational(2))
        return TimeClass::WMatched;
    if (!w_side && contains && time <= Rational(1) + Rational(6) * inst.params.epsilon)
        return TimeClass::Matched;
    if (!contains && time >= Rational(3))
        return TimeClass::Blocked;
    throw CertificateError("unclassifiable pair: job " + elem_id(e) + " on machine " + match_str(t) +
                           " has exact time " + time.str());
}

TimeClass classify_time(const GadgetInstance4& inst, const std::string& machine, const std::string& job) {
    return classify_time(inst, inst.lrs.machine_index(machine), inst.lrs.job_index(job));
}

Schedule schedule_from_matching(const GadgetInstance4& inst, const Matching& m) {
    if (!verify_matching(inst.tdm, m))
        throw WitnessError("matching is not perfect");

    std::vector<bool> selected(size_t(inst.tdm.match_count()), false);
    for (int id : m.match_ids)
        selected[size_t(id)] = true;

    Schedule s;
    // Real jobs ride their matched machines (M1).
    for (int id : m.match_ids) {
        const Match& t = inst.tdm.match(id);
        const std::string& machine = inst.lrs.machines[size_t(id)].id;
        s.assignment[elem_id(t.x)] = machine;
        s.assignment[elem_id(t.y)] = machine;
    }
    // One W dummy job onto every remaining machine (M2), in machine order.
    std::map<std::string, int> next_dummy;
    for (int id = 0; id < inst.tdm.match_count(); ++id) {
        if (selected[size_t(id)])
            continue;
        const Match& t = inst.tdm.match(id);
        int k = ++next_dummy[elem_id(t.w)];
        s.assignment[elem_id(t.w) + "#" + std::to_string(k)] = inst.lrs.machines[size_t(id)].id;
    }

    Rational cap = Rational(2) + Rational(6) * inst.params.epsilon;
    Rational ms = makespan(inst.lrs, s);
    if (!(ms <= cap))
        throw StructureError("completeness schedule has makespan " + ms.str() + " > 2+6eps");
    return s;
}

Matching matching_from_schedule(const GadgetInstance4& inst, const Schedule& s) {
    validate(inst.lrs, s);
    Rational ms = makespan(inst.lrs, s);
    if (!(ms < Rational(3)))
        throw SoundnessError("schedule has makespan " + ms.str() + " >= 3");

    size_t machines = inst.lrs.machines.size();
    std::vector<int> jobs_on(machines, 0);
    std::vector<int> w_jobs_on(machines, 0);
    for (size_t j = 0; j < inst.lrs.jobs.size(); ++j) {
        int m = inst.lrs.machine_index(s.assignment.at(inst.lrs.jobs[j].id));
        // A blocked placement would contradict the makespan bound.
        if (classify_time(inst, m, int(j)) == TimeClass::Blocked)
            throw SoundnessError("blocked placement of job " + inst.lrs.jobs[j].id + " on machine " +
                                 inst.lrs.machines[size_t(m)].id);
        ++jobs_on[size_t(m)];
        ElemKind k = inst.element_of_job[j].kind;
        if (k == ElemKind::W || k == ElemKind::Wbar)
            ++w_jobs_on[size_t(m)];
    }

    Matching out;
    for (size_t m = 0; m < machines; ++m) {
        if (w_jobs_on[m] > 0 && jobs_on[m] > 1)
            throw SoundnessError("a W job shares machine " + inst.lrs.machines[m].id +
                                 " with another job");
        if (w_jobs_on[m] == 0)
            out.match_ids.push_back(inst.match_of_machine[m]);
    }
    if (int(out.match_ids.size()) != 6 * inst.tdm.n)
        throw SoundnessError("machines without W jobs count " + std::to_string(out.match_ids.size()) +
                             ", expected 6n");
    if (!verify_matching(inst.tdm, out))
        throw SoundnessError("extracted match set is not a perfect matching");
    return out;
}

nlohmann::json Cert4Report::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["pairs_checked"] = pairs_checked;
    if (has_blocked)
        j["min_blocked"] = min_blocked.str();
    if (has_matched)
        j["max_matched"] = max_matched.str();
    j["violations"] = violations;
    return j;
}

Cert4Report certify_inequalities4(const Reduce4Params& p, int n, int workers) {
    p.validate();
    if (n < 1)
        throw StructureError("need n >= 1");
    Vectors v{p.epsilon, Rational(p.n_scale)};
    long nval = p.n_scale;
    int n3 = 3 * n;

    // The full family grid: every pair machine (w_i / wbar_i against pair
    // index j), the whole fixed T2 block, and one job per element family and
    // index. Any reduction output over this n uses a subset of these exact
    // vectors, with u elements reusing the s rows at shifted pair indices.
    struct Mach {
        Match match;
        std::vector<Rational> speed;
    };
    std::vector<Mach> machs;
    for (int i = 1; i <= n3; ++i)
        for (int j = 1; j <= n3; ++j) {
            machs.push_back({{{ElemKind::W, i}, {ElemKind::S, j}, {ElemKind::Sp, j}},
                             v.pair_speed(true, i, j, nval)});
            machs.push_back({{{ElemKind::Wbar, i}, {ElemKind::S, j}, {ElemKind::Sp, j}},
                             v.pair_speed(false, i, j, nval)});
        }
    for (int q = 1; q <= n3; ++q) {
        machs.push_back({{{ElemKind::W, q}, {ElemKind::A, q}, {ElemKind::B, q}}, v.straight_speed(q)});
        machs.push_back(
            {{{ElemKind::Wbar, q}, {ElemKind::A, q}, {ElemKind::B, zeta(q)}}, v.cyclic_speed(q)});
    }

    struct JobRow {
        Element elem;
        std::vector<Rational> size;
    };
    std::vector<JobRow> jobs;
    for (int j = 1; j <= n3; ++j) {
        jobs.push_back({{ElemKind::S, j}, v.pair_size(j, nval)});
        jobs.push_back({{ElemKind::Sp, j}, v.pair_size(j, nval)});
    }
    for (int i = 1; i <= n3; ++i) {
        jobs.push_back({{ElemKind::A, i}, v.a_size(i)});
        jobs.push_back({{ElemKind::B, i}, v.b_size(i)});
        jobs.push_back({{ElemKind::W, i}, v.w_size(i)});
        jobs.push_back({{ElemKind::Wbar, i}, v.wbar_size(i)});
    }

    Rational matched_cap = Rational(1) + Rational(6) * p.epsilon;

    auto classify_chunk = [&](size_t begin, size_t end, Cert4Report* r) {
        for (size_t mi = begin; mi < end; ++mi) {
            for (const JobRow& job : jobs) {
                Rational time = dot(machs[mi].speed, job.size);
                bool contains = match_contains(machs[mi].match, job.elem);
                bool w_side = job.elem.kind == ElemKind::W || job.elem.kind == ElemKind::Wbar;
                ++r->pairs_checked;
                if (contains && w_side) {
                    if (time != Rational(2)) {
                        r->ok = false;
                        r->violations.push_back("W pair " + elem_id(job.elem) + " on " +
                                                match_str(machs[mi].match) + " has time " + time.str() +
                                                ", want exactly 2");
                    }
                } else if (contains) {
                    if (!r->has_matched || time > r->max_matched) {
                        r->max_matched = time;
                        r->has_matched = true;
                    }
                    if (!(time <= matched_cap)) {
                        r->ok = false;
                        r->violations.push_back("matched pair " + elem_id(job.elem) + " on " +
                                                match_str(machs[mi].match) + " has time " + time.str() +
                                                " > 1+6eps");
                    }
                } else {
                    if (!r->has_blocked || time < r->min_blocked) {
                        r->min_blocked = time;
                        r->has_blocked = true;
                    }
                    if (!(time >= Rational(3))) {
                        r->ok = false;
                        r->violations.push_back("blocked pair " + elem_id(job.elem) + " on " +
                                                match_str(machs[mi].match) + " has time " + time.str() +
                                                " < 3");
                    }
                }
            }
        }
    };

    workers = std::clamp(workers, 1, int(machs.size()));
    std::vector<Cert4Report> parts(static_cast<size_t>(workers));
    if (workers == 1) {
        classify_chunk(0, machs.size(), &parts[0]);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (machs.size() + size_t(workers) - 1) / size_t(workers);
        for (int w = 0; w < workers; ++w) {
            size_t begin = size_t(w) * chunk;
            size_t end = std::min(machs.size(), begin + chunk);
            if (begin < end)
                pool.emplace_back(classify_chunk, begin, end, &parts[size_t(w)]);
        }
        for (auto& t : pool)
            t.join();
    }

    // Order-independent merge: min/max over exact values, violations sorted.
    Cert4Report r;
    for (const Cert4Report& part : parts) {
        r.ok = r.ok && part.ok;
        r.pairs_checked += part.pairs_checked;
        if (part.has_blocked && (!r.has_blocked || part.min_blocked < r.min_blocked)) {
            r.min_blocked = part.min_blocked;
            r.has_blocked = true;
        }
        if (part.has_matched && (!r.has_matched || part.max_matched > r.max_matched)) {
            r.max_matched = part.max_matched;
            r.has_matched = true;
        }
        r.violations.insert(r.violations.end(), part.violations.begin(), part.violations.end());
    }
    std::sort(r.violations.begin(), r.violations.end());
    return r;
}

} // namespace gf

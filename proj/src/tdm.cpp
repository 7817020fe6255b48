#include "gf/tdm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <climits>
#include <cstdlib>
#include <functional>

#include "json.hpp"

namespace gf {

std::string elem_id(const Element& e) {
    static const char* prefix[] = {"w", "wbar", "s", "sp", "a", "b", "u", "up"};
    return std::string(prefix[size_t(e.kind)]) + std::to_string(e.index);
}

Element elem_from_id(const std::string& id) {
    static const std::pair<const char*, ElemKind> table[] = {
        {"wbar", ElemKind::Wbar}, {"w", ElemKind::W}, {"sp", ElemKind::Sp}, {"s", ElemKind::S},
        {"a", ElemKind::A},       {"b", ElemKind::B}, {"up", ElemKind::Up}, {"u", ElemKind::U},
    };
    for (const auto& [p, kind] : table) {
        size_t len = std::string(p).size();
        if (id.size() > len && id.compare(0, len, p) == 0 &&
            std::all_of(id.begin() + long(len), id.end(), [](char c) { return std::isdigit(c); })) {
            return Element{kind, std::stoi(id.substr(len))};
        }
    }
    throw ParseError("bad element id '" + id + "'");
}

int zeta(int i) {
    int pos = (i - 1) % 3;
    return pos < 2 ? i + 1 : i - 2;
}

const Match& TdmInstance::match(int id) const {
    if (id < 0 || id >= match_count())
        throw StructureError("dangling match id " + std::to_string(id));
    if (size_t(id) < t1.size())
        return t1[size_t(id)];
    return t2[size_t(id) - t1.size()];
}

namespace {

// Dense element numbering over the 18n universe, in three blocks of 6n.
int elem_slot(const TdmInstance& inst, const Element& e) {
    int n3 = 3 * inst.n;
    int u_count = n3 - inst.c1_size;
    auto in_range = [&](int hi) {
        if (e.index < 1 || e.index > hi)
            throw StructureError("element " + elem_id(e) + " out of range");
    };
    switch (e.kind) {
    case ElemKind::W: in_range(n3); return e.index - 1;
    case ElemKind::Wbar: in_range(n3); return n3 + e.index - 1;
    case ElemKind::S: in_range(inst.c1_size); return 6 * inst.n + e.index - 1;
    case ElemKind::A: in_range(n3); return 6 * inst.n + inst.c1_size + e.index - 1;
    case ElemKind::U: in_range(u_count); return 6 * inst.n + inst.c1_size + n3 + e.index - 1;
    case ElemKind::Sp: in_range(inst.c1_size); return 12 * inst.n + e.index - 1;
    case ElemKind::B: in_range(n3); return 12 * inst.n + inst.c1_size + e.index - 1;
    case ElemKind::Up: in_range(u_count); return 12 * inst.n + inst.c1_size + n3 + e.index - 1;
    }
    throw StructureError("bad element kind");
}

bool is_w_side(ElemKind k) { return k == ElemKind::W || k == ElemKind::Wbar; }

} // namespace

void validate(const TdmInstance& inst) {
    if (inst.n < 1)
        throw StructureError("instance needs n >= 1");
    if (inst.c1_size < 0 || inst.c1_size > 3 * inst.n)
        throw StructureError("|C1| must lie in [0, 3n]");
    if (!inst.t1_origin.empty() && inst.t1_origin.size() != inst.t1.size())
        throw StructureError("t1 provenance size mismatch");

    for (const Match& t : inst.t1) {
        if (!is_w_side(t.w.kind))
            throw StructureError("t1 match w-component is not a W element");
        bool s_pair = t.x.kind == ElemKind::S && t.y.kind == ElemKind::Sp && t.x.index == t.y.index;
        bool u_pair = t.x.kind == ElemKind::U && t.y.kind == ElemKind::Up && t.x.index == t.y.index;
        if (!s_pair && !u_pair)
            throw StructureError("t1 match " + elem_id(t.w) + "," + elem_id(t.x) + "," + elem_id(t.y) +
                                 " does not pair equal-index s/s' or u/u' elements");
        elem_slot(inst, t.w);
        elem_slot(inst, t.x);
        elem_slot(inst, t.y);
    }

    // T2 is the fixed pattern: (w_i, a_i, b_i) and (wbar_i, a_i, b_zeta(i)).
    int n3 = 3 * inst.n;
    if (int(inst.t2.size()) != 6 * inst.n)
        throw StructureError("|T2| must be 6n");
    std::vector<bool> straight(size_t(n3), false), cyclic(size_t(n3), false);
    for (const Match& t : inst.t2) {
        if (t.x.kind != ElemKind::A || t.y.kind != ElemKind::B)
            throw StructureError("t2 match must use a/b elements");
        int i = t.x.index;
        elem_slot(inst, t.x);
        if (t.w.kind == ElemKind::W && t.w.index == i && t.y.index == i && !straight[size_t(i - 1)])
            straight[size_t(i - 1)] = true;
        else if (t.w.kind == ElemKind::Wbar && t.w.index == i && t.y.index == zeta(i) &&
                 !cyclic[size_t(i - 1)])
            cyclic[size_t(i - 1)] = true;
        else
            throw StructureError("t2 match (" + elem_id(t.w) + "," + elem_id(t.x) + "," + elem_id(t.y) +
                                 ") is outside the fixed pattern");
    }
}

TdmInstance reduce_sat_to_3dm(const StructuredCnf& s) {
    validate(s);
    TdmInstance inst;
    inst.n = s.triple_count;
    inst.c1_size = int(s.c1.size());
    int n3 = 3 * inst.n;
    if (inst.c1_size > n3)
        throw StructureError("|C1| = " + std::to_string(inst.c1_size) + " exceeds 3n = " +
                             std::to_string(n3));
    int u_count = n3 - inst.c1_size;

    // Real matches: literal z_i (or ~z_i) in the j-th clause of C1.
    for (int j = 1; j <= inst.c1_size; ++j) {
        const Clause& clause = s.base.clauses[size_t(s.c1[size_t(j - 1)])];
        for (int lit : clause) {
            Element w{lit > 0 ? ElemKind::W : ElemKind::Wbar, std::abs(lit)};
            inst.t1.push_back({w, {ElemKind::S, j}, {ElemKind::Sp, j}});
            inst.t1_origin.push_back(MatchOrigin{j, lit});
        }
    }
    // Dummy u matches for every W element and every u index.
    for (int i = 1; i <= n3; ++i)
        for (int k = 1; k <= u_count; ++k) {
            inst.t1.push_back({{ElemKind::W, i}, {ElemKind::U, k}, {ElemKind::Up, k}});
            inst.t1_origin.push_back(std::nullopt);
        }
    for (int i = 1; i <= n3; ++i)
        for (int k = 1; k <= u_count; ++k) {
            inst.t1.push_back({{ElemKind::Wbar, i}, {ElemKind::U, k}, {ElemKind::Up, k}});
            inst.t1_origin.push_back(std::nullopt);
        }
    // T2: straight block then cyclic block.
    for (int i = 1; i <= n3; ++i)
        inst.t2.push_back({{ElemKind::W, i}, {ElemKind::A, i}, {ElemKind::B, i}});
    for (int i = 1; i <= n3; ++i)
        inst.t2.push_back({{ElemKind::Wbar, i}, {ElemKind::A, i}, {ElemKind::B, zeta(i)}});

    inst.source = s;
    validate(inst);
    return inst;
}

bool verify_matching(const TdmInstance& inst, const Matching& m) {
    std::vector<int> cover(size_t(18 * inst.n), 0);
    for (int id : m.match_ids) {
        const Match& t = inst.match(id); // throws on dangling ids
        ++cover[size_t(elem_slot(inst, t.w))];
        ++cover[size_t(elem_slot(inst, t.x))];
        ++cover[size_t(elem_slot(inst, t.y))];
    }
    if (int(m.match_ids.size()) != 6 * inst.n)
        return false;
    return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
}

std::optional<Matching> brute_force_perfect_matching(const TdmInstance& inst) {
    validate(inst);
    if (6 * inst.n > 24)
        throw BudgetError("matching oracle limited to 6n <= 24 elements per set");

    int slots = 18 * inst.n;
    std::vector<std::vector<int>> matches_of(static_cast<size_t>(slots));
    std::vector<std::array<int, 3>> match_slots(static_cast<size_t>(inst.match_count()));
    for (int id = 0; id < inst.match_count(); ++id) {
        const Match& t = inst.match(id);
        match_slots[size_t(id)] = {elem_slot(inst, t.w), elem_slot(inst, t.x), elem_slot(inst, t.y)};
        for (int s : match_slots[size_t(id)])
            matches_of[size_t(s)].push_back(id);
    }

    std::vector<bool> covered(size_t(slots), false);
    std::vector<int> chosen;
    chosen.reserve(size_t(6 * inst.n));

    auto available = [&](int id) {
        const auto& ms = match_slots[size_t(id)];
        return !covered[size_t(ms[0])] && !covered[size_t(ms[1])] && !covered[size_t(ms[2])];
    };

    std::function<bool()> search = [&]() -> bool {
        int best_slot = -1;
        int best_count = INT_MAX;
        for (int s = 0; s < slots; ++s) {
            if (covered[size_t(s)])
                continue;
            int count = 0;
            for (int id : matches_of[size_t(s)])
                if (available(id))
                    ++count;
            if (count < best_count) {
                best_count = count;
                best_slot = s;
                if (count == 0)
                    break;
            }
        }
        if (best_slot < 0)
            return true; // everything covered
        if (best_count == 0)
            return false;
        for (int id : matches_of[size_t(best_slot)]) {
            if (!available(id))
                continue;
            for (int s : match_slots[size_t(id)])
                covered[size_t(s)] = true;
            chosen.push_back(id);
            if (search())
                return true;
            chosen.pop_back();
            for (int s : match_slots[size_t(id)])
                covered[size_t(s)] = false;
        }
        return false;
    };

    if (!search())
        return std::nullopt;
    Matching m{chosen};
    return m;
}

Matching matching_from_assignment(const TdmInstance& inst, const Assignment& a) {
    validate(inst);
    if (!inst.source)
        throw StructureError("instance carries no source formula");
    const StructuredCnf& s = *inst.source;
    for (size_t c = 0; c < s.base.clauses.size(); ++c) {
        bool sat = false;
        for (int lit : s.base.clauses[c])
            if (a.literal_true(lit))
                sat = true;
        if (!sat)
            throw WitnessError("assignment does not satisfy clause " + std::to_string(c + 1));
    }

    int n3 = 3 * inst.n;
    Matching m;
    // Per triple group: straight block when false, cyclic block when true.
    int t2_base = int(inst.t1.size());
    for (int g = 1; g <= inst.n; ++g) {
        bool val = a.get(3 * g - 2);
        for (int i = 3 * g - 2; i <= 3 * g; ++i)
            m.match_ids.push_back(val ? t2_base + n3 + (i - 1) : t2_base + (i - 1));
    }
    // One real match per C1 clause, from its smallest-variable satisfying literal.
    for (int j = 1; j <= inst.c1_size; ++j) {
        const Clause& clause = s.base.clauses[size_t(s.c1[size_t(j - 1)])];
        int pick = 0;
        for (int lit : clause)
            if (a.literal_true(lit) && (pick == 0 || std::abs(lit) < std::abs(pick)))
                pick = lit;
        Element w{pick > 0 ? ElemKind::W : ElemKind::Wbar, std::abs(pick)};
        int found = -1;
        for (size_t id = 0; id < inst.t1.size(); ++id)
            if (inst.t1[id].w == w && inst.t1[id].x.kind == ElemKind::S && inst.t1[id].x.index == j)
                found = int(id);
        if (found < 0)
            throw StructureError("missing real match for clause " + std::to_string(j));
        m.match_ids.push_back(found);
    }
    if (int(m.match_ids.size()) != n3 + inst.c1_size)
        throw StructureError("completeness selected " + std::to_string(m.match_ids.size()) +
                             " matches, expected 3n+|C1|");

    // Pair the leftover W elements with u/u' indices in ascending order
    // (w_1..w_3n first, then wbar_1..wbar_3n).
    std::vector<bool> w_used(size_t(2 * n3), false);
    for (int id : m.match_ids) {
        const Match& t = inst.match(id);
        int slot = t.w.kind == ElemKind::W ? t.w.index - 1 : n3 + t.w.index - 1;
        w_used[size_t(slot)] = true;
    }
    int next_u = 1;
    for (int slot = 0; slot < 2 * n3; ++slot) {
        if (w_used[size_t(slot)])
            continue;
        Element w = slot < n3 ? Element{ElemKind::W, slot + 1} : Element{ElemKind::Wbar, slot - n3 + 1};
        int found = -1;
        for (size_t id = 0; id < inst.t1.size(); ++id)
            if (inst.t1[id].w == w && inst.t1[id].x.kind == ElemKind::U &&
                inst.t1[id].x.index == next_u)
                found = int(id);
        if (found < 0)
            throw StructureError("missing u-dummy match for " + elem_id(w));
        m.match_ids.push_back(found);
        ++next_u;
    }

    if (!verify_matching(inst, m))
        throw StructureError("completeness construction produced a non-perfect matching");
    return m;
}

Assignment assignment_from_matching(const TdmInstance& inst, const Matching& m) {
    validate(inst);
    if (!verify_matching(inst, m))
        throw SoundnessError("matching is not perfect");

    int n3 = 3 * inst.n;
    int t2_base = int(inst.t1.size());
    std::vector<bool> straight(size_t(n3), false), cyclic(size_t(n3), false);
    for (int id : m.match_ids) {
        if (id < t2_base)
            continue;
        int off = id - t2_base;
        if (off < n3)
            straight[size_t(off)] = true;
        else
            cyclic[size_t(off - n3)] = true;
    }

    Assignment a;
    a.value.assign(size_t(n3) + 1, false);
    for (int g = 1; g <= inst.n; ++g) {
        int all_straight = 0, all_cyclic = 0;
        for (int i = 3 * g - 2; i <= 3 * g; ++i) {
            all_straight += straight[size_t(i - 1)];
            all_cyclic += cyclic[size_t(i - 1)];
        }
        // T2 dichotomy: each group is fully straight or fully cyclic.
        if (!((all_straight == 3 && all_cyclic == 0) || (all_straight == 0 && all_cyclic == 3)))
            throw SoundnessError("group " + std::to_string(g) + " mixes straight and cyclic T2 matches");
        bool val = all_cyclic == 3;
        for (int i = 3 * g - 2; i <= 3 * g; ++i)
            a.value[size_t(i)] = val;
    }

    if (inst.source && !satisfies(inst.source->base, a))
        throw SoundnessError("extracted assignment does not satisfy the source formula");
    return a;
}

std::string tdm_to_json(const TdmInstance& inst) {
    auto match_json = [](const Match& t) {
        return nlohmann::json::array({elem_id(t.w), elem_id(t.x), elem_id(t.y)});
    };
    nlohmann::json j;
    j["n"] = inst.n;
    j["t1"] = nlohmann::json::array();
    for (const Match& t : inst.t1)
        j["t1"].push_back(match_json(t));
    j["t2"] = nlohmann::json::array();
    for (const Match& t : inst.t2)
        j["t2"].push_back(match_json(t));
    return j.dump(2) + "\n";
}

TdmInstance tdm_from_json(const std::string& text) {
    TdmInstance inst;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        inst.n = j.at("n").get<int>();
        auto read = [&](const nlohmann::json& arr, std::vector<Match>& out) {
            for (const auto& t : arr) {
                if (!t.is_array() || t.size() != 3)
                    throw ParseError("match is not a triple");
                out.push_back({elem_from_id(t[0].get<std::string>()),
                               elem_from_id(t[1].get<std::string>()),
                               elem_from_id(t[2].get<std::string>())});
            }
        };
        read(j.at("t1"), inst.t1);
        read(j.at("t2"), inst.t2);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad 3DM JSON: ") + e.what());
    }
    int max_s = 0;
    for (const Match& t : inst.t1)
        if (t.x.kind == ElemKind::S)
            max_s = std::max(max_s, t.x.index);
    inst.c1_size = max_s;
    validate(inst);
    return inst;
}

} // namespace gf

#include "gf/cnf.hpp"

#include <cstdlib>
#include <istream>
#include <sstream>

#include "json.hpp"

namespace gf {

void validate(const CnfInstance& cnf) {
    if (cnf.variable_count < 0)
        throw StructureError("negative variable count");
    for (size_t c = 0; c < cnf.clauses.size(); ++c) {
        if (cnf.clauses[c].empty())
            throw StructureError("clause " + std::to_string(c + 1) + " is empty");
        for (int lit : cnf.clauses[c]) {
            int var = std::abs(lit);
            if (lit == 0 || var > cnf.variable_count)
                throw StructureError("literal " + std::to_string(lit) + " out of range in clause " +
                                     std::to_string(c + 1));
        }
    }
}

std::vector<int> occurrence_counts(const CnfInstance& cnf) {
    std::vector<int> occ(size_t(cnf.variable_count) + 1, 0);
    for (const Clause& c : cnf.clauses)
        for (int lit : c)
            ++occ[size_t(std::abs(lit))];
    return occ;
}

CnfInstance parse_dimacs(std::istream& in) {
    CnfInstance cnf;
    bool have_header = false;
    long declared_clauses = -1;
    Clause current;
    int line_no = 0;
    std::string line;

    auto fail = [&](const std::string& what) {
        throw ParseError("line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c')
            continue;
        if (line[0] == 'p') {
            if (have_header)
                fail("duplicate header");
            std::istringstream hs(line);
            std::string p, fmt;
            long vars = -1, cls = -1;
            hs >> p >> fmt >> vars >> cls;
            if (hs.fail() || fmt != "cnf" || vars < 0 || cls < 0)
                fail("malformed header '" + line + "'");
            std::string trailing;
            if (hs >> trailing)
                fail("malformed header '" + line + "'");
            cnf.variable_count = int(vars);
            declared_clauses = cls;
            have_header = true;
            continue;
        }
        if (!have_header)
            fail("clause data before 'p cnf' header");
        std::istringstream ls(line);
        long lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.empty())
                    fail("empty clause");
                cnf.clauses.push_back(current);
                current.clear();
            } else {
                if (std::abs(lit) > cnf.variable_count)
                    fail("literal " + std::to_string(lit) + " out of range");
                current.push_back(int(lit));
            }
        }
        if (!ls.eof()) {
            std::string tok;
            std::istringstream rs(line);
            while (rs >> tok && (tok[0] == '-' || std::isdigit(tok[0])))
                ;
            fail("unexpected token '" + tok + "'");
        }
    }
    if (!have_header)
        throw ParseError("line " + std::to_string(line_no) + ": missing 'p cnf' header");
    if (!current.empty())
        throw ParseError("line " + std::to_string(line_no) + ": clause not terminated by 0");
    if (long(cnf.clauses.size()) != declared_clauses)
        throw ParseError("line " + std::to_string(line_no) + ": header declares " +
                         std::to_string(declared_clauses) + " clauses, body has " +
                         std::to_string(cnf.clauses.size()));
    validate(cnf);
    return cnf;
}

CnfInstance parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

std::string cnf_to_json(const CnfInstance& cnf) {
    nlohmann::json j;
    j["vars"] = cnf.variable_count;
    j["clauses"] = cnf.clauses;
    return j.dump(2) + "\n";
}

CnfInstance cnf_from_json(const std::string& text) {
    CnfInstance cnf;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        cnf.variable_count = j.at("vars").get<int>();
        cnf.clauses = j.at("clauses").get<std::vector<Clause>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad CNF JSON: ") + e.what());
    }
    validate(cnf);
    return cnf;
}

namespace {

// The common Tovey rewriting; both public variants wrap it.
ToveyResult tovey_normalize(const CnfInstance& input) {
    validate(input);
    std::vector<int> occ = occurrence_counts(input);
    for (int v = 1; v <= input.variable_count; ++v)
        if (occ[size_t(v)] == 0)
            throw StructureError("variable " + std::to_string(v) + " has no occurrences");

    ToveyResult out;
    out.replicas_of.assign(size_t(input.variable_count) + 1, {});
    std::vector<int> base(size_t(input.variable_count) + 1, 0);
    int next = 1;
    for (int v = 1; v <= input.variable_count; ++v) {
        base[size_t(v)] = next;
        int copies = occ[size_t(v)] >= 2 ? occ[size_t(v)] : 1;
        for (int k = 0; k < copies; ++k)
            out.replicas_of[size_t(v)].push_back(next + k);
        next += copies;
    }
    out.cnf.variable_count = next - 1;

    std::vector<int> seen(size_t(input.variable_count) + 1, 0);
    for (const Clause& c : input.clauses) {
        Clause rewritten;
        rewritten.reserve(c.size());
        for (int lit : c) {
            int v = std::abs(lit);
            int replica = occ[size_t(v)] >= 2 ? base[size_t(v)] + seen[size_t(v)] : base[size_t(v)];
            ++seen[size_t(v)];
            rewritten.push_back(lit > 0 ? replica : -replica);
        }
        out.cnf.clauses.push_back(std::move(rewritten));
    }
    for (int v = 1; v <= input.variable_count; ++v) {
        int d = occ[size_t(v)];
        int b = base[size_t(v)];
        if (d == 1) {
            out.cnf.clauses.push_back({b, -b});
        } else {
            for (int k = 0; k < d; ++k) {
                int cur = b + k;
                int nxt = b + (k + 1) % d;
                out.cnf.clauses.push_back({cur, -nxt});
            }
        }
    }

    std::vector<int> check = occurrence_counts(out.cnf);
    for (int v = 1; v <= out.cnf.variable_count; ++v)
        if (check[size_t(v)] != 3)
            throw StructureError("tovey output variable " + std::to_string(v) + " occurs " +
                                 std::to_string(check[size_t(v)]) + " times");
    return out;
}

} // namespace

ToveyResult tovey_exact3(const CnfInstance& input) {
    return tovey_normalize(input);
}

ToveyResult tovey_one_in_three(const CnfInstance& input) {
    validate(input);
    for (size_t c = 0; c < input.clauses.size(); ++c)
        if (input.clauses[c].size() != 3)
            throw StructureError("one-in-three input clause " + std::to_string(c + 1) + " has " +
                                 std::to_string(input.clauses[c].size()) + " literals, want 3");
    ToveyResult out = tovey_normalize(input);

    // Polarity profile: every variable 2 positive + 1 negative or mirrored;
    // clause sizes 2 or 3; n <= m <= 2n so the dummy-job counts downstream
    // stay nonnegative.
    int n = out.cnf.variable_count;
    int m = int(out.cnf.clauses.size());
    std::vector<int> pos(size_t(n) + 1, 0), neg(size_t(n) + 1, 0);
    for (const Clause& c : out.cnf.clauses) {
        if (c.size() != 2 && c.size() != 3)
            throw StructureError("one-in-three output clause size out of range");
        for (int lit : c)
            ++(lit > 0 ? pos : neg)[size_t(std::abs(lit))];
    }
    for (int v = 1; v <= n; ++v) {
        int p = pos[size_t(v)], q = neg[size_t(v)];
        if (!((p == 2 && q == 1) || (p == 1 && q == 2)))
            throw StructureError("variable " + std::to_string(v) + " has polarity profile " +
                                 std::to_string(p) + "+" + std::to_string(q));
    }
    if (!(n <= m && m <= 2 * n))
        throw StructureError("one-in-three output has n=" + std::to_string(n) +
                             ", m=" + std::to_string(m) + " outside n <= m <= 2n");
    return out;
}

void validate(const StructuredCnf& s) {
    validate(s.base);
    int n = s.triple_count;
    if (s.base.variable_count != 3 * n)
        throw StructureError("structured CNF variable count is not 3n");
    std::vector<int> where(s.base.clauses.size(), 0);
    for (int idx : s.c1) {
        if (idx < 0 || size_t(idx) >= s.base.clauses.size() || where[size_t(idx)])
            throw StructureError("bad C1 clause index");
        where[size_t(idx)] = 1;
    }
    for (int idx : s.c2) {
        if (idx < 0 || size_t(idx) >= s.base.clauses.size() || where[size_t(idx)])
            throw StructureError("bad C2 clause index");
        where[size_t(idx)] = 2;
    }
    for (int w : where)
        if (w == 0)
            throw StructureError("C1 and C2 do not partition the clause set");

    // Every variable appears exactly once across C1.
    std::vector<int> occ(size_t(s.base.variable_count) + 1, 0);
    for (int idx : s.c1)
        for (int lit : s.base.clauses[size_t(idx)])
            ++occ[size_t(std::abs(lit))];
    for (int v = 1; v <= s.base.variable_count; ++v)
        if (occ[size_t(v)] != 1)
            throw StructureError("variable " + std::to_string(v) + " occurs " +
                                 std::to_string(occ[size_t(v)]) + " times across C1");

    // C2 must be exactly the 3n cycle clauses.
    if (int(s.c2.size()) != 3 * n)
        throw StructureError("C2 size is not 3n");
    std::vector<bool> found(size_t(3 * n), false);
    auto cycle_slot = [&](const Clause& c) -> int {
        if (c.size() != 2)
            return -1;
        int a = c[0], b = c[1];
        if (a < 0 || b > 0)
            return -1;
        // pattern within group i (1-based): (3i-2 v -(3i-1)), (3i-1 v -3i), (3i v -(3i-2))
        int i = (a + 2) / 3;
        int p = a - 3 * (i - 1); // 1..3
        int expected_neg = p < 3 ? a + 1 : a - 2;
        if (-b != expected_neg)
            return -1;
        return 3 * (i - 1) + (p - 1);
    };
    for (int idx : s.c2) {
        int slot = cycle_slot(s.base.clauses[size_t(idx)]);
        if (slot < 0 || found[size_t(slot)])
            throw StructureError("C2 clause " + std::to_string(idx) + " is not a fresh cycle clause");
        found[size_t(slot)] = true;
    }
}

StructuredCnf tovey_structured(const CnfInstance& input) {
    validate(input);
    std::vector<int> occ = occurrence_counts(input);
    for (int v = 1; v <= input.variable_count; ++v)
        if (occ[size_t(v)] != 3)
            throw StructureError("variable " + std::to_string(v) + " occurs " +
                                 std::to_string(occ[size_t(v)]) + " times, want exactly 3");

    StructuredCnf out;
    int n = input.variable_count;
    out.triple_count = n;
    out.base.variable_count = 3 * n;

    std::vector<int> seen(size_t(n) + 1, 0);
    for (const Clause& c : input.clauses) {
        Clause rewritten;
        rewritten.reserve(c.size());
        for (int lit : c) {
            int v = std::abs(lit);
            int hat = 3 * (v - 1) + 1 + seen[size_t(v)];
            ++seen[size_t(v)];
            rewritten.push_back(lit > 0 ? hat : -hat);
        }
        out.c1.push_back(int(out.base.clauses.size()));
        out.base.clauses.push_back(std::move(rewritten));
    }
    for (int i = 1; i <= n; ++i) {
        int z1 = 3 * i - 2, z2 = 3 * i - 1, z3 = 3 * i;
        for (const Clause& c : {Clause{z1, -z2}, Clause{z2, -z3}, Clause{z3, -z1}}) {
            out.c2.push_back(int(out.base.clauses.size()));
            out.base.clauses.push_back(c);
        }
    }
    validate(out);
    return out;
}

bool satisfies(const CnfInstance& cnf, const Assignment& a) {
    if (a.value.size() != size_t(cnf.variable_count) + 1)
        throw StructureError("assignment is not total");
    for (const Clause& c : cnf.clauses) {
        bool sat = false;
        for (int lit : c)
            if (a.literal_true(lit)) {
                sat = true;
                break;
            }
        if (!sat)
            return false;
    }
    return true;
}

bool check_one_in_three(const CnfInstance& cnf, const Assignment& a) {
    if (a.value.size() != size_t(cnf.variable_count) + 1)
        throw StructureError("assignment is not total");
    for (const Clause& c : cnf.clauses) {
        int trues = 0;
        for (int lit : c)
            if (a.literal_true(lit))
                ++trues;
        if (trues != 1)
            return false;
    }
    return true;
}

namespace {

constexpr int kEnumBudgetVars = 24;

Assignment unpack(uint32_t word, int vars) {
    Assignment a;
    a.value.assign(size_t(vars) + 1, false);
    for (int v = 1; v <= vars; ++v)
        a.value[size_t(v)] = (word >> (vars - v)) & 1u;
    return a;
}

template <typename Pred>
std::optional<Assignment> enumerate_first(const CnfInstance& cnf, Pred&& good) {
    validate(cnf);
    if (cnf.variable_count > kEnumBudgetVars)
        throw BudgetError("brute-force oracle limited to " + std::to_string(kEnumBudgetVars) +
                          " variables, got " + std::to_string(cnf.variable_count));
    uint64_t total = 1ull << cnf.variable_count;
    for (uint64_t word = 0; word < total; ++word) {
        Assignment a = unpack(uint32_t(word), cnf.variable_count);
        if (good(a))
            return a;
    }
    return std::nullopt;
}

} // namespace

std::optional<Assignment> brute_force_sat(const CnfInstance& cnf) {
    validate(cnf);
    if (cnf.variable_count > kEnumBudgetVars)
        throw BudgetError("brute-force oracle limited to " + std::to_string(kEnumBudgetVars) +
                          " variables, got " + std::to_string(cnf.variable_count));
    // Bitmask evaluation: variable v sits at bit (V - v), so the word value
    // enumerates assignments in the documented lexicographic order.
    int vars = cnf.variable_count;
    std::vector<uint32_t> pos(cnf.clauses.size(), 0), neg(cnf.clauses.size(), 0);
    for (size_t c = 0; c < cnf.clauses.size(); ++c)
        for (int lit : cnf.clauses[c]) {
            uint32_t bit = 1u << (vars - std::abs(lit));
            (lit > 0 ? pos : neg)[c] |= bit;
        }
    uint64_t total = 1ull << vars;
    for (uint64_t word = 0; word < total; ++word) {
        bool ok = true;
        for (size_t c = 0; c < cnf.clauses.size(); ++c)
            if ((pos[c] & word) == 0 && (neg[c] & ~word) == 0) {
                ok = false;
                break;
            }
        if (ok)
            return unpack(uint32_t(word), vars);
    }
    return std::nullopt;
}

std::optional<Assignment> brute_force_one_in_three(const CnfInstance& cnf) {
    return enumerate_first(cnf, [&](const Assignment& a) { return check_one_in_three(cnf, a); });
}

} // namespace gf

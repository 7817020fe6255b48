#include "gf/lrs.hpp"

#include <unordered_map>
#include <unordered_set>

namespace gf {

int LrsInstance::machine_index(const std::string& id) const {
    for (size_t i = 0; i < machines.size(); ++i)
        if (machines[i].id == id)
            return int(i);
    throw MathError("unknown machine id '" + id + "'");
}

int LrsInstance::job_index(const std::string& id) const {
    for (size_t i = 0; i < jobs.size(); ++i)
        if (jobs[i].id == id)
            return int(i);
    throw MathError("unknown job id '" + id + "'");
}

void validate(const LrsInstance& inst) {
    if (inst.d < 1)
        throw StructureError("instance dimension must be positive");
    std::unordered_set<std::string> ids;
    for (const auto& m : inst.machines) {
        if (int(m.speed.size()) != inst.d)
            throw StructureError("machine '" + m.id + "' speed vector has wrong length");
        if (!ids.insert("m:" + m.id).second)
            throw StructureError("duplicate machine id '" + m.id + "'");
    }
    for (const auto& j : inst.jobs) {
        if (int(j.size.size()) != inst.d)
            throw StructureError("job '" + j.id + "' size vector has wrong length");
        if (!ids.insert("j:" + j.id).second)
            throw StructureError("duplicate job id '" + j.id + "'");
    }
}

void validate(const LrsInstance& inst, const Schedule& s) {
    if (s.assignment.size() != inst.jobs.size())
        throw StructureError("schedule assigns " + std::to_string(s.assignment.size()) +
                             " jobs, instance has " + std::to_string(inst.jobs.size()));
    std::unordered_set<std::string> machine_ids;
    for (const auto& m : inst.machines)
        machine_ids.insert(m.id);
    for (const auto& j : inst.jobs) {
        auto it = s.assignment.find(j.id);
        if (it == s.assignment.end())
            throw StructureError("job '" + j.id + "' is unassigned");
        if (!machine_ids.count(it->second))
            throw StructureError("job '" + j.id + "' assigned to unknown machine '" + it->second + "'");
    }
}

Rational processing_time(const LrsInstance& inst, int machine, int job) {
    return dot(inst.machines[size_t(machine)].speed, inst.jobs[size_t(job)].size);
}

Rational processing_time(const LrsInstance& inst, const std::string& machine, const std::string& job) {
    return processing_time(inst, inst.machine_index(machine), inst.job_index(job));
}

Rational load(const LrsInstance& inst, const Schedule& s, const std::string& machine) {
    validate(inst, s);
    int m = inst.machine_index(machine);
    Rational total;
    for (size_t j = 0; j < inst.jobs.size(); ++j)
        if (s.assignment.at(inst.jobs[j].id) == machine)
            total += processing_time(inst, m, int(j));
    return total;
}

Rational makespan(const LrsInstance& inst, const Schedule& s) {
    validate(inst, s);
    std::unordered_map<std::string, int> index;
    for (size_t m = 0; m < inst.machines.size(); ++m)
        index[inst.machines[m].id] = int(m);
    std::vector<Rational> loads(inst.machines.size());
    for (size_t j = 0; j < inst.jobs.size(); ++j) {
        int m = index.at(s.assignment.at(inst.jobs[j].id));
        loads[size_t(m)] += processing_time(inst, m, int(j));
    }
    Rational best;
    for (const Rational& l : loads)
        if (l > best)
            best = l;
    return best;
}

Matrix full_matrix(const LrsInstance& inst) {
    Matrix p(int(inst.machines.size()), int(inst.jobs.size()));
    for (int i = 0; i < p.rows; ++i)
        for (int j = 0; j < p.cols; ++j)
            p.at(i, j) = processing_time(inst, i, j);
    return p;
}

RankCheck verify_rank(const LrsInstance& inst) {
    RankCheck rc;
    rc.rank = rank(full_matrix(inst));
    rc.ok = rc.rank <= inst.d;
    return rc;
}

bool all_nonnegative(const LrsInstance& inst) {
    for (const auto& m : inst.machines)
        for (const Rational& x : m.speed)
            if (x.sign() < 0)
                return false;
    for (const auto& j : inst.jobs)
        for (const Rational& x : j.size)
            if (x.sign() < 0)
                return false;
    return true;
}

void assert_third_coordinate_bound(const LrsInstance& inst) {
    if (inst.d < 3)
        throw StructureError("third-coordinate bound needs d >= 3");
    if (!all_nonnegative(inst))
        throw StructureError("third-coordinate bound needs nonnegative coordinates");
    for (const auto& m : inst.machines)
        if (m.speed[2] != Rational(1))
            throw StructureError("machine '" + m.id + "' third speed coordinate is not 1");
}

namespace {

std::vector<std::string> vec_to_strings(const std::vector<Rational>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const Rational& x : v)
        out.push_back(x.str());
    return out;
}

std::vector<Rational> strings_to_vec(const std::vector<std::string>& v) {
    std::vector<Rational> out;
    out.reserve(v.size());
    for (const std::string& s : v)
        out.push_back(Rational::parse(s));
    return out;
}

} // namespace

std::string lrs_to_json(const LrsInstance& inst) {
    nlohmann::json j;
    j["d"] = inst.d;
    j["machines"] = nlohmann::json::array();
    for (const auto& m : inst.machines)
        j["machines"].push_back({{"id", m.id}, {"speed", vec_to_strings(m.speed)}});
    j["jobs"] = nlohmann::json::array();
    for (const auto& job : inst.jobs)
        j["jobs"].push_back({{"id", job.id}, {"size", vec_to_strings(job.size)}});
    j["meta"] = inst.meta;
    return j.dump(2) + "\n";
}

LrsInstance lrs_from_json(const std::string& text) {
    LrsInstance inst;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        inst.d = j.at("d").get<int>();
        for (const auto& m : j.at("machines"))
            inst.machines.push_back(
                {m.at("id").get<std::string>(), strings_to_vec(m.at("speed").get<std::vector<std::string>>())});
        for (const auto& job : j.at("jobs"))
            inst.jobs.push_back(
                {job.at("id").get<std::string>(), strings_to_vec(job.at("size").get<std::vector<std::string>>())});
        if (j.contains("meta"))
            inst.meta = j.at("meta");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad LRS JSON: ") + e.what());
    }
    validate(inst);
    return inst;
}

std::string schedule_to_json(const Schedule& s) {
    nlohmann::json j;
    j["assignment"] = s.assignment;
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
    Schedule s;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        s.assignment = j.at("assignment").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad schedule JSON: ") + e.what());
    }
    return s;
}

} // namespace gf

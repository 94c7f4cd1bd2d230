#pragma once

#include <map>
#include <string>
#include <vector>

#include "pdisc/types.hpp"

namespace pdisc {

// One machine-checked inequality: achieved <relation> target.
struct CheckLine {
    std::string name;
    std::string relation;  // "<", "<=", ">", ">="
    double target = 0.0;
    double achieved = 0.0;
    bool pass = false;
};

// Record of a verification run on explicit grids. Failures are carried as
// data; nothing downgrades silently.
struct Certificate {
    std::vector<CheckLine> checks;
    std::map<std::string, double> params;  // sorted keys, stable serialization
    std::vector<std::string> notes;

    void add(const std::string& name, const std::string& relation, double achieved, double target) {
        CheckLine line;
        line.name = name;
        line.relation = relation;
        line.target = target;
        line.achieved = achieved;
        if (relation == "<")
            line.pass = achieved < target;
        else if (relation == "<=")
            line.pass = achieved <= target;
        else if (relation == ">")
            line.pass = achieved > target;
        else if (relation == ">=")
            line.pass = achieved >= target;
        else
            throw PreconditionError("Certificate: unknown relation " + relation);
        checks.push_back(std::move(line));
    }

    void absorb(const Certificate& other, const std::string& prefix) {
        for (auto line : other.checks) {
            line.name = prefix + line.name;
            checks.push_back(std::move(line));
        }
        for (const auto& kv : other.params) params[prefix + kv.first] = kv.second;
    }

    bool pass() const {
        for (const auto& line : checks)
            if (!line.pass) return false;
        return true;
    }

    const CheckLine* find(const std::string& name) const {
        for (const auto& line : checks)
            if (line.name == name) return &line;
        return nullptr;
    }
};

}  // namespace pdisc

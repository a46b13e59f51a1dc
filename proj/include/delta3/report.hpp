#pragma once

#include <string>
#include <vector>

namespace delta3 {

/// One named check with an optional human-readable witness for a failure.
struct CheckItem {
    std::string name;
    bool pass = true;
    std::string witness;
};

struct CheckReport {
    std::vector<CheckItem> items;

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }

    const CheckItem* first_failure() const {
        for (const auto& it : items)
            if (!it.pass) return &it;
        return nullptr;
    }

    std::string summary() const {
        if (all_pass()) return "all " + std::to_string(items.size()) + " checks passed";
        std::string s;
        for (const auto& it : items) {
            if (it.pass) continue;
            if (!s.empty()) s += "; ";
            s += it.name;
            if (!it.witness.empty()) s += " at " + it.witness;
        }
        return s;
    }
};

}  // namespace delta3

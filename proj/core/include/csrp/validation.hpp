#ifndef CSRP_VALIDATION_HPP
#define CSRP_VALIDATION_HPP

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace csrp {

struct ValidationCheck {
    std::string name;
    double residual = 0.0;   // measured residual (or -margin for spectral checks)
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::string subject;
    std::vector<ValidationCheck> checks;

    // residual <= tolerance
    void add(const std::string& name, double residual, double tolerance) {
        checks.push_back({name, residual, tolerance, residual <= tolerance});
    }
    // strict positivity with reported margin
    void add_margin(const std::string& name, double margin) {
        checks.push_back({name, -margin, 0.0, margin > 0.0});
    }

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const ValidationCheck& c) { return c.pass; });
    }

    double max_residual() const {
        double r = 0.0;
        for (const auto& c : checks) r = std::max(r, c.residual);
        return r;
    }

    std::string summary() const {
        std::string s = subject + (pass() ? ": pass" : ": FAIL");
        for (const auto& c : checks)
            if (!c.pass) s += " [" + c.name + "]";
        return s;
    }
};

nlohmann::json to_json(const ValidationReport& report);

}  // namespace csrp

#endif

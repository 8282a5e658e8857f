#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sl {

struct Check {
    std::string name;
    std::string citation;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    bool pass() const;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// runs one suite, or every suite for "all"; throws std::invalid_argument for unknown names
std::vector<SuiteReport> run_suite(const std::string& name);

nlohmann::json to_json(const std::vector<SuiteReport>& reports);

}

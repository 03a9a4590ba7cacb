#pragma once

#include <map>
#include <string>
#include <vector>

namespace nqac {

inline constexpr const char* kVersion = "1.0.0";

struct Range {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;

    // steps points from start to stop inclusive
    std::vector<double> values() const;
};

struct SweepSpec {
    std::string command;
    std::map<std::string, std::string> fixed;  // parameter name -> value text
    std::vector<Range> swept;                   // at most two
    int jobs = 1;
};

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;  // resolved parameters and provenance
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

const std::vector<std::string>& known_commands();
// Unscaled names; scaled forms are <lambda|gamma|T|eta>_over_C<k>.
const std::vector<std::string>& known_parameters();
bool is_known_parameter(const std::string& name);

// Throws InputError for validation problems and NumericalError when a point fails.
Table run_sweep(const SweepSpec& spec);

std::string format_number(double x);

}  // namespace nqac

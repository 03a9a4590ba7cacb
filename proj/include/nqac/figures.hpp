#pragma once

#include <string>
#include <vector>

namespace nqac {

struct Landmark {
    std::string name;
    double expected = 0.0;
    double tolerance = 0.0;
    double computed = 0.0;
    std::string source;
};

struct FigureOutput {
    int id = 0;
    std::vector<std::string> files;
    std::vector<Landmark> landmarks;
};

// Writes the CSV files behind a figure (ids 1 to 17) and a manifest into dir.
FigureOutput reproduce(int figure_id, const std::string& dir, int jobs = 1);

}  // namespace nqac

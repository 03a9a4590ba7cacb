#pragma once

#include <iosfwd>
#include <string>

#include "nqac/sweep.hpp"

namespace nqac {

// '#' header block (version, timestamp, meta), a column line, then rows.
void write_csv(std::ostream& os, const Table& t, const std::string& timestamp);
Table read_csv(std::istream& is);

void write_json(std::ostream& os, const Table& t, const std::string& timestamp);

std::string iso_timestamp();

}  // namespace nqac

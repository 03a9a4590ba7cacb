#include "nqac/csv.hpp"

#include <chrono>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nqac/model.hpp"

namespace nqac {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].find_first_of(",\n") != std::string::npos) throw InputError("CSV cell contains a separator: " + v[i]);
        s += (i ? "," : "") + v[i];
    }
    return s;
}

}  // namespace

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(std::ostream& os, const Table& t, const std::string& timestamp) {
    os << "# nqac " << kVersion << '\n';
    os << "# generated " << timestamp << '\n';
    for (const auto& [k, v] : t.meta) os << "# " << k << " = " << v << '\n';
    os << join(t.columns) << '\n';
    for (const auto& r : t.rows) os << join(r) << '\n';
}

Table read_csv(std::istream& is) {
    Table t;
    std::string line;
    bool have_columns = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (have_columns) throw InputError("comment line after the column header");
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) t.meta.push_back({line.substr(2, eq - 2), line.substr(eq + 3)});
            continue;
        }
        if (!have_columns) {
            t.columns = split(line);
            have_columns = true;
            continue;
        }
        auto row = split(line);
        if (row.size() != t.columns.size())
            throw InputError("row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(t.columns.size()));
        t.rows.push_back(std::move(row));
    }
    if (!have_columns) throw InputError("CSV has no column header");
    return t;
}

void write_json(std::ostream& os, const Table& t, const std::string& timestamp) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["generated"] = timestamp;
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    j["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : r) {
            char* end = nullptr;
            const double x = std::strtod(c.c_str(), &end);
            if (!c.empty() && *end == '\0' && std::isfinite(x))
                row.push_back(x);
            else
                row.push_back(c);
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    os << j.dump(2) << '\n';
}

}  // namespace nqac

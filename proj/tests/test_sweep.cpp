#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nqac/csv.hpp"
#include "nqac/model.hpp"
#include "nqac/sweep.hpp"

using namespace nqac;

namespace {

std::string body(const Table& t, int jobs_written_as = 0) {
    (void)jobs_written_as;
    std::ostringstream os;
    write_csv(os, t, "2000-01-01T00:00:00Z");
    return os.str();
}

SweepSpec critline_spec(int jobs) {
    SweepSpec s;
    s.command = "critline";
    s.fixed = {{"lambda", "1.5"}, {"axis", "gamma_of_T"}};
    s.swept = {{"T_over_C", 0.0, 0.5, 11}};
    s.jobs = jobs;
    return s;
}

}  // namespace

TEST_CASE("range values are inclusive") {
    Range r{"x", 0.0, 1.0, 5};
    auto v = r.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 1.0);
    CHECK(Range{"x", 2.0, 9.0, 1}.values() == std::vector<double>{2.0});
}

TEST_CASE("number formatting is lossless") {
    for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("CSV bodies do not depend on the worker count") {
    const auto a = body(run_sweep(critline_spec(1)));
    const auto b = body(run_sweep(critline_spec(4)));
    CHECK(a == b);
    SweepSpec s;
    s.command = "classify";
    s.fixed = {{"p", "4"}, {"T_over_C4", "0.01"}};
    s.swept = {{"lambda_over_C2", 0.1, 3.0, 4}};
    s.jobs = 1;
    const auto c = body(run_sweep(s));
    s.jobs = 3;
    CHECK(c == body(run_sweep(s)));
}

TEST_CASE("CSV files read back") {
    auto t = run_sweep(critline_spec(2));
    std::istringstream is(body(t));
    auto back = read_csv(is);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
    CHECK(back.meta.size() >= t.meta.size());
}

TEST_CASE("critline values") {
    auto t = run_sweep(critline_spec(1));
    REQUIRE(!t.rows.empty());
    // T = 0: Gamma_c / C = 2 (J + lambda)
    CHECK(std::stod(t.rows[0][1]) == doctest::Approx(5.0));
}

TEST_CASE("parameter validation") {
    SweepSpec s;
    s.command = "saddle";
    s.fixed = {{"lambda", "1"}, {"lambda_over_C", "1"}};
    CHECK_THROWS_AS(run_sweep(s), InputError);
    s.fixed = {{"lamda", "1"}};
    try {
        run_sweep(s);
        FAIL("unknown parameter accepted");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
    s.fixed = {};
    s.command = "no-such";
    CHECK_THROWS_AS(run_sweep(s), InputError);
    CHECK(is_known_parameter("T_over_C4"));
    CHECK(is_known_parameter("gamma_over_C3"));
    CHECK_FALSE(is_known_parameter("T_over_D"));
}

#include <catch2/catch_amalgamated.hpp>

#include <gvgt/scheme.hpp>
#include <gvgt/ssf.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace gvgt;

namespace {

std::size_t scheme_error_line(const std::string& text) {
    std::istringstream is(text);
    try {
        read_scheme(is);
    } catch (const parse_error& e) {
        return e.line();
    }
    return 0;
}

std::size_t outcome_error_line(const std::string& text) {
    std::istringstream is(text);
    try {
        read_outcomes(is);
    } catch (const parse_error& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("scheme files round-trip byte for byte") {
    for (const Scheme& s :
         {oracles::example_scheme(), build_scheme(30, 2).scheme, build_scheme(4, 2).scheme}) {
        std::ostringstream first;
        write_scheme(first, s);
        std::istringstream back(first.str());
        Scheme t = read_scheme(back);
        CHECK(t.n == s.n);
        CHECK(t.r == s.r);
        CHECK(t.tests == s.tests);
        std::ostringstream second;
        write_scheme(second, t);
        CHECK(first.str() == second.str());
    }
}

TEST_CASE("scheme file content is the documented plain text") {
    Scheme s;
    s.n = 3;
    s.r = 2;
    s.tests = {{1, 3}, {2}};
    std::ostringstream os;
    write_scheme(os, s);
    CHECK(os.str() == "GTS 1\nn 3 r 2 t 2\n1 3\n2\n");
}

TEST_CASE("scheme parsing reports the offending line") {
    CHECK(scheme_error_line("") == 1);
    CHECK(scheme_error_line("GTS 2\n") == 1);
    CHECK(scheme_error_line("GTS 1\nn 3 r 2\n") == 2);
    CHECK(scheme_error_line("GTS 1\nn 3 r 0 t 1\n1\n") == 2);
    CHECK(scheme_error_line("GTS 1\nn 0 r 2 t 1\n1\n") == 2);
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 2\n1 3\n") == 4);       // missing test
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 2\n1 4\n2\n") == 3);    // item above n
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 2\n3 1\n2\n") == 3);    // out of order
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 2\n1 1\n2\n") == 3);    // repeated item
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 2\n1 x\n2\n") == 3);
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 2\n\n2\n") == 3);       // empty test
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 1\n1 3\n2\n") == 4);    // trailing content
    CHECK(scheme_error_line("GTS 1\nn 3 r 2 t 1\n1 2 3\n") == 0);     // valid
}

TEST_CASE("outcome files round-trip byte for byte") {
    for (const OutcomeVector& o :
         {OutcomeVector{1, 1, 0, 1, 0, 1, 1, 0, 0}, OutcomeVector{}, OutcomeVector{0},
          OutcomeVector{1}}) {
        std::ostringstream first;
        write_outcomes(first, o);
        std::istringstream back(first.str());
        CHECK(read_outcomes(back) == o);
        std::ostringstream second;
        write_outcomes(second, o);
        CHECK(first.str() == second.str());
    }
    OutcomeVector o{1, 0, 1};
    std::ostringstream os;
    write_outcomes(os, o);
    CHECK(os.str() == "GTO 1\nt 3\n101\n");
}

TEST_CASE("outcome parsing reports the offending line") {
    CHECK(outcome_error_line("") == 1);
    CHECK(outcome_error_line("GTO 2\n") == 1);
    CHECK(outcome_error_line("GTO 1\nt x\n") == 2);
    CHECK(outcome_error_line("GTO 1\nq 3\n101\n") == 2);
    CHECK(outcome_error_line("GTO 1\nt 3\n10\n") == 3);    // wrong length
    CHECK(outcome_error_line("GTO 1\nt 3\n102\n") == 3);   // bad character
    CHECK(outcome_error_line("GTO 1\nt 3\n101\n1\n") == 4);
    CHECK(outcome_error_line("GTO 1\nt 3\n101\n") == 0);
}

TEST_CASE("path-based helpers") {
    std::string dir = "fmt_tmp";
    std::remove((dir + "_code.txt").c_str());

    GeneratorMatrix g = oracles::example_code();
    write_code_file(dir + "_code.txt", g);
    CHECK(read_code_file(dir + "_code.txt").entries == g.entries);

    Scheme s = oracles::example_scheme();
    write_scheme_file(dir + "_scheme.txt", s);
    CHECK(read_scheme_file(dir + "_scheme.txt").tests == s.tests);

    OutcomeVector o = outcomes(s, {1, 5});
    write_outcomes_file(dir + "_out.txt", o);
    CHECK(read_outcomes_file(dir + "_out.txt") == o);

    CHECK_THROWS_AS(read_code_file("no_such_file.txt"), std::runtime_error);
    CHECK_THROWS_AS(read_scheme_file("no_such_file.txt"), std::runtime_error);
    CHECK_THROWS_AS(read_outcomes_file("no_such_file.txt"), std::runtime_error);

    std::remove((dir + "_code.txt").c_str());
    std::remove((dir + "_scheme.txt").c_str());
    std::remove((dir + "_out.txt").c_str());
}

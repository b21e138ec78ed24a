#include <catch2/catch_amalgamated.hpp>

#include <gvgt/ssf.hpp>

#include <set>

#include "oracles.hpp"

using namespace gvgt;

TEST_CASE("the ternary example code induces the known nine tests") {
    Scheme s = reduce_code(oracles::example_code(), 9);
    Scheme expect = oracles::example_scheme();
    CHECK(s.n == 9);
    CHECK(s.r == 3);
    REQUIRE(s.tests.size() == 9);
    CHECK(s.tests == expect.tests);
}

TEST_CASE("single item, single test") {
    GeneratorMatrix g(CodeParams(2, 1, 1, Ratio(0, 1)));
    Scheme s = reduce_code(g, 1);
    CHECK(s.n == 1);
    CHECK(s.tests == std::vector<std::vector<std::uint32_t>>{{1}});
}

TEST_CASE("family shape invariants") {
    CodeParams p(5, 15, 2, Ratio(1, 2));
    GeneratorMatrix g = derandomized_construct(p, BuildMode::fast).code;
    for (std::uint64_t n : {9ULL, 24ULL, 25ULL}) {
        Scheme s = reduce_code(g, n);
        CHECK(s.n == n);
        CHECK(s.r == 2);
        CHECK(s.tests.size() <= std::size_t(p.m) * p.q);

        std::vector<std::uint32_t> memberships(n + 1, 0);
        for (const auto& test : s.tests) {
            CHECK(!test.empty());
            CHECK(std::is_sorted(test.begin(), test.end()));
            for (std::uint32_t x : test) {
                REQUIRE(x >= 1);
                REQUIRE(x <= n);
                ++memberships[x];
            }
        }
        // one test per codeword position
        for (std::uint64_t x = 1; x <= n; ++x) CHECK(memberships[x] == p.m);
    }
}

TEST_CASE("reduction rejects undersized codes") {
    GeneratorMatrix g = oracles::example_code();  // nine codewords
    CHECK_THROWS_AS(reduce_code(g, 10), std::invalid_argument);
    CHECK_THROWS_AS(reduce_code(g, 0), std::invalid_argument);
    CHECK_NOTHROW(reduce_code(g, 9));
}

TEST_CASE("exhaustive selectivity check") {
    SECTION("the example family selects within any three items") {
        Scheme s = oracles::example_scheme();
        for (std::uint32_t r = 1; r <= 3; ++r) {
            SsfCheck chk = verify_ssf(s, r);
            CHECK(chk.status == SsfStatus::selective);
        }
    }
    SECTION("four items overwhelm it") {
        // with |A| = 4, some member must share all its tests
        SsfCheck chk = verify_ssf(oracles::example_scheme(), 4);
        CHECK(chk.status == SsfStatus::not_selective);
        REQUIRE(chk.witness_set.size() == 4);
        // double-check the witness against the definition
        std::uint32_t x = chk.witness_item;
        bool selected = false;
        for (const auto& test : oracles::example_scheme().tests) {
            std::size_t inter = 0;
            bool has_x = false;
            for (std::uint32_t a : chk.witness_set) {
                if (detail::item_in_test(test, a)) {
                    ++inter;
                    has_x |= a == x;
                }
            }
            selected |= inter == 1 && has_x;
        }
        CHECK_FALSE(selected);
    }
    SECTION("a single shared test fails immediately") {
        Scheme s;
        s.n = 2;
        s.r = 2;
        s.tests = {{1, 2}};
        SsfCheck chk = verify_ssf(s, 2);
        CHECK(chk.status == SsfStatus::not_selective);
        CHECK(chk.witness_set == std::vector<std::uint32_t>{1, 2});
        CHECK(chk.witness_item == 1);
        CHECK(verify_ssf(s, 1).status == SsfStatus::selective);
    }
    SECTION("singletons select at full strength") {
        Scheme s;
        s.n = 5;
        s.r = 5;
        for (std::uint32_t i = 1; i <= 5; ++i) s.tests.push_back({i});
        CHECK(verify_ssf(s, 5).status == SsfStatus::selective);
    }
    SECTION("budget exhaustion reports unverified") {
        CHECK(verify_ssf(oracles::example_scheme(), 3, 10).status == SsfStatus::unverified);
    }
    SECTION("input validation") {
        CHECK_THROWS_AS(verify_ssf(oracles::example_scheme(), 0), std::invalid_argument);
        Scheme big;
        big.n = 100;
        big.r = 64;
        for (std::uint32_t i = 1; i <= 100; ++i) big.tests.push_back({i});
        CHECK_THROWS_AS(verify_ssf(big, 64), std::invalid_argument);
    }
}

TEST_CASE("sampled selectivity check") {
    CHECK(verify_ssf_sampled(oracles::example_scheme(), 3, 500, 7));
    Scheme s;
    s.n = 2;
    s.r = 2;
    s.tests = {{1, 2}};
    // the only size-2 candidate set is itself a violation
    CHECK_FALSE(verify_ssf_sampled(s, 2, 1, 123));
    CHECK(verify_ssf_sampled(s, 1, 200, 123));

    SECTION("violations found in a weakened family") {
        Scheme weak = oracles::example_scheme();
        weak.tests.resize(4);  // drop five tests; strength collapses
        CHECK_FALSE(verify_ssf_sampled(weak, 3, 2000, 99));
    }
}

TEST_CASE("full pipeline yields selective families") {
    CodeParams p(5, 15, 2, Ratio(1, 2));
    GeneratorMatrix g = derandomized_construct(p, BuildMode::exact).code;
    for (std::uint64_t n : {9ULL, 25ULL}) {
        Scheme s = reduce_code(g, n);
        CHECK(verify_ssf(s, 2).status == SsfStatus::selective);
    }
    // three-way selection needs delta = 2/3
    CodeParams p3(7, 34, 2, Ratio(2, 3));
    GeneratorMatrix g3 = derandomized_construct(p3, BuildMode::fast).code;
    Scheme s3 = reduce_code(g3, 25);
    CHECK(s3.r == 3);
    CHECK(verify_ssf(s3, 3).status == SsfStatus::selective);
}

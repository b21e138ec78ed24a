#include <catch2/catch_amalgamated.hpp>

#include <gvgt/scheme.hpp>

#include "oracles.hpp"

using namespace gvgt;

TEST_CASE("scheme construction picks the right branch") {
    SECTION("n=4 r=2 goes to singletons") {
        SchemeBuild b = build_scheme(4, 2);
        CHECK(b.params.trivial);
        CHECK_FALSE(b.used_code);
        CHECK(b.scheme.tests ==
              std::vector<std::vector<std::uint32_t>>{{1}, {2}, {3}, {4}});
        CHECK(b.total_items == 4);
    }
    SECTION("n=9 r=2 builds a code") {
        SchemeBuild b = build_scheme(9, 2);
        CHECK_FALSE(b.params.trivial);
        CHECK(b.used_code);
        CHECK(b.distance_checked);
        CHECK(b.min_weight >= 8);
        CHECK(b.scheme.r == 2);
        CHECK(b.scheme.tests.size() <= 75);
        CHECK(verify_ssf(b.scheme, 2).status == SsfStatus::selective);
        CHECK(b.total_items == 9ULL * b.params.code.m);
    }
    SECTION("a full message space covers every item m times") {
        SchemeBuild b = build_scheme(25, 2);
        REQUIRE(b.params.code.message_count() == 25);
        std::vector<std::uint32_t> memberships(26, 0);
        for (const auto& t : b.scheme.tests) {
            for (std::uint32_t x : t) ++memberships[x];
        }
        for (int x = 1; x <= 25; ++x) CHECK(memberships[x] == b.params.code.m);
    }
    SECTION("modes produce equally valid schemes") {
        SchemeBuild fast = build_scheme(9, 2, BuildMode::fast);
        SchemeBuild exact = build_scheme(9, 2, BuildMode::exact);
        CHECK(verify_ssf(fast.scheme, 2).status == SsfStatus::selective);
        CHECK(verify_ssf(exact.scheme, 2).status == SsfStatus::selective);
    }
}

TEST_CASE("group-testing schemes add one to the strength") {
    SchemeBuild b = build_gt_scheme(9, 2);
    // n=9, strength 3: 9 ln 9 >= 9, so the singleton branch serves it
    CHECK(b.params.trivial);
    CHECK(b.scheme.r == 3);
    CHECK(b.scheme.tests.size() == 9);

    SchemeBuild c = build_gt_scheme(100, 2);
    CHECK_FALSE(c.params.trivial);
    CHECK(c.scheme.r == 3);
    CHECK(c.params.code.delta == Ratio(2, 3));

    CHECK_THROWS_AS(build_gt_scheme(9, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_gt_scheme(9, 9), std::invalid_argument);
    CHECK_NOTHROW(build_gt_scheme(9, 8));
}

TEST_CASE("outcome computation") {
    Scheme s = oracles::example_scheme();
    CHECK(outcomes(s, {}) == OutcomeVector(9, 0));
    CHECK(outcomes(s, {1, 5}) == OutcomeVector{1, 1, 0, 1, 0, 1, 1, 0, 0});
    CHECK(outcomes(s, {1, 2, 3, 4, 5, 6, 7, 8, 9}) == OutcomeVector(9, 1));
    CHECK_THROWS_AS(outcomes(s, {10}), std::invalid_argument);
    CHECK_THROWS_AS(outcomes(s, {0}), std::invalid_argument);
    CHECK_THROWS_AS(outcomes(s, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(outcomes(s, {5, 1}), std::invalid_argument);
}

TEST_CASE("cover decoding") {
    Scheme s = oracles::example_scheme();
    SECTION("keeps exactly the uneliminated items") {
        CHECK(cover_decode(s, outcomes(s, {1, 5})) == DefectiveSet{1, 5});
        CHECK(cover_decode(s, OutcomeVector(9, 0)) == DefectiveSet{});
        CHECK(cover_decode(s, OutcomeVector(9, 1)) ==
              DefectiveSet{1, 2, 3, 4, 5, 6, 7, 8, 9});
        CHECK_THROWS_AS(cover_decode(s, OutcomeVector(3, 0)), std::invalid_argument);
    }
    SECTION("is monotone in the outcomes") {
        for (std::uint32_t bits = 0; bits < 512; ++bits) {
            OutcomeVector o(9);
            for (int i = 0; i < 9; ++i) o[i] = (bits >> i) & 1;
            DefectiveSet base = cover_decode(s, o);
            for (int flip = 0; flip < 9; ++flip) {
                if (o[flip]) continue;
                OutcomeVector o2 = o;
                o2[flip] = 1;
                DefectiveSet more = cover_decode(s, o2);
                REQUIRE(std::includes(more.begin(), more.end(), base.begin(), base.end()));
            }
        }
    }
}

TEST_CASE("validated decoding on the example family") {
    Scheme s = oracles::example_scheme();
    SECTION("exhaustive round trips for up to two defectives") {
        std::vector<DefectiveSet> all{{}};
        for (std::uint32_t a = 1; a <= 9; ++a) {
            all.push_back({a});
            for (std::uint32_t b = a + 1; b <= 9; ++b) all.push_back({a, b});
        }
        REQUIRE(all.size() == 46);
        for (const auto& d : all) {
            OutcomeVector o = outcomes(s, d);
            CHECK(decode(s, o, 2) == d);
            // independent uniqueness check: no other small set explains o
            CHECK(oracles::matching_sets(s, o, 2) == std::vector<DefectiveSet>{d});
        }
    }
    SECTION("inconsistent outcomes are rejected") {
        OutcomeVector o(9, 0);
        o[0] = 1;  // a positive test whose members are all cleared elsewhere
        CHECK_THROWS_AS(decode(s, o, 2), inconsistent_outcomes);
        CHECK_THROWS_AS(decode(s, OutcomeVector(9, 1), 2), inconsistent_outcomes);
        CHECK_NOTHROW(decode(s, OutcomeVector(9, 0), 2));
    }
}

TEST_CASE("round trips on built schemes") {
    SECTION("exhaustive for n=25, up to two defectives") {
        Scheme s = build_gt_scheme(25, 2).scheme;
        std::vector<DefectiveSet> all{{}};
        for (std::uint32_t a = 1; a <= 25; ++a) {
            all.push_back({a});
            for (std::uint32_t b = a + 1; b <= 25; ++b) all.push_back({a, b});
        }
        REQUIRE(all.size() == 326);
        for (const auto& d : all) {
            REQUIRE(decode(s, outcomes(s, d), 2) == d);
        }
    }
    SECTION("sampled for n=1000, up to three defectives") {
        SimulationReport rep = simulate(1000, 3, 200, 17);
        CHECK(rep.trials == 200);
        CHECK(rep.failures == 0);
        CHECK(rep.first_failure_trial == UINT64_MAX);
        CHECK_FALSE(rep.build.params.trivial);
    }
}

TEST_CASE("simulation bookkeeping") {
    SECTION("zero trials still builds") {
        SimulationReport rep = simulate(50, 2, 0, 3);
        CHECK(rep.trials == 0);
        CHECK(rep.failures == 0);
        CHECK(rep.build.scheme.n == 50);
        CHECK(rep.build_ms >= 0.0);
    }
    SECTION("reports are reproducible and thread-count independent") {
        SimulationReport a = simulate(200, 2, 100, 5, BuildMode::fast, 1);
        SimulationReport b = simulate(200, 2, 100, 5, BuildMode::fast, 4);
        CHECK(a.failures == b.failures);
        CHECK(a.first_failure_trial == b.first_failure_trial);
        CHECK(a.build.scheme.tests == b.build.scheme.tests);
    }
    SECTION("the singleton branch never fails") {
        SimulationReport rep = simulate(9, 2, 100, 11);
        CHECK(rep.build.params.trivial);
        CHECK(rep.failures == 0);
    }
}

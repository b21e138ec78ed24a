#include <catch2/catch_amalgamated.hpp>

#include <gvgt/field.hpp>

using namespace gvgt;

TEST_CASE("primality by trial division") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(4));
    CHECK(is_prime(31));
    CHECK_FALSE(is_prime(1'000'003ULL * 1'000'033ULL));
    CHECK(is_prime(1'000'003));

    std::uint64_t primes = 0;
    for (std::uint64_t x = 0; x < 1000; ++x) primes += is_prime(x);
    CHECK(primes == 168);
}

TEST_CASE("smallest prime in a half-open interval") {
    CHECK(smallest_prime_in(2, 4) == 2);
    CHECK(smallest_prime_in(4, 8) == 5);
    CHECK(smallest_prime_in(90, 100) == 97);
    CHECK_THROWS_AS(smallest_prime_in(24, 29), std::invalid_argument);
    CHECK_THROWS_AS(smallest_prime_in(8, 11), std::invalid_argument);
    CHECK_THROWS_AS(smallest_prime_in(5, 5), std::invalid_argument);

    SECTION("intervals [2r, 4r) always contain a prime") {
        for (std::uint64_t r = 1; r <= 2000; ++r) {
            std::uint64_t p = smallest_prime_in(2 * r, 4 * r);
            CHECK(p >= 2 * r);
            CHECK(p < 4 * r);
        }
    }
}

TEST_CASE("field construction rejects non-prime orders") {
    CHECK_THROWS_AS(PrimeField(0), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(91), std::invalid_argument);
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(65537));
}

TEST_CASE("arithmetic in F_7") {
    PrimeField f(7);
    CHECK(f.add(3, 5) == 1);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.neg(0) == 0);
    CHECK(f.neg(2) == 5);
    CHECK(f.inv(3) == 5);
    CHECK(f.inv(1) == 1);
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
    CHECK(f.element(23).value() == 2);
}

TEST_CASE("field axioms hold exhaustively for small orders") {
    for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
        PrimeField f(q);
        for (std::uint32_t a = 0; a < q; ++a) {
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a != 0) {
                CHECK(f.mul(a, f.inv(a)) == 1);
            }
            for (std::uint32_t b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                CHECK(f.add(a, b) < q);
                CHECK(f.mul(a, b) < q);
                for (std::uint32_t c = 0; c < q; ++c) {
                    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("inverse table agrees with the Euclidean path") {
    // 65537 <= 2^16 uses the table; 65539 does not
    PrimeField small(65537);
    PrimeField large(65539);
    for (std::uint32_t a = 1; a < 2000; ++a) {
        CHECK(small.mul(a, small.inv(a)) == 1);
        CHECK(large.mul(a, large.inv(a)) == 1);
    }
}

TEST_CASE("element wrappers carry their field") {
    PrimeField f3(3);
    PrimeField f5(5);
    FieldElement a = f3.element(2);
    FieldElement b = f3.element(2);
    CHECK((a + b).value() == 1);
    CHECK((a * b).value() == 1);
    CHECK((-a).value() == 1);
    CHECK(inverse(a).value() == 2);
    CHECK(a == b);
    CHECK(a != f3.element(1));
    CHECK_THROWS_AS(a + f5.element(1), std::invalid_argument);
    CHECK_THROWS_AS(a * f5.element(1), std::invalid_argument);
    CHECK(f3.zero().value() == 0);
    CHECK(f3.one().value() == 1);
}

#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <set>

#include "adapt/rng.hpp"

using namespace adapt;

TEST_CASE("streams are reproducible from the seed") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        (void)c.next_u64();
    }
    CHECK(Rng(42).next_u64() != Rng(43).next_u64());
}

TEST_CASE("mt19937_64 reference value") {
    // 10000th output of the default-seeded engine is fixed by the standard.
    Rng r(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = r.next_u64();
    CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("uniform01 stays in [0, 1) with the right mean") {
    Rng r(1);
    double sum = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 200000 == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("below is unbiased and in range") {
    Rng r(2);
    std::array<int, 3> counts{};
    for (int i = 0; i < 90000; ++i) {
        const auto k = r.below(3);
        REQUIRE(k < 3);
        ++counts[k];
    }
    for (int c : counts) CHECK(c == doctest::Approx(30000).epsilon(0.02));
    CHECK_THROWS_AS(r.below(0), std::invalid_argument);
}

TEST_CASE("standard normal moments") {
    Rng r(3);
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.standard_normal();
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
    }
    CHECK(std::fabs(s1 / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::fabs(s3 / n) < 0.02);
}

TEST_CASE("derived seeds separate roles and indices") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 100; ++i) {
        seen.insert(derive_seed(7, {i}));
        seen.insert(derive_seed(7, {tag_of("truth"), i}));
        seen.insert(derive_seed(7, {tag_of("solver"), i}));
    }
    CHECK(seen.size() == 300);
    CHECK(derive_seed(7, {1, 2}) == derive_seed(7, {1, 2}));
    CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
    CHECK(tag_of("") == 0xcbf29ce484222325ULL);
    CHECK(tag_of("a") == 0xaf63dc4c8601ec8cULL);
}

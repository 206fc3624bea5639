#include <doctest.h>

#include <cmath>

#include "fogmatch/codes.hpp"
#include "fogmatch/errors.hpp"

using namespace fogmatch;

TEST_CASE("minimum-storage code parameters") {
    const StoragePoint p = msr_params(2.0, 2, 3);
    CHECK(p.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.beta == doctest::Approx(1.5).epsilon(1e-15));

    const StoragePoint one = msr_params(2.5, 1, 4);
    CHECK(one.alpha == doctest::Approx(2.5));
    CHECK(one.beta == doctest::Approx(2.5)); // D/(D-1+1) = 1

    CHECK_THROWS_AS(msr_params(2.0, 3, 2), InvalidDimensions);
    CHECK_THROWS_AS(msr_params(2.0, 0, 2), InvalidDimensions);
    CHECK_THROWS_AS(msr_params(-1.0, 1, 2), InvalidDimensions);
}

TEST_CASE("minimum-bandwidth code parameters") {
    const StoragePoint p = mbr_params(2.0, 2, 3);
    CHECK(p.alpha == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(p.beta == doctest::Approx(1.2).epsilon(1e-15));
    const StoragePoint one = mbr_params(3.0, 1, 5);
    CHECK(one.alpha == doctest::Approx(3.0)); // K=1 collapses to the storage point

    // storage per node never beats the minimum-storage point
    for (int K = 1; K <= 5; ++K)
        for (int D = K; D <= 8; ++D)
            for (double R : {0.5, 2.0, 7.0}) {
                CHECK(mbr_params(R, K, D).alpha >= msr_params(R, K, D).alpha - 1e-15);
                const StoragePoint m = msr_params(R, K, D);
                CHECK(m.beta >= m.alpha - 1e-15); // equality iff K == 1
                if (K == 1) CHECK(m.beta == doctest::Approx(m.alpha));
            }
}

TEST_CASE("demand split follows content sizes") {
    CHECK(optimal_k({2.0, 3.0}, 5) == std::vector<int>{2, 3});
    CHECK(optimal_k({1.0, 1.0, 1.0, 1.0}, 4) == std::vector<int>{1, 1, 1, 1});
    // ideal 2.5/2.5, largest remainder with the tie broken by index
    CHECK(optimal_k({2.0, 2.0}, 5) == std::vector<int>{3, 2});
    CHECK_THROWS_AS(optimal_k({1.0, 1.0, 1.0}, 2), RoundingInfeasible);
    // a tiny content still gets one AP
    const auto k = optimal_k({0.01, 10.0}, 6);
    CHECK(k[0] >= 1);
    CHECK(k[0] + k[1] == 6);
}

TEST_CASE("best-region code design") {
    const auto codes = dmr_optimal_code({2.0, 3.0}, 5);
    REQUIRE(codes.size() == 2);
    CHECK(codes[0].n == 5);
    CHECK(codes[0].k == 2);
    CHECK(codes[0].d.value() == 2);
    CHECK(codes[1].k == 3);
    CHECK(codes[1].d.value() == 3);
    // storage per node identical across contents at the ideal split
    CHECK(codes[0].alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(codes[1].alpha == doctest::Approx(1.0).epsilon(1e-15));
    // repair bandwidth equals the content size when D sits at its lower bound
    CHECK(codes[0].beta.value() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(codes[1].beta.value() == doctest::Approx(3.0).epsilon(1e-15));

    const auto single = dmr_optimal_code({4.0}, 5);
    CHECK(single[0].k == 5);
    CHECK(single[0].alpha == doctest::Approx(4.0 / 5.0));
    CHECK(single[0].d.value() >= single[0].k);
}

#include <cmath>
#include <random>

#include "doctest.h"
#include "hardylab/constants.hpp"

using namespace hardylab;

TEST_CASE("zero generator produces the quarter coefficients") {
    AlphaVector a{{0.0, 0.0, 0.0}};
    auto b = alpha_to_beta(a);
    REQUIRE(b.v.size() == 3);
    for (double bi : b.v) CHECK(bi == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("recursion values for a generic generator") {
    // beta_1 = 1/4 - a_1^2, beta_m = (a_{m-1} - 1/2)^2 - a_m^2.
    AlphaVector a{{-0.3, -0.7, 0.0, -1.25}};
    auto b = alpha_to_beta(a);
    CHECK(b.v[0] == doctest::Approx(0.25 - 0.09).epsilon(1e-15));
    CHECK(b.v[1] == doctest::Approx(0.64 - 0.49).epsilon(1e-15));
    CHECK(b.v[2] == doctest::Approx(1.44 - 0.0).epsilon(1e-15));
    CHECK(b.v[3] == doctest::Approx(0.25 - 1.5625).epsilon(1e-15));
}

TEST_CASE("generator signs: only the last entry's sign is immaterial") {
    // a_m enters its own coefficient through a_m^2, but the NEXT coefficient
    // through (a_m - 1/2)^2, so only the final entry's sign washes out.
    AlphaVector base{{0.4, 0.9, 0.2}};
    AlphaVector flipped_last{{0.4, 0.9, -0.2}};
    auto bb = alpha_to_beta(base);
    auto bl = alpha_to_beta(flipped_last);
    for (size_t i = 0; i < bb.v.size(); ++i) CHECK(bb.v[i] == bl.v[i]);
    AlphaVector flipped_mid{{0.4, -0.9, 0.2}};
    auto bm = alpha_to_beta(flipped_mid);
    CHECK(bm.v[0] == bb.v[0]);
    CHECK(bm.v[1] == bb.v[1]);
    CHECK(bm.v[2] != bb.v[2]);
    // the canonical nonpositive representative still generates the same beta
    auto canon = normalize_alpha(base);
    for (double ai : canon.v) CHECK(ai <= 0.0);
    auto bc = alpha_to_beta(canon);
    for (size_t i = 0; i < bb.v.size(); ++i)
        CHECK(bc.v[i] == doctest::Approx(bb.v[i]).epsilon(1e-13));
}

TEST_CASE("round-trip admissibility on 10^4 random generators") {
    SUBCASE("dyadic grid entries reconstruct to machine precision") {
        // Entries on the grid -j/16 keep every square and difference in the
        // recursion exactly representable, so the rounded coefficients still
        // determine the generator to the last bit (sqrt of an exact square).
        std::mt19937 rng(20260814u);
        std::uniform_int_distribution<int> grid(0, 48);
        std::uniform_int_distribution<int> dim(1, 8);
        for (int trial = 0; trial < 10000; ++trial) {
            const int n = dim(rng);
            AlphaVector a;
            a.v.resize(n);
            for (double& ai : a.v) ai = -grid(rng) / 16.0;
            auto canon = normalize_alpha(a);
            auto beta = alpha_to_beta(canon);
            auto adm = beta_admissible(beta);
            REQUIRE(adm.admissible);
            REQUIRE(adm.failed_index == 0);
            for (int m = 0; m < n; ++m)
                CHECK(std::abs(adm.alpha->v[m] - canon.v[m]) <=
                      1e-14 * (1.0 + std::abs(canon.v[m])));
        }
    }
    SUBCASE("generic entries: coefficients to 1e-14, generator to its conditioning floor") {
        // Rounding beta_m to one double discards information about alpha_m:
        // the absolute loss is ~ulp((alpha_{m-1}-1/2)^2)/(2|alpha_m|), and it
        // propagates with gain |(alpha_{m-1}-1/2)/alpha_m| per step.  The
        // generator check below uses that first-order envelope; the re-encoded
        // coefficients themselves must match to 1e-14 regardless.
        std::mt19937 rng(8891602u);
        std::uniform_real_distribution<double> entry(-3.0, 3.0);
        std::uniform_int_distribution<int> dim(1, 8);
        for (int trial = 0; trial < 10000; ++trial) {
            const int n = dim(rng);
            AlphaVector a;
            a.v.resize(n);
            for (double& ai : a.v) ai = entry(rng);
            auto canon = normalize_alpha(a);
            auto beta = alpha_to_beta(canon);
            auto adm = beta_admissible(beta);
            REQUIRE(adm.admissible);
            REQUIRE(adm.failed_index == 0);
            double carried = 0.0;
            for (int m = 0; m < n; ++m) {
                const double shift = (m == 0 ? -0.5 : canon.v[m - 1] - 0.5);
                const double cap = shift * shift;
                const double half_ulp = 1.2e-16 * std::max(cap, std::abs(beta.v[m]));
                const double denom = std::max(std::abs(canon.v[m]), std::sqrt(half_ulp));
                carried = half_ulp / denom + std::abs(shift) / denom * carried;
                const double tol = 1e-14 * (1.0 + std::abs(canon.v[m])) + 8.0 * carried;
                CHECK(std::abs(adm.alpha->v[m] - canon.v[m]) <= tol);
            }
            // re-encoding error scales with the squares being differenced,
            // not with beta itself (small beta = cancellation of large caps)
            auto back = alpha_to_beta(*adm.alpha);
            for (int m = 0; m < n; ++m) {
                const double shift = (m == 0 ? -0.5 : adm.alpha->v[m - 1] - 0.5);
                const double scale = 1.0 + shift * shift + std::abs(beta.v[m]);
                CHECK(std::abs(back.v[m] - beta.v[m]) <= 1e-14 * scale);
            }
        }
    }
}

TEST_CASE("inadmissible coefficient vectors report the first failing index") {
    SUBCASE("first entry above the cap") {
        auto adm = beta_admissible(BetaVector{{0.3}});
        CHECK(!adm.admissible);
        CHECK(adm.failed_index == 1);
        CHECK(!adm.alpha.has_value());
    }
    SUBCASE("second entry above the cap") {
        auto adm = beta_admissible(BetaVector{{0.25, 0.26}});
        CHECK(!adm.admissible);
        CHECK(adm.failed_index == 2);
    }
    SUBCASE("exact boundary is admissible") {
        auto adm = beta_admissible(BetaVector{{0.25, 0.25, 0.25}});
        REQUIRE(adm.admissible);
        for (double ai : adm.alpha->v) CHECK(ai == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("radicand within the slack counts as zero") {
        auto near = beta_admissible(BetaVector{{0.25 + 1e-13}});
        CHECK(near.admissible);
        auto far = beta_admissible(BetaVector{{0.25 + 1e-9}});
        CHECK(!far.admissible);
    }
}

TEST_CASE("gamma partial sums recover the generator") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> entry(-2.0, 0.0);
    for (int trial = 0; trial < 200; ++trial) {
        AlphaVector a;
        a.v.resize(5);
        for (double& ai : a.v) ai = entry(rng);
        auto g = gamma_from_alpha(a);
        CHECK(g.v[0] == doctest::Approx(a.v[0] - 0.5).epsilon(1e-14));
        double partial = 0.0;
        for (int m = 0; m < 5; ++m) {
            partial += g.v[m];
            // sum_{j<=m} gamma_j = a_m + (m - 2)/2 with 1-based m
            const double expectd = a.v[m] + (m + 1 - 2) * 0.5;
            CHECK(std::abs(partial - expectd) <= 1e-13);
        }
    }
}

TEST_CASE("weight exponents and step constants for the quarter generator") {
    // alpha = (0,0,0), n = 3: gamma = (-1/2, 1/2, 1/2), sigma = (2, -2, -2),
    // c = (2, 1, 0); the last step degenerates with sigma_3 != 0.
    AlphaVector a{{0.0, 0.0, 0.0}};
    auto sc = sigma_and_c(gamma_from_alpha(a), 3);
    CHECK(sc.sigma.v[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sc.sigma.v[1] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(sc.sigma.v[2] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(sc.c[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sc.c[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(sc.c[2]) <= 1e-13);
    CHECK(!sc.step_constants_usable);
}

TEST_CASE("strictly subcritical last entry keeps the step constants usable") {
    AlphaVector a{{0.0, 0.0, -0.5}};
    auto sc = sigma_and_c(gamma_from_alpha(a), 3);
    // c_n = (2(n-1)/(n-2)) |a_n| = 4 * 0.5 = 2 for n = 3.
    CHECK(sc.c[2] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sc.sigma.v[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sc.step_constants_usable);
}

TEST_CASE("partial-sum and closed-form step constants agree") {
    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> entry(-2.0, 0.0);
    std::uniform_int_distribution<int> dim(3, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = dim(rng);
        AlphaVector a;
        a.v.resize(n);
        for (double& ai : a.v) ai = entry(rng);
        auto sc = sigma_and_c(gamma_from_alpha(a), n);
        for (int l = 0; l < n; ++l)
            CHECK(std::abs(sc.c[l] - sc.c_closed[l]) <= 1e-12 * (1.0 + std::abs(sc.c[l])));
    }
}

TEST_CASE("presets") {
    SUBCASE("corner") {
        for (int n : {3, 4, 5}) {
            for (int k = 1; k <= n; ++k) {
                auto a = preset(Preset::Corner, k, n);
                auto b = alpha_to_beta(a);
                for (int m = 0; m < k - 1; ++m) CHECK(b.v[m] == 0.0);
                CHECK(b.v[k - 1] == doctest::Approx(0.25 * k * k).epsilon(1e-15));
                for (int m = k; m < n; ++m)
                    CHECK(b.v[m] == doctest::Approx(0.25).epsilon(1e-15));
            }
        }
    }
    SUBCASE("all-quarter") {
        auto b = alpha_to_beta(preset(Preset::AllQuarter, 1, 4));
        for (double bi : b.v) CHECK(bi == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("trailing-zero") {
        auto b = alpha_to_beta(preset(Preset::TrailingZero, 1, 4));
        CHECK(b.v[0] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(b.v[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(b.v[2] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(b.v[3] == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("subcriticality flag follows the canonical last entry") {
    CHECK(!sobolev_remainder(AlphaVector{{0.0, 0.0, 0.0}}));
    CHECK(sobolev_remainder(AlphaVector{{0.0, 0.0, -0.1}}));
    // Non-canonical positive input is normalized first.
    CHECK(sobolev_remainder(AlphaVector{{0.0, 0.0, 0.1}}));
}

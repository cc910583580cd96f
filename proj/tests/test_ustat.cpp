#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ageing/generators.hpp"
#include "ageing/parallel.hpp"
#include "ageing/tests.hpp"
#include "ageing/ustat.hpp"

using namespace ageing;

namespace {

const KernelParams half{0.5};

double rel_diff(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

std::vector<double> random_sample(std::size_t n, SeedSpec seed, double scale = 1.0) {
    std::vector<double> xs = gen_base_exp(1.0, n, seed);
    for (double& x : xs) x *= scale;
    return xs;
}

void shuffle_in_place(std::vector<double>& xs, RngStream& rng) {
    for (std::size_t i = xs.size(); i > 1; --i) {
        std::swap(xs[i - 1], xs[rng.next_bits() % i]);
    }
}

} // namespace

TEST_CASE("generic U-statistics on hand-enumerated samples") {
    const std::vector<double> abc{1.0, 2.0, 3.0};
    CHECK(u_stat_deg2(abc, [](double x, double y) { return deshpande_rho(x, y, half); }) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const std::vector<double> ccc{3.3, 3.3, 3.3};
    CHECK(u_stat_deg2(ccc, [](double x, double y) { return ahmad_rho(x, y); }) == 0.0);
    const std::vector<double> two{1.0, 2.0};
    CHECK(u_stat_deg2(two, [](double x, double y) { return ahmad_rho(x, y); }) == 0.5);

    const std::vector<double> tri{1.0, 2.0, 4.0};
    CHECK(u_stat_deg3(tri, hp_rho) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(u_stat_deg3(ones, hp_rho) == 0.0);
    const std::vector<double> four{1.0, 2.0, 4.0, 8.0};
    CHECK(u_stat_deg3(four, hp_rho) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(u_stat_deg2(std::vector<double>{1.0},
                                [](double, double) { return 0.0; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(u_stat_deg3(std::vector<double>{1.0, 2.0}, hp_rho), std::invalid_argument);
}

TEST_CASE("statistic values and bounds on edge samples") {
    CHECK(deshpande_j(std::vector<double>{1.0, 2.0, 3.0}, half) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(deshpande_j(std::vector<double>{4.2, 4.2, 4.2, 4.2}, half) == 1.0);
    CHECK(deshpande_j(std::vector<double>{0.0, 0.0, 0.0}, half) == 0.0);
    CHECK_THROWS_AS(deshpande_j(std::vector<double>{1.0}, half), std::invalid_argument);

    CHECK(hp_n(std::vector<double>{1.0, 2.0, 4.0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(hp_n(std::vector<double>{1.0, 1.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(hp_n(std::vector<double>{1.0, 2.0}), std::invalid_argument);

    CHECK(ahmad_delta(std::vector<double>{1.0, 2.0}) == 0.5);
    CHECK(ahmad_delta(std::vector<double>{5.0, 5.0, 5.0}) == 0.0);
    CHECK(ahmad_delta(std::vector<double>{0.0, 4.0}) == -2.0);
    CHECK_THROWS_AS(ahmad_delta(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("deshpande fast path equals naive pair enumeration") {
    RngStream rng(SeedSpec{77, 0});
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.next_bits() % 39;
        const double scale = 0.25 + 3.0 * (trial % 7);
        const std::vector<double> xs =
            random_sample(n, SeedSpec{77, static_cast<std::uint64_t>(1 + trial)}, scale);
        const double fast = deshpande_j(xs, half);
        const double naive =
            u_stat_deg2(xs, [](double x, double y) { return deshpande_rho(x, y, half); });
        CHECK(rel_diff(fast, naive) <= 1e-12);
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0);
    }
}

TEST_CASE("hp counting path equals naive triple enumeration, ties included") {
    RngStream rng(SeedSpec{78, 0});
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.next_bits() % 38;
        std::vector<double> xs(n);
        // Half the trials use heavily tied lattice values (zeros included) to
        // exercise the tie conventions of the counting argument.
        for (double& x : xs) {
            x = (trial % 2 == 0) ? static_cast<double>(rng.next_bits() % 5)
                                 : -std::log((static_cast<double>(rng.next_bits() >> 11) + 0.5) *
                                             0x1p-53);
        }
        const double fast = hp_n(xs);
        const double naive = u_stat_deg3(xs, hp_rho);
        CHECK(rel_diff(fast, naive) <= 1e-12);
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0);
    }
}

TEST_CASE("permutation invariance of all three statistics") {
    RngStream rng(SeedSpec{79, 0});
    std::vector<double> xs = random_sample(60, SeedSpec{79, 1});
    const double j0 = deshpande_j(xs, half);
    const double n0 = hp_n(xs);
    const double d0 = ahmad_delta(xs);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        shuffle_in_place(xs, rng);
        CHECK(rel_diff(deshpande_j(xs, half), j0) <= 1e-12);
        CHECK(rel_diff(hp_n(xs), n0) <= 1e-12);
        CHECK(rel_diff(ahmad_delta(xs), d0) <= 1e-12);
        CHECK(std::fabs(ahmad_delta(xs)) <=
              1.5 * *std::max_element(xs.begin(), xs.end()));
    }
}

TEST_CASE("null means match the i.i.d. exponential theory at large n") {
    const std::size_t n = 5000;
    const std::size_t seeds = 100;
    std::vector<double> j(seeds), nn(seeds), dd(seeds);
    parallel_for(seeds, 0, [&](std::size_t s) {
        const std::vector<double> xs = gen_base_exp(1.0, n, SeedSpec{4242, s});
        j[s] = deshpande_j(xs, half);
        nn[s] = hp_n(xs);
        dd[s] = ahmad_delta(xs);
    });
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    // 3 Monte Carlo standard errors from the i.i.d. asymptotic variances
    // 4*xi1, 5/432 and 1/3 of the sqrt(n)-scaled statistics.
    const double dn = static_cast<double>(n) * static_cast<double>(seeds);
    CHECK(std::fabs(mean(j) - 2.0 / 3.0) < 3.0 * std::sqrt(4.0 * xi1_deshpande(0.5) / dn));
    CHECK(std::fabs(mean(nn) - 0.25) < 3.0 * std::sqrt(5.0 / 432.0 / dn));
    CHECK(std::fabs(mean(dd) - 0.0) < 3.0 * std::sqrt(1.0 / 3.0 / dn));
}

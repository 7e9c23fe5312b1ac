#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qkdrate/sources.hpp"

using namespace qkdrate;

TEST_CASE("poisson pmf: reference values and normalization") {
    const wcp_source src{0.1};
    CHECK(poisson_pmf(src, 0) == doctest::Approx(0.9048374180359595).epsilon(1e-14));
    CHECK(poisson_pmf(src, 1) == doctest::Approx(0.09048374180359596).epsilon(1e-14));
    CHECK(poisson_pmf(src, 2) == doctest::Approx(0.004524187090179798).epsilon(1e-12));

    double mass = 0.0;
    for (std::size_t n = 0; n < 30; ++n) mass += poisson_pmf(src, n);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(poisson_pmf(wcp_source{0.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(poisson_pmf(wcp_source{-0.1}, 1), std::invalid_argument);
}

TEST_CASE("poisson pmf: log-space branch agrees across the n=30 switch") {
    const wcp_source src{20.0};
    CHECK(poisson_pmf(src, 29) ==
          doctest::Approx(0.012515304368452648).epsilon(1e-12));
    CHECK(poisson_pmf(src, 35) ==
          doctest::Approx(0.0006853738999347045).epsilon(1e-12));
    // recurrence P(n+1)/P(n) = mu/(n+1) holds through the branch switch
    for (std::size_t n = 27; n <= 33; ++n) {
        CHECK(poisson_pmf(src, n + 1) / poisson_pmf(src, n) ==
              doctest::Approx(20.0 / static_cast<double>(n + 1)).epsilon(1e-10));
    }
    // mode at floor(mu): P(20) >= neighbors
    CHECK(poisson_pmf(src, 20) >= poisson_pmf(src, 19));
    CHECK(poisson_pmf(src, 20) >= poisson_pmf(src, 21));
}

TEST_CASE("at_least_one_click and its linearization bound") {
    CHECK(at_least_one_click(wcp_source{0.05}, 0.05) ==
          doctest::Approx(0.002496877602539876).epsilon(1e-14));
    CHECK(at_least_one_click(wcp_source{0.1}, 0.0) == 0.0);
    for (double mu : {0.05, 0.1, 0.5}) {
        for (double eta : {0.01, 0.1, 0.9}) {
            const double exact = at_least_one_click(wcp_source{mu}, eta);
            const double linear = mu * eta;
            CHECK(exact <= linear);
            CHECK(linear - exact <= 0.5 * linear * linear + 1e-16);
        }
    }
    CHECK_THROWS_AS(at_least_one_click(wcp_source{0.1}, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(at_least_one_click(wcp_source{0.1}, -0.1), std::invalid_argument);
}

TEST_CASE("spdc pmf: geometric law with reference values") {
    const spdc_source src{0.1};
    CHECK(spdc_pair_pmf(src, 0) == doctest::Approx(0.9900662908474399).epsilon(1e-14));
    CHECK(spdc_pair_pmf(src, 1) ==
          doctest::Approx(0.009835030575032565).epsilon(1e-14));
    const double ratio = std::tanh(0.1) * std::tanh(0.1);
    for (std::size_t n = 0; n < 5; ++n)
        CHECK(spdc_pair_pmf(src, n + 1) / spdc_pair_pmf(src, n) ==
              doctest::Approx(ratio).epsilon(1e-12));

    // chi = 0 is the vacuum
    CHECK(spdc_pair_pmf(spdc_source{0.0}, 0) == 1.0);
    CHECK(spdc_pair_pmf(spdc_source{0.0}, 3) == 0.0);
    CHECK_THROWS_AS(spdc_pair_pmf(spdc_source{-0.1}, 0), std::invalid_argument);
}

TEST_CASE("spdc mean pairs matches the weighted pmf sum") {
    CHECK(spdc_mean_pairs(spdc_source{0.1}) ==
          doctest::Approx(0.010033377809537924).epsilon(1e-14));
    for (double chi : {0.05, 0.1, 0.5, 1.0}) {
        const auto pmf = truncated_spdc_pmf(chi);
        double mean = 0.0;
        for (std::size_t n = 0; n < pmf.size(); ++n)
            mean += static_cast<double>(n) * pmf[n];
        CHECK(mean == doctest::Approx(spdc_mean_pairs(spdc_source{chi})).epsilon(1e-10));
    }
    CHECK(spdc_mean_pairs(spdc_source{0.0}) == 0.0);
}

TEST_CASE("truncated pmfs carry essentially all the mass") {
    for (double mu : {0.05, 0.1, 0.5, 2.0, 20.0}) {
        const auto pmf = truncated_poisson_pmf(mu);
        REQUIRE(!pmf.empty());
        const double mass = std::accumulate(pmf.begin(), pmf.end(), 0.0);
        CHECK(mass >= 1.0 - 1e-13);
        CHECK(mass <= 1.0 + 1e-13);
        for (double p : pmf) CHECK(p >= 0.0);
        // entries match the closed form
        for (std::size_t n = 0; n < pmf.size(); n += pmf.size() / 3 + 1)
            CHECK(pmf[n] == doctest::Approx(poisson_pmf(wcp_source{mu}, n)).epsilon(1e-10));
    }
    for (double chi : {0.1, 0.5, 1.5}) {
        const auto pmf = truncated_spdc_pmf(chi);
        const double mass = std::accumulate(pmf.begin(), pmf.end(), 0.0);
        CHECK(mass >= 1.0 - 1e-13);
        for (std::size_t n = 0; n < pmf.size(); ++n)
            CHECK(pmf[n] == doctest::Approx(spdc_pair_pmf(spdc_source{chi}, n)).epsilon(1e-12));
    }
    CHECK(truncated_spdc_pmf(0.0).size() == 1);
    CHECK(truncated_spdc_pmf(0.0)[0] == 1.0);
    CHECK_THROWS_AS(truncated_poisson_pmf(0.0), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>

#include "qglat/measure.hpp"

using namespace qglat;

TEST_CASE("spectral coverage grows toward full measure") {
    lattice_params p(1.0, 3.0, 4.0);
    double c3 = sigma_measure(p, 1e3, 200000);
    double c4 = sigma_measure(p, 1e4, 200000);
    CHECK(c3 == doctest::Approx(0.978840).epsilon(2e-4));
    CHECK(c4 == doctest::Approx(0.993680).epsilon(2e-4));
    CHECK(c4 > c3);
    CHECK(c3 > 0.0);
    CHECK(c3 < 1.0);
}

TEST_CASE("perturbed set has asymptotic density one half") {
    lattice_params golden(0.5 * (std::sqrt(5.0) + 1.0), 1.0, -2.72, -2.0);
    double s = s_measure(golden, 2000.0 * 2000.0, 400000);
    CHECK(s == doctest::Approx(0.5).epsilon(0.04));
    lattice_params ratio2(2.0, 1.0, 1.5, 0.5);
    double s2 = s_measure(ratio2, 2000.0 * 2000.0, 400000);
    CHECK(s2 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("branch split depends only on the edge ratio") {
    // a = 2b: splits 1/3 and 2/3
    auto [p1a, p2a] = xi_split(lattice_params(2.0, 1.0, 1.5), 4e6, 500000);
    CHECK(p1a == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(p2a == doctest::Approx(2.0 / 3.0).epsilon(0.02));
    CHECK(p1a + p2a == doctest::Approx(1.0).epsilon(0.005));
    // incommensurate golden ratio: equidistribution, 1/2 each
    auto [p1g, p2g] = xi_split(
        lattice_params(0.5 * (std::sqrt(5.0) + 1.0), 1.0, -2.72), 4e6, 500000);
    CHECK(p1g == doctest::Approx(0.5).epsilon(0.02));
    CHECK(p2g == doctest::Approx(0.5).epsilon(0.02));
    CHECK(p1g + p2g == doctest::Approx(1.0).epsilon(0.005));

    // K below the admissible momentum window is rejected
    CHECK_THROWS_AS(xi_split(lattice_params(2.0, 1.0, 1.5), 100.0, 1000),
                    invalid_argument_error);
    CHECK_THROWS_AS(xi_split(lattice_params(2.0, 1.0, 1.5), -1.0, 1000),
                    invalid_argument_error);
    CHECK_THROWS_AS(xi_split(lattice_params(2.0, 1.0, 1.5), 4e6, 0),
                    invalid_argument_error);
}

TEST_CASE("measure report bundles the estimates") {
    lattice_params p(2.0, 1.0, 1.5, 0.5);
    auto rep = compute_measure_report(p, 2000.0, 1000000);
    CHECK(rep.K == 4e6);
    CHECK(rep.sample_count == 1000000);
    CHECK(rep.estimator == estimator_kind::grid);
    CHECK(rep.xi_cutoff_k == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(rep.p1 == doctest::Approx(0.333601).epsilon(1e-4));
    CHECK(rep.p2 == doctest::Approx(0.666399).epsilon(1e-4));
    REQUIRE(rep.p_s.has_value());
    CHECK(*rep.p_s == doctest::Approx(0.5).epsilon(0.02));
    CHECK(rep.p_sigma > 0.99);
    CHECK(rep.p_sigma >= *rep.p_s);

    // without the line coupling the perturbed fraction is absent
    auto rep0 = compute_measure_report(lattice_params(2.0, 1.0, 1.5), 2000.0,
                                       10000);
    CHECK(!rep0.p_s.has_value());
    CHECK(rep0.p_sigma > 0.9);

    CHECK_THROWS_AS(compute_measure_report(p, -2.0, 1000),
                    invalid_argument_error);
    CHECK_THROWS_AS(s_measure(lattice_params(2.0, 1.0, 1.5), 100.0, 1000),
                    missing_gamma_tilde_error);
}

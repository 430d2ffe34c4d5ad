#include <doctest.h>

#include <cmath>

#include "qglat/dispersion.hpp"
#include "qglat/numerics.hpp"
#include "qglat/unperturbed.hpp"

using namespace qglat;

namespace {
constexpr double pi = 3.14159265358979323846;

void check_bands(const band_set& bs, const std::vector<energy_interval>& want,
                 double rel) {
    REQUIRE(bs.bands.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) {
        double scale = 1.0 + std::abs(want[i].lo) + std::abs(want[i].hi);
        CAPTURE(i);
        CHECK(bs.bands[i].lo == doctest::Approx(want[i].lo).epsilon(rel * scale));
        CHECK(bs.bands[i].hi == doctest::Approx(want[i].hi).epsilon(rel * scale));
    }
}
}  // namespace

TEST_CASE("spectrum of the 1:3 lattice at repulsive coupling") {
    lattice_params p(1.0, 3.0, 4.0);
    auto bs = compute_bands(p, energy_interval(0.0, 60.0));
    check_bands(bs,
                {{0.58433005283588924, 1.0966227112321507},
                 {1.961033555167415, pi * pi},
                 {11.699093769056455, 4.0 * pi * pi},
                 {41.427362588232533, 60.0}},
                1e-9);
    CHECK(!bs.negative_band.has_value());
    // band k-edges recovered from the energies
    CHECK(std::sqrt(bs.bands[0].lo) ==
          doctest::Approx(0.764414843420246).epsilon(1e-9));
    CHECK(std::sqrt(bs.bands[1].lo) ==
          doctest::Approx(1.4003690782030955).epsilon(1e-9));
    CHECK(std::sqrt(bs.bands[2].lo) ==
          doctest::Approx(3.4203938032632035).epsilon(1e-9));
    CHECK(std::sqrt(bs.bands[3].lo) ==
          doctest::Approx(6.43640913789984).epsilon(1e-9));
    // flat-band energies sit at the tops of the second and third bands
    REQUIRE(bs.flat_bands.size() == 2);
    CHECK(bs.flat_bands[0] == doctest::Approx(pi * pi).epsilon(1e-12));
    CHECK(bs.flat_bands[1] == doctest::Approx(4.0 * pi * pi).epsilon(1e-12));

    auto gaps = classify_gap_edges(p, bs);
    REQUIRE(gaps.size() == 3);
    for (const auto& g : gaps) {
        // repulsive coupling: gaps open upward from the singular lattice
        CHECK(g.left_edge_kind == edge_kind::xi_point);
        CHECK(g.right_edge_kind == edge_kind::condition_edge);
    }
    CHECK(gaps[0].interval.lo == doctest::Approx(pi * pi / 9.0).epsilon(1e-12));
    CHECK(gaps[1].interval.lo == doctest::Approx(pi * pi).epsilon(1e-12));
    CHECK(gaps[2].interval.lo ==
          doctest::Approx(4.0 * pi * pi).epsilon(1e-12));
}

TEST_CASE("spectrum of the square lattice") {
    lattice_params p(2.0, 2.0, 1.0);
    auto bs = compute_bands(p, energy_interval(0.0, 60.0));
    check_bands(bs,
                {{0.2304906684, 2.4674011003},
                 {2.9429647909, 9.8696044011},
                 {10.3625956374, 22.2066099025},
                 {22.7034039941, 39.4784176044},
                 {39.9765954922, 60.0}},
                1e-8);
    // every multiple of pi/2 in momentum is a flat point: j^2 pi^2 / 4
    REQUIRE(bs.flat_bands.size() == 4);
    for (size_t j = 1; j <= 4; ++j) {
        CHECK(bs.flat_bands[j - 1] ==
              doctest::Approx(j * j * pi * pi / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("spectrum of the golden-ratio lattice with one open gap") {
    lattice_params p(0.5 * (std::sqrt(5.0) + 1.0), 1.0, -2.72);
    auto bs = compute_bands(p, energy_interval(0.0, 40.0));
    REQUIRE(bs.bands.size() >= 2);
    CHECK(bs.bands[0].lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(bs.bands[0].hi ==
          doctest::Approx(3.7164633927027286).epsilon(1e-9));
    CHECK(bs.bands[1].lo ==
          doctest::Approx(3.7698534257005845).epsilon(1e-9));
    // incommensurate edges: no flat bands anywhere
    CHECK(bs.flat_bands.empty());
    CHECK(flat_bands(p, 1e6).empty());

    auto gaps = classify_gap_edges(p, bs);
    REQUIRE(gaps.size() >= 1);
    double c = gaps[0].interval.center();
    CHECK(c > 3.5);
    CHECK(c < 4.0);
    // attractive coupling: orientation flips, condition edge on the left
    CHECK(gaps[0].left_edge_kind == edge_kind::condition_edge);
    CHECK(gaps[0].right_edge_kind == edge_kind::xi_point);
}

TEST_CASE("flat band energies follow the rational ratio") {
    // b/a = 2/3: common momenta j * 3 pi / 3 = j pi, energies j^2 pi^2
    auto fb = flat_bands(lattice_params(3.0, 2.0, 1.0), 100.0);
    REQUIRE(fb.size() == 3);
    for (size_t j = 1; j <= 3; ++j) {
        CHECK(fb[j - 1] ==
              doctest::Approx(j * j * pi * pi).epsilon(1e-12));
    }
    auto fb13 = flat_bands(lattice_params(1.0, 3.0, -1.0), 15.0);
    REQUIRE(fb13.size() == 1);
    CHECK(fb13[0] == doctest::Approx(pi * pi).epsilon(1e-12));
}

TEST_CASE("negative band decay rates solve their edge equations") {
    lattice_params p4(1.0, 3.0, -4.0);
    double k1 = negative_kappa1(p4);
    CHECK(k1 == doctest::Approx(1.303965643497695).epsilon(1e-10));
    CHECK(std::abs(-4.0 / (2.0 * k1) + std::tanh(0.5 * k1) +
                   std::tanh(1.5 * k1)) < 1e-10);
    // gamma above gamma_star = -16/3: no second decay rate, band tops at 0
    CHECK(!negative_kappa2(p4).has_value());
    auto nb4 = negative_band(p4);
    REQUIRE(nb4.has_value());
    CHECK(nb4->lo == doctest::Approx(-k1 * k1).epsilon(1e-10));
    CHECK(nb4->hi == 0.0);

    lattice_params p6(1.0, 3.0, -6.0);
    double k1b = negative_kappa1(p6);
    CHECK(k1b == doctest::Approx(1.766635633799469).epsilon(1e-10));
    auto k2 = negative_kappa2(p6);
    REQUIRE(k2.has_value());
    CHECK(*k2 == doctest::Approx(0.727665249566976).epsilon(1e-10));
    CHECK(std::abs(-6.0 / (2.0 * *k2) + 1.0 / std::tanh(0.5 * *k2) +
                   1.0 / std::tanh(1.5 * *k2)) < 1e-10);
    auto nb6 = negative_band(p6);
    REQUIRE(nb6.has_value());
    CHECK(nb6->lo == doctest::Approx(-k1b * k1b).epsilon(1e-10));
    CHECK(nb6->hi == doctest::Approx(-*k2 * *k2).epsilon(1e-10));

    CHECK(!negative_band(lattice_params(1.0, 3.0, 0.5)).has_value());
    CHECK_THROWS_AS(negative_kappa1(lattice_params(1.0, 3.0, 0.5)),
                    domain_error);
}

TEST_CASE("zero energy membership switches at gamma_star and zero") {
    lattice_params p(1.0, 3.0, 0.0);
    double gs = p.gamma_star();  // -16/3
    CHECK(zero_in_spectrum(lattice_params(1.0, 3.0, 0.0)));
    CHECK(zero_in_spectrum(lattice_params(1.0, 3.0, gs)));
    CHECK(zero_in_spectrum(lattice_params(1.0, 3.0, -2.0)));
    CHECK(!zero_in_spectrum(lattice_params(1.0, 3.0, 0.1)));
    CHECK(!zero_in_spectrum(lattice_params(1.0, 3.0, gs - 1e-9)));
}

TEST_CASE("negative band is included in windowed spectra") {
    lattice_params p(1.0, 3.0, -6.0);
    auto bs = compute_bands(p, energy_interval(-5.0, 10.0));
    REQUIRE(bs.negative_band.has_value());
    CHECK(bs.negative_band->lo == doctest::Approx(-3.1210015e+00).epsilon(1e-6));
    CHECK(bs.negative_band->hi == doctest::Approx(-0.5294967e+00).epsilon(1e-6));
    // the negative band also appears as the first entry of the band list
    REQUIRE(!bs.bands.empty());
    CHECK(bs.bands[0].lo == doctest::Approx(bs.negative_band->lo).epsilon(1e-12));

    // gamma in (gamma_star, 0): band reaches up to E = 0 and the positive
    // bands attach continuously at the bottom of the spectrum
    lattice_params q(1.0, 3.0, -4.0);
    auto bq = compute_bands(q, energy_interval(-5.0, 10.0));
    REQUIRE(bq.negative_band.has_value());
    CHECK(bq.negative_band->hi == 0.0);
    CHECK(bq.bands[0].lo == doctest::Approx(bq.negative_band->lo).epsilon(1e-12));
    CHECK(bq.bands[0].hi > 0.0);
}

TEST_CASE("membership scan agrees with the envelope inequality") {
    for (double g : {4.0, -2.5}) {
        lattice_params p(1.0, 3.0, g);
        int checked = 0;
        for (int i = 1; i <= 4000; ++i) {
            double k = 8.0 * i / 4000.0;
            if (classify_momentum(p, k).in_xi) continue;
            auto [fp, fm] = f_plus_minus(p, k);
            double r = g / (2.0 * k);
            CAPTURE(g);
            CAPTURE(k);
            REQUIRE(band_membership_positive(p, k) == (fm <= r && r <= fp));
            ++checked;
        }
        CHECK(checked > 3900);
    }
}

TEST_CASE("singular momenta always belong to the spectrum") {
    for (double g : {7.0, 0.3, -1.0, -8.0}) {
        lattice_params p(1.0, 3.0, g);
        for (int m = 1; m <= 6; ++m) {
            CHECK(band_membership_positive(p, m * pi / 3.0));
        }
        CHECK(band_membership_positive(p, pi));  // a-lattice point
    }
}

TEST_CASE("edge classification by energy") {
    lattice_params p(1.0, 3.0, 4.0);
    auto [kind1, k1] = classify_edge_energy(p, pi * pi / 9.0);
    CHECK(kind1 == edge_kind::xi_point);
    CHECK(k1 == doctest::Approx(pi / 3.0).epsilon(1e-12));
    auto [kind2, k2] = classify_edge_energy(p, 1.961033555167415);
    CHECK(kind2 == edge_kind::condition_edge);
    CHECK(k2 == doctest::Approx(1.4003690782030955).epsilon(1e-9));
    CHECK_THROWS_AS(classify_edge_energy(p, 1.5), unclassified_edge_error);

    lattice_params pn(1.0, 3.0, -6.0);
    double kap1 = negative_kappa1(pn);
    auto [kindn, kapn] = classify_edge_energy(pn, -kap1 * kap1);
    CHECK(kindn == edge_kind::condition_edge);
    CHECK(kapn == doctest::Approx(1.766635633799469).epsilon(1e-10));
    CHECK_THROWS_AS(classify_edge_energy(pn, -1.0), unclassified_edge_error);
}

TEST_CASE("windowed spectra are stable against window changes") {
    lattice_params p(1.0, 3.0, 4.0);
    auto bs1 = compute_bands(p, energy_interval(0.0, 25.0));
    auto bs2 = compute_bands(p, energy_interval(0.0, 60.0));
    REQUIRE(bs1.bands.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(bs1.bands[i].lo ==
              doctest::Approx(bs2.bands[i].lo).epsilon(1e-10));
        double hi_ref = std::min(bs2.bands[i].hi, 25.0);
        CHECK(bs1.bands[i].hi == doctest::Approx(hi_ref).epsilon(1e-10));
    }
}

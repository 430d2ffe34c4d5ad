// End-to-end exercise of the shared-library C API. Uses only qglat.h.

#include <qglat.h>

#include <cmath>
#include <cstdio>
#include <cstring>

namespace {

int g_failures = 0;

#define CHECK(cond)                                                         \
    do {                                                                    \
        if (!(cond)) {                                                      \
            std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__,    \
                         #cond);                                            \
            ++g_failures;                                                   \
        }                                                                   \
    } while (0)

#define CHECK_STATUS(expr, want)                                            \
    do {                                                                    \
        qg_status st_ = (expr);                                             \
        if (st_ != (want)) {                                                \
            std::fprintf(stderr, "FAIL %s:%d: %s -> %s (want %s)\n",        \
                         __FILE__, __LINE__, #expr, qg_status_name(st_),    \
                         qg_status_name(want));                             \
            ++g_failures;                                                   \
        }                                                                   \
    } while (0)

bool near(double x, double y, double rel) {
    return std::fabs(x - y) <=
           rel * (1.0 + std::fmax(std::fabs(x), std::fabs(y)));
}

#define CHECK_NEAR(x, y, rel)                                               \
    do {                                                                    \
        double x_ = (x);                                                    \
        double y_ = (y);                                                    \
        if (!near(x_, y_, rel)) {                                           \
            std::fprintf(stderr, "FAIL %s:%d: %s = %.17g, want %.17g\n",    \
                         __FILE__, __LINE__, #x, x_, y_);                   \
            ++g_failures;                                                   \
        }                                                                   \
    } while (0)

constexpr double pi = 3.14159265358979323846;

void test_version_and_status_names() {
    CHECK(std::strncmp(qg_version(), "qglat", 5) == 0);
    CHECK(std::strcmp(qg_status_name(QG_OK), "QG_OK") == 0);
    CHECK(std::strcmp(qg_status_name(QG_ERR_SINGULAR), "QG_ERR_SINGULAR") ==
          0);
    CHECK(qg_last_error() != nullptr);
}

void test_lattice_lifecycle() {
    qg_lattice* lat = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, 4.0, &lat), QG_OK);
    CHECK(lat != nullptr);

    double gs = 0.0;
    CHECK_STATUS(qg_lattice_gamma_star(lat, &gs), QG_OK);
    CHECK_NEAR(gs, -16.0 / 3.0, 1e-15);

    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 1.0), QG_OK);
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, NAN),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK(qg_last_error()[0] != '\0');
    CHECK_STATUS(qg_lattice_clear_gamma_tilde(lat), QG_OK);
    qg_lattice_free(lat);

    // invalid geometry is rejected at creation
    qg_lattice* bad = nullptr;
    CHECK_STATUS(qg_lattice_create(-1.0, 3.0, 4.0, &bad),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, 4.0, nullptr),
                 QG_ERR_INVALID_ARGUMENT);
}

void test_membership() {
    qg_lattice* lat = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, 4.0, &lat), QG_OK);

    int m = -1;
    CHECK_STATUS(qg_band_membership(lat, 1.0, &m), QG_OK);
    CHECK(m == 1);
    CHECK_STATUS(qg_band_membership(lat, 1.44, &m), QG_OK);
    CHECK(m == 0);
    // singular momenta belong to the spectrum even at dispersion poles
    CHECK_STATUS(qg_band_membership(lat, (pi / 3.0) * (pi / 3.0), &m), QG_OK);
    CHECK(m == 1);
    CHECK_STATUS(qg_band_membership(lat, 0.0, &m), QG_OK);
    CHECK(m == 0);

    // perturbed-set membership needs the line coupling
    CHECK_STATUS(qg_s_membership(lat, 1.7, &m), QG_ERR_MISSING_GAMMA_TILDE);
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 1.0), QG_OK);
    CHECK_STATUS(qg_s_membership(lat, 1.7, &m), QG_OK);
    CHECK(m == 1);
    CHECK_STATUS(qg_s_membership(lat, 1.2, &m), QG_OK);
    CHECK(m == 0);
    CHECK_STATUS(qg_s_membership(lat, 11.65, &m), QG_OK);
    CHECK(m == 1);
    CHECK_STATUS(qg_band_membership(lat, 1.0, nullptr),
                 QG_ERR_INVALID_ARGUMENT);
    qg_lattice_free(lat);

    // attractive lattice: negative energies and the zero boundary
    qg_lattice* att = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, -6.0, &att), QG_OK);
    CHECK_STATUS(qg_band_membership(att, -1.0, &m), QG_OK);
    CHECK(m == 1);
    CHECK_STATUS(qg_band_membership(att, -4.0, &m), QG_OK);
    CHECK(m == 0);
    CHECK_STATUS(qg_band_membership(att, -0.4, &m), QG_OK);
    CHECK(m == 0);
    CHECK_STATUS(qg_band_membership(att, 0.0, &m), QG_OK);
    CHECK(m == 0);
    qg_lattice_free(att);

    qg_lattice* crit = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, -16.0 / 3.0, &crit), QG_OK);
    CHECK_STATUS(qg_band_membership(crit, 0.0, &m), QG_OK);
    CHECK(m == 1);
    qg_lattice_free(crit);
}

void test_spectrum() {
    qg_lattice* lat = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, 4.0, &lat), QG_OK);

    qg_spectrum* sp = nullptr;
    CHECK_STATUS(qg_spectrum_compute(lat, 60.0, 0.0, &sp),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK(sp == nullptr);
    CHECK_STATUS(qg_spectrum_compute(lat, 0.0, 60.0, &sp), QG_OK);
    CHECK(qg_last_error()[0] == '\0');

    const double want_bands[4][2] = {
        {0.58433005283588924, 1.0966227112321507},
        {1.961033555167415, 9.869604401089358},
        {11.699093769056455, 39.47841760435743},
        {41.427362588232533, 60.0},
    };
    size_t nb = 0;
    CHECK_STATUS(qg_spectrum_band_count(sp, &nb), QG_OK);
    CHECK(nb == 4);
    for (size_t i = 0; i < nb && i < 4; ++i) {
        double lo = 0.0, hi = 0.0;
        int kind = -1;
        CHECK_STATUS(qg_spectrum_band(sp, i, &lo, &hi, &kind), QG_OK);
        CHECK_NEAR(lo, want_bands[i][0], 1e-9);
        CHECK_NEAR(hi, want_bands[i][1], 1e-9);
        CHECK(kind == QG_BAND_AC);
    }

    size_t nf = 0;
    CHECK_STATUS(qg_spectrum_flat_count(sp, &nf), QG_OK);
    CHECK(nf == 2);
    double fe = 0.0;
    CHECK_STATUS(qg_spectrum_flat(sp, 0, &fe), QG_OK);
    CHECK_NEAR(fe, pi * pi, 1e-12);
    CHECK_STATUS(qg_spectrum_flat(sp, 1, &fe), QG_OK);
    CHECK_NEAR(fe, 4.0 * pi * pi, 1e-12);
    CHECK_STATUS(qg_spectrum_flat(sp, 2, &fe), QG_ERR_INVALID_ARGUMENT);

    int has_neg = -1;
    CHECK_STATUS(qg_spectrum_has_negative_band(sp, &has_neg), QG_OK);
    CHECK(has_neg == 0);
    double lo = 0.0, hi = 0.0;
    CHECK_STATUS(qg_spectrum_negative_band(sp, &lo, &hi), QG_ERR_DOMAIN);

    // the three finite gaps: pole-edge on the left, threshold on the right
    const double want_left_k[3] = {pi / 3.0, pi, 2.0 * pi};
    const double want_right_k[3] = {1.4003690782030955, 3.4203938032632035,
                                    6.43640913789984};
    size_t ng = 0;
    CHECK_STATUS(qg_spectrum_gap_count(sp, &ng), QG_OK);
    CHECK(ng == 3);
    for (size_t i = 0; i < ng && i < 3; ++i) {
        double glo = 0.0, ghi = 0.0, lk = 0.0, rk = 0.0;
        int lkind = -1, rkind = -1;
        CHECK_STATUS(
            qg_spectrum_gap(sp, i, &glo, &ghi, &lkind, &rkind, &lk, &rk),
            QG_OK);
        CHECK_NEAR(glo, want_bands[i][1], 1e-9);
        CHECK_NEAR(ghi, want_bands[i + 1][0], 1e-9);
        CHECK(lkind == QG_EDGE_XI);
        CHECK(rkind == QG_EDGE_CONDITION);
        CHECK_NEAR(lk, want_left_k[i], 1e-9);
        CHECK_NEAR(rk, want_right_k[i], 1e-9);
    }
    double d = 0.0;
    int idum = 0;
    CHECK_STATUS(qg_spectrum_gap(sp, 3, &d, &d, &idum, &idum, &d, &d),
                 QG_ERR_INVALID_ARGUMENT);
    qg_spectrum_free(sp);
    qg_lattice_free(lat);

    // strongly attractive lattice carries a detached negative band
    qg_lattice* att = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, -6.0, &att), QG_OK);
    qg_spectrum* spn = nullptr;
    CHECK_STATUS(qg_spectrum_compute(att, -5.0, 10.0, &spn), QG_OK);
    CHECK_STATUS(qg_spectrum_has_negative_band(spn, &has_neg), QG_OK);
    CHECK(has_neg == 1);
    CHECK_STATUS(qg_spectrum_negative_band(spn, &lo, &hi), QG_OK);
    CHECK_NEAR(lo, -3.1210014626100517, 1e-9);
    CHECK_NEAR(hi, -0.5294967154273694, 1e-9);
    size_t nbn = 0;
    CHECK_STATUS(qg_spectrum_band_count(spn, &nbn), QG_OK);
    CHECK(nbn >= 2);
    double blo = 0.0, bhi = 0.0;
    int kind = -1;
    CHECK_STATUS(qg_spectrum_band(spn, 0, &blo, &bhi, &kind), QG_OK);
    CHECK_NEAR(blo, -3.1210014626100517, 1e-9);
    CHECK_NEAR(bhi, -0.5294967154273694, 1e-9);
    qg_spectrum_free(spn);
    qg_lattice_free(att);
}

void test_perturbed() {
    qg_lattice* lat = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, 4.0, &lat), QG_OK);

    qg_perturbed_report* rep = nullptr;
    CHECK_STATUS(qg_perturbed_compute(lat, 0.0, 60.0, &rep),
                 QG_ERR_MISSING_GAMMA_TILDE);
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 4.0), QG_OK);
    CHECK_STATUS(qg_perturbed_compute(lat, 0.0, 60.0, &rep),
                 QG_ERR_NO_PERTURBATION);
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 1.0), QG_OK);
    CHECK_STATUS(qg_perturbed_compute(lat, 0.0, 60.0, &rep), QG_OK);

    int rc = 0;
    CHECK_STATUS(qg_perturbed_case(rep, &rc), QG_OK);
    CHECK(rc == QG_CASE_III);
    int unchanged = -1;
    CHECK_STATUS(qg_perturbed_unchanged(rep, &unchanged), QG_OK);
    CHECK(unchanged == 0);

    size_t ng = 0;
    CHECK_STATUS(qg_perturbed_gap_count(rep, &ng), QG_OK);
    CHECK(ng == 4);

    const double want_nb[4][2] = {
        {0.43523106799755917, 0.58433005283588924},
        {1.5798079464170593, 1.961033555167415},
        {11.628234934935941, 11.699093769056455},
        {41.402648100719951, 41.427362588232533},
    };
    const int want_cond[4] = {QG_CONDITION_MINUS, QG_CONDITION_MINUS,
                              QG_CONDITION_PLUS, QG_CONDITION_MINUS};
    for (size_t i = 0; i < ng && i < 4; ++i) {
        double glo = 0.0, ghi = 0.0;
        int lkind = -1, rkind = -1;
        CHECK_STATUS(qg_perturbed_gap(rep, i, &glo, &ghi, &lkind, &rkind),
                     QG_OK);
        if (i == 0) {
            CHECK(lkind == QG_EDGE_SPECTRUM_BOTTOM);
            CHECK(glo < -100.0);
            CHECK_NEAR(ghi, 0.58433005283588924, 1e-9);
        }
        int has = -1;
        CHECK_STATUS(qg_perturbed_gap_has_band(rep, i, &has), QG_OK);
        CHECK(has == 1);
        double lo = 0.0, hi = 0.0;
        int cond = -1, tl = -1, tu = -1;
        CHECK_STATUS(qg_perturbed_gap_band(rep, i, &lo, &hi, &cond, &tl, &tu),
                     QG_OK);
        CHECK_NEAR(lo, want_nb[i][0], 1e-9);
        CHECK_NEAR(hi, want_nb[i][1], 1e-9);
        CHECK(cond == want_cond[i]);
        CHECK(tl == 0);
        CHECK(tu == 1);
    }

    size_t ncg = 0;
    CHECK_STATUS(qg_perturbed_closed_gap_count(rep, &ncg), QG_OK);
    CHECK(ncg == 0);
    qg_perturbed_report_free(rep);

    // strong attraction at the line closes the first gap
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, -4.0), QG_OK);
    qg_perturbed_report* rep2 = nullptr;
    CHECK_STATUS(qg_perturbed_compute(lat, 0.0, 60.0, &rep2), QG_OK);
    CHECK_STATUS(qg_perturbed_closed_gap_count(rep2, &ncg), QG_OK);
    CHECK(ncg == 1);
    double clo = 0.0, chi = 0.0;
    CHECK_STATUS(qg_perturbed_closed_gap(rep2, 0, &clo, &chi), QG_OK);
    CHECK_NEAR(clo, 1.0966227112321507, 1e-9);
    CHECK_NEAR(chi, 1.961033555167415, 1e-9);
    qg_perturbed_report_free(rep2);

    // repulsion stronger at the line leaves the spectrum unchanged
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 7.0), QG_OK);
    qg_perturbed_report* rep3 = nullptr;
    CHECK_STATUS(qg_perturbed_compute(lat, 0.0, 60.0, &rep3), QG_OK);
    CHECK_STATUS(qg_perturbed_case(rep3, &rc), QG_OK);
    CHECK(rc == QG_CASE_IV);
    CHECK_STATUS(qg_perturbed_unchanged(rep3, &unchanged), QG_OK);
    CHECK(unchanged == 1);
    CHECK_STATUS(qg_perturbed_gap_count(rep3, &ng), QG_OK);
    for (size_t i = 0; i < ng; ++i) {
        int has = -1;
        CHECK_STATUS(qg_perturbed_gap_has_band(rep3, i, &has), QG_OK);
        CHECK(has == 0);
    }
    double d = 0.0;
    int idum = 0;
    CHECK_STATUS(qg_perturbed_gap_band(rep3, 0, &d, &d, &idum, &idum, &idum),
                 QG_ERR_DOMAIN);
    qg_perturbed_report_free(rep3);
    qg_lattice_free(lat);
}

void test_fiber() {
    qg_lattice* lat = nullptr;
    CHECK_STATUS(qg_lattice_create(1.0, 3.0, 4.0, &lat), QG_OK);
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 1.0), QG_OK);

    qg_fiber_result* fr = nullptr;
    CHECK_STATUS(qg_fiber_compute(lat, NAN, 0.0, 60.0, &fr),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK_STATUS(qg_fiber_compute(lat, 4.0, 0.0, 60.0, &fr),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK_STATUS(qg_fiber_compute(lat, 0.0, 1.0, 1.0, &fr),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK_STATUS(qg_fiber_compute(lat, 0.0, 0.0, 60.0, &fr), QG_OK);

    const double want_bands[5][2] = {
        {0.584330052841585, 0.801759737377119},
        {3.56290050618591, 6.89717760337272},
        {17.1801946879228, 23.0928367889733},
        {30.5365567007516, 39.478417703728},
        {41.4273625904704, 50.2429287428484},
    };
    size_t nb = 0;
    CHECK_STATUS(qg_fiber_band_count(fr, &nb), QG_OK);
    CHECK(nb == 5);
    for (size_t i = 0; i < nb && i < 5; ++i) {
        double lo = 0.0, hi = 0.0;
        CHECK_STATUS(qg_fiber_band(fr, i, &lo, &hi), QG_OK);
        CHECK_NEAR(lo, want_bands[i][0], 1e-7);
        CHECK_NEAR(hi, want_bands[i][1], 1e-7);
    }

    // zero twist binds a mode below the first band and in the third gap
    size_t ne = 0;
    CHECK_STATUS(qg_fiber_eigenvalue_count(fr, &ne), QG_OK);
    CHECK(ne == 2);
    double e = 0.0, lam = 0.0, loc = 0.0;
    int branch = -1;
    CHECK_STATUS(qg_fiber_eigenvalue(fr, 0, &e, &branch, &lam, &loc), QG_OK);
    CHECK_NEAR(e, 0.435231067997559, 1e-9);
    CHECK(branch == QG_BRANCH_LOWER);
    CHECK_NEAR(lam, 0.321673257119751, 1e-9);
    CHECK_NEAR(loc, 1.0 / std::fabs(std::log(std::fabs(lam))), 1e-12);
    CHECK_STATUS(qg_fiber_eigenvalue(fr, 1, &e, &branch, &lam, &loc), QG_OK);
    CHECK_NEAR(e, 41.40264810072, 1e-9);
    CHECK(branch == QG_BRANCH_LOWER);
    CHECK_NEAR(lam, 0.965479831770089, 1e-9);
    CHECK_STATUS(qg_fiber_eigenvalue(fr, 2, &e, &branch, &lam, &loc),
                 QG_ERR_INVALID_ARGUMENT);

    // geometric, mirror-symmetric vertex profile
    double prof[7] = {0};
    CHECK_STATUS(qg_fiber_mode_profile(fr, 0, 3, prof, 7), QG_OK);
    CHECK_NEAR(prof[3], 1.0, 1e-12);
    CHECK_NEAR(prof[4], 0.321673257119751, 1e-9);
    CHECK_NEAR(prof[2], prof[4], 1e-12);
    CHECK_NEAR(prof[0], prof[6], 1e-12);
    CHECK_NEAR(prof[5], prof[4] * prof[4], 1e-9);
    CHECK_STATUS(qg_fiber_mode_profile(fr, 0, 3, prof, 6),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK_STATUS(qg_fiber_mode_profile(fr, 0, -1, prof, 7),
                 QG_ERR_INVALID_ARGUMENT);
    qg_fiber_result_free(fr);

    // opposite twist: modes sit in the first two finite gaps instead
    qg_fiber_result* fpi = nullptr;
    CHECK_STATUS(qg_fiber_compute(lat, pi, 0.0, 16.0, &fpi), QG_OK);
    CHECK_STATUS(qg_fiber_band_count(fpi, &nb), QG_OK);
    CHECK(nb == 3);
    CHECK_STATUS(qg_fiber_eigenvalue_count(fpi, &ne), QG_OK);
    CHECK(ne == 2);
    CHECK_STATUS(qg_fiber_eigenvalue(fpi, 0, &e, &branch, &lam, &loc), QG_OK);
    CHECK_NEAR(e, 1.57980794641706, 1e-9);
    CHECK(branch == QG_BRANCH_LOWER);
    CHECK_NEAR(lam, 0.377663703501321, 1e-9);
    CHECK_STATUS(qg_fiber_eigenvalue(fpi, 1, &e, &branch, &lam, &loc), QG_OK);
    CHECK_NEAR(e, 11.6282349349359, 1e-9);
    CHECK(branch == QG_BRANCH_UPPER);
    CHECK_NEAR(lam, -0.890119208069355, 1e-9);

    // negative transfer eigenvalue alternates the profile sign
    double prof5[5] = {0};
    CHECK_STATUS(qg_fiber_mode_profile(fpi, 1, 2, prof5, 5), QG_OK);
    CHECK_NEAR(prof5[2], 1.0, 1e-12);
    CHECK(prof5[3] < 0.0);
    CHECK_NEAR(prof5[3], -0.890119208069355, 1e-9);
    CHECK(prof5[4] > 0.0);
    CHECK_NEAR(prof5[1], prof5[3], 1e-12);
    qg_fiber_result_free(fpi);

    // without the line coupling the fiber carries bands but no bound modes
    CHECK_STATUS(qg_lattice_clear_gamma_tilde(lat), QG_OK);
    qg_fiber_result* fplain = nullptr;
    CHECK_STATUS(qg_fiber_compute(lat, 0.0, 0.0, 60.0, &fplain), QG_OK);
    CHECK_STATUS(qg_fiber_band_count(fplain, &nb), QG_OK);
    CHECK(nb == 5);
    CHECK_STATUS(qg_fiber_eigenvalue_count(fplain, &ne), QG_OK);
    CHECK(ne == 0);
    CHECK_STATUS(qg_fiber_mode_profile(fplain, 0, 1, prof, 3),
                 QG_ERR_INVALID_ARGUMENT);
    qg_fiber_result_free(fplain);
    qg_lattice_free(lat);
}

void test_measure() {
    qg_lattice* lat = nullptr;
    CHECK_STATUS(qg_lattice_create(2.0, 1.0, 1.0, &lat), QG_OK);
    CHECK_STATUS(qg_lattice_set_gamma_tilde(lat, 2.0), QG_OK);

    qg_measure_report rep;
    CHECK_STATUS(qg_measure_compute(lat, -1.0, 1000, &rep),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK_STATUS(qg_measure_compute(lat, 2000.0, 0, &rep),
                 QG_ERR_INVALID_ARGUMENT);
    CHECK_STATUS(qg_measure_compute(lat, 2000.0, 1000000, &rep), QG_OK);

    CHECK_NEAR(rep.k_energy_cutoff, 4.0e6, 1e-12);
    CHECK_NEAR(rep.xi_cutoff_k, 20.0, 1e-12);
    CHECK(rep.sample_count == 1000000);
    CHECK(rep.estimator == 0);
    CHECK(rep.has_p_s == 1);
    CHECK(std::fabs(rep.p_s - 0.5) <= 0.02);
    CHECK(rep.p_sigma > 0.95);
    CHECK_NEAR(rep.p1, 0.333601, 1e-3);
    CHECK_NEAR(rep.p2, 0.666399, 1e-3);
    CHECK(std::fabs(rep.p1 + rep.p2 - 1.0) <= 0.005);

    // without the line coupling only the lattice measure is reported
    CHECK_STATUS(qg_lattice_clear_gamma_tilde(lat), QG_OK);
    CHECK_STATUS(qg_measure_compute(lat, 2000.0, 100000, &rep), QG_OK);
    CHECK(rep.has_p_s == 0);
    qg_lattice_free(lat);
}

}  // namespace

int main() {
    test_version_and_status_names();
    test_lattice_lifecycle();
    test_membership();
    test_spectrum();
    test_perturbed();
    test_fiber();
    test_measure();
    if (g_failures == 0) {
        std::printf("test_capi: all checks passed\n");
        return 0;
    }
    std::fprintf(stderr, "test_capi: %d check(s) failed\n", g_failures);
    return 1;
}

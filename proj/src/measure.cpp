#include "qglat/measure.hpp"

#include <cmath>

#include "qglat/dispersion.hpp"
#include "qglat/perturbed.hpp"
#include "qglat/unperturbed.hpp"

namespace qglat {

namespace {

void check_args(double K, long long samples, const char* who) {
    if (!(std::isfinite(K) && K > 0.0)) {
        throw invalid_argument_error(std::string(who) +
                                     ": K must be positive");
    }
    if (samples < 1) {
        throw invalid_argument_error(std::string(who) +
                                     ": samples must be >= 1");
    }
}

}  // namespace

double sigma_measure(const lattice_params& p, double K, long long samples) {
    check_args(K, samples, "sigma_measure");
    long long hits = 0;
    for (long long i = 0; i < samples; ++i) {
        double e = (i + 0.5) * K / (double)samples;
        if (band_membership_positive(p, std::sqrt(e))) ++hits;
    }
    return (double)hits / (double)samples;
}

double s_measure(const lattice_params& p, double K, long long samples) {
    check_args(K, samples, "s_measure");
    p.tilde();
    long long hits = 0;
    for (long long i = 0; i < samples; ++i) {
        double e = (i + 0.5) * K / (double)samples;
        if (s_membership(p, spectral_point::from_energy(e))) ++hits;
    }
    return (double)hits / (double)samples;
}

std::pair<double, double> xi_split(const lattice_params& p, double K,
                                   long long samples) {
    check_args(K, samples, "xi_split");
    double cutoff = 20.0 / p.min_edge();
    double k_hi = std::sqrt(K);
    if (!(k_hi > cutoff)) {
        throw invalid_argument_error(
            "xi_split: K below the high-energy cutoff");
    }
    long long c1 = 0;
    long long c2 = 0;
    for (long long i = 0; i < samples; ++i) {
        double k = cutoff + (i + 0.5) * (k_hi - cutoff) / (double)samples;
        auto [x1, x2] = xi_functions(p, k);
        if (x1 <= 0.0) ++c1;
        if (x2 <= 0.0) ++c2;
    }
    return {(double)c1 / (double)samples, (double)c2 / (double)samples};
}

measure_report compute_measure_report(const lattice_params& p, double k_max,
                                      long long samples) {
    if (!(std::isfinite(k_max) && k_max > 0.0)) {
        throw invalid_argument_error(
            "compute_measure_report: k_max must be positive");
    }
    double K = k_max * k_max;
    measure_report rep;
    rep.K = K;
    rep.sample_count = samples;
    rep.estimator = estimator_kind::grid;
    rep.xi_cutoff_k = 20.0 / p.min_edge();
    rep.p_sigma = sigma_measure(p, K, samples);
    if (p.has_perturbation()) rep.p_s = s_measure(p, K, samples);
    auto [p1, p2] = xi_split(p, K, samples);
    rep.p1 = p1;
    rep.p2 = p2;
    return rep;
}

}  // namespace qglat

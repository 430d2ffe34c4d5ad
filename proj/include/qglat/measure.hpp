#pragma once

#include <optional>
#include <utility>

#include "qglat/types.hpp"

namespace qglat {

enum class estimator_kind { grid, monte_carlo };

struct measure_report {
    double K = 0.0;  // energy cutoff
    double p_sigma = 0.0;
    std::optional<double> p_s;  // absent without gamma_tilde
    double p1 = 0.0;
    double p2 = 0.0;
    long long sample_count = 0;
    estimator_kind estimator = estimator_kind::grid;
    double xi_cutoff_k = 0.0;  // momenta below this excluded from the split
};

// Fraction of [0, K] covered by the unperturbed spectrum, estimated on a
// stratified midpoint grid in energy (deterministic).
double sigma_measure(const lattice_params& p, double K, long long samples);

// Fraction of [0, K] covered by the perturbed set; requires gamma_tilde.
double s_measure(const lattice_params& p, double K, long long samples);

// High-energy branch split (p1, p2): fractions of momenta in
// (20/min(a,b), sqrt(K)] on which the two splitting functions are
// non-positive. p1 + p2 = 1 up to the tie set.
std::pair<double, double> xi_split(const lattice_params& p, double K,
                                   long long samples);

// Bundles the three estimates at energy cutoff k_max^2.
measure_report compute_measure_report(const lattice_params& p, double k_max,
                                      long long samples);

}  // namespace qglat

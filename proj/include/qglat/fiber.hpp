#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qglat/types.hpp"
#include "qglat/dispersion.hpp"

namespace qglat {

// Branch of the transfer-matrix spectrum a discrete eigenvalue sits on:
// lower for f > 1, upper for f < -1.
enum class fiber_branch { lower, upper };

struct fiber_eigenvalue {
    fiber_params fiber;
    spectral_point point;
    fiber_branch branch = fiber_branch::lower;
    double lambda_decaying = 0.0;     // transfer eigenvalue with |.| < 1
    double localization_length = 0.0; // 1/|log|lambda||, in units of a
};

// Decaying mode profile on the vertex chain: (j, nu_j) with nu_0 = 1 and
// |nu_j| = |lambda|^{|j|}.
struct mode_profile {
    std::vector<std::pair<int, double>> vertex_values;
    double decay_rate = 0.0;
};

// Membership of an energy in the band of one fiber, |f_tau| <= 1. At a pole
// of f the two one-sided limits are consulted: their common value when they
// agree, membership of the closure otherwise.
bool fiber_band_membership(const lattice_params& p, const fiber_params& fp,
                           const spectral_point& e);

// Bands of a single fiber inside the window (membership scan + bisection).
std::vector<energy_interval> fiber_bands(const lattice_params& p,
                                         const fiber_params& fp,
                                         const energy_interval& window);

// Transfer-matrix eigenvalue pair (lambda_plus, lambda_minus) at a spectral
// gap point, lambda_plus >= lambda_minus as named by the +- square-root
// branch: product is exactly 1, and for f > 1, 0 < lambda_minus < 1 <
// lambda_plus while for f < -1, lambda_minus < -1 < lambda_plus < 0.
// domain_error ("inside fiber band") when |f_tau| < 1.
std::pair<double, double> transfer_eigenvalues(const lattice_params& p,
                                               const fiber_params& fp,
                                               const spectral_point& e);

// The at-most-one discrete eigenvalue the perturbed coupling inserts into a
// spectral gap of one fiber. Scans the branch-resolved eigenvalue residual
// on a doubling grid (tol::gap_scan_init start) until the sign-change count
// stabilizes; one change is bisected to an eigenvalue, none yields nullopt,
// and two or more raise internal_error ("uniqueness violation"). Endpoints
// that merge into a band edge are not reported as eigenvalues.
std::optional<fiber_eigenvalue> fiber_discrete_eigenvalue(
    const lattice_params& p, const fiber_params& fp, const gap_record& gap);

// Vertex values of the decaying solution for j in [-j_max, j_max].
mode_profile compute_mode_profile(const fiber_eigenvalue& ev, int j_max);

namespace detail {

// Branch-resolved residual vanishing exactly at the discrete eigenvalue of
// one fiber inside a gap; scaled to stay finite at negative energy and
// sign-continuous across zero. domain_error when |f_tau| < 1.
double fiber_eigenvalue_residual(const lattice_params& p, double tau,
                                 double energy);

}  // namespace detail

}  // namespace qglat

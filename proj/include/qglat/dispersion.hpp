#pragma once

#include <utility>

#include "qglat/types.hpp"

namespace qglat {

enum class branch_sign { plus, minus };

// Which spectral-condition family a point satisfies under the perturbed
// coupling: the f < -1 branch (in_s_plus), the f > 1 branch (in_s_minus),
// or neither.
enum class bc_result { in_s_plus, in_s_minus, not_in_s };

enum class edge_family { type1_odd, type1_even, type2, negative };

// Threshold couplings attached to a gap edge. Fields that do not apply to
// the populated family stay NaN. Type-1 records carry the constants of both
// momentum parities together with the discriminants rho (odd) and sigma
// (even); a negative discriminant means that momentum is not a gap edge and
// leaves the corresponding pair NaN. *_first_situation flags the degenerate
// alignment sin(k a) = 0 where both tau-limits diverge and no finite
// threshold exists.
struct edge_constants {
    edge_family kind = edge_family::type2;

    double gamma_tilde_o_plus = qnan;
    double gamma_tilde_o_minus = qnan;
    double gamma_tilde_e_plus = qnan;
    double gamma_tilde_e_minus = qnan;
    double rho = qnan;
    double sigma = qnan;
    bool odd_first_situation = false;
    bool even_first_situation = false;

    double gamma_tilde_p1 = qnan;  // trivial threshold (equals gamma)
    double gamma_tilde_p2 = qnan;  // non-trivial threshold of the gap branch

    double gamma_tilde_n1 = qnan;  // negative-edge threshold above gamma
    double gamma_tilde_n2 = qnan;  // negative-edge threshold below gamma
};

// Fiber dispersion value at positive energy; pole at k b in pi Z
// (singular_error) and requires k > 0, |tau| <= 1.
double f_tau(const lattice_params& p, double tau, double k);

// Negative-energy counterpart (hyperbolic), kappa > 0. Overflows cleanly to
// +-inf for very large kappa*a instead of producing NaN.
double f_hat_tau(const lattice_params& p, double tau, double kappa);

// Envelope of the fiber dispersion over both transverse parameters:
// maximum (first) and minimum (second) at momentum k, in the scaled form
// whose band condition reads F_minus <= gamma/(2k) <= F_plus. Singular on
// the union of the two momentum lattices.
std::pair<double, double> f_plus_minus(const lattice_params& p, double k);

double gamma_star(const lattice_params& p);

// Sign function separating the two perturbed spectral-condition branches:
// (gamma_tilde - gamma) sin(k a)/(2k) at positive energy and the sinh
// analogue at negative energy. Requires gamma_tilde; zero energy is out of
// domain.
double perturbation_sign_fn(const lattice_params& p, const spectral_point& e);

// Residual of the unperturbed band condition in multiplied (pole-free)
// form; the point belongs to a band iff the residual is <= 0 (up to
// tolerance). Exact zeros occur at singular momenta, all of which lie in
// the spectrum.
double band_condition_residual(const lattice_params& p, double k);
double band_condition_residual_negative(const lattice_params& p, double kappa);

// Residual of the perturbed condition in multiplied/scaled form, <= 0 on
// the perturbed set. Handles all three energy signs; requires gamma_tilde.
double s_condition_residual(const lattice_params& p, const spectral_point& e);

// Branch-resolved membership in the perturbed set.
bc_result bc_membership(const lattice_params& p, const spectral_point& e);

// Coupling threshold curves bounding the perturbed set inside gaps:
// g(tau; k) = gamma +- (2k/sin(k a)) sqrt(f_tau^2 - 1) and the hyperbolic
// analogue at negative energy. Requires |f_tau| >= 1 (domain_error "inside
// fiber band" otherwise) and a momentum off both singular lattices.
double edge_curve_g(const lattice_params& p, double tau,
                    const spectral_point& e, branch_sign branch);

// Edge-threshold constants at the pure b-lattice momenta (2n-1) pi / b
// (odd) and 2n pi / b (even), n >= 1.
edge_constants type1_edge_limits(const lattice_params& p, int n);

// Edge-threshold constants at a positive-energy band edge that is not a
// singular momentum. Requires the band condition to hold with equality at k.
edge_constants type2_edge_limits(const lattice_params& p, double k);

// Edge-threshold constants at a negative-energy band edge kappa.
edge_constants negative_edge_limits(const lattice_params& p, double kappa);

// Couplings at which the band condition is tangent at k = n pi / a, so the
// gap there closes: returns (gamma_n_plus, gamma_n_minus). Fails with
// domain_error when sin(n pi b / a) = 0.
std::pair<double, double> interior_gammas(const lattice_params& p, int n);

// High-energy splitting functions (xi1, xi2) whose signs decide which
// branch of the perturbed condition is active as k -> inf.
std::pair<double, double> xi_functions(const lattice_params& p, double k);

}  // namespace qglat

#include "qglat/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "qglat/numerics.hpp"

namespace qglat {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

void require_positive_k(double k, const char* who) {
    if (!(std::isfinite(k) && k > 0.0)) {
        throw domain_error(std::string(who) + ": momentum must be positive");
    }
}

void require_tau(double tau, const char* who) {
    if (!std::isfinite(tau) || std::abs(tau) > 1.0 + 1e-12) {
        throw domain_error(std::string(who) + ": tau outside [-1, 1]");
    }
}

// scaled hyperbolic dispersion value u = f_hat / sinh(kappa a); finite for
// every kappa > 0 where the raw value can overflow
double u_scaled(const lattice_params& p, double tau, double kappa) {
    return p.gamma / (2.0 * kappa) + coth(kappa * p.a) + coth(kappa * p.b) -
           tau / std::sinh(kappa * p.b);
}

// membership slack keeping tangential gap closures inside the band set
double membership_slack(const lattice_params& p) {
    return 1e-12 * (1.0 + std::abs(p.gamma)) * (1.0 + p.a + p.b);
}

}  // namespace

double f_tau(const lattice_params& p, double tau, double k) {
    require_positive_k(k, "f_tau");
    require_tau(tau, "f_tau");
    if (classify_momentum(p, k).in_xi_b) {
        throw singular_error("f_tau: singular at Xi_b");
    }
    double sa = std::sin(k * p.a);
    double sb = std::sin(k * p.b);
    return p.gamma * sa / (2.0 * k) +
           (std::sin(k * (p.a + p.b)) - tau * sa) / sb;
}

double f_hat_tau(const lattice_params& p, double tau, double kappa) {
    require_positive_k(kappa, "f_hat_tau");
    require_tau(tau, "f_hat_tau");
    return u_scaled(p, tau, kappa) * std::sinh(kappa * p.a);
}

std::pair<double, double> f_plus_minus(const lattice_params& p, double k) {
    require_positive_k(k, "f_plus_minus");
    if (classify_momentum(p, k).in_xi) {
        throw singular_error("f_plus_minus: singular on Xi");
    }
    // half-angle reduced to (0, pi/2) on each momentum lattice cell
    auto reduced = [](double x) {
        return 0.5 * x - 0.5 * M_PI * std::floor(x / M_PI);
    };
    double ra = reduced(k * p.a);
    double rb = reduced(k * p.b);
    double fp = std::tan(ra) + std::tan(rb);
    double fm = -1.0 / std::tan(ra) - 1.0 / std::tan(rb);
    return {fp, fm};
}

double gamma_star(const lattice_params& p) { return p.gamma_star(); }

double perturbation_sign_fn(const lattice_params& p, const spectral_point& e) {
    double dg = p.tilde() - p.gamma;
    switch (e.sign) {
        case energy_sign::positive:
            return dg * std::sin(e.k * p.a) / (2.0 * e.k);
        case energy_sign::negative:
            return dg * std::sinh(e.kappa * p.a) / (2.0 * e.kappa);
        case energy_sign::zero:
            throw domain_error("perturbation_sign_fn: zero energy out of domain");
    }
    throw internal_error("perturbation_sign_fn: bad energy sign");
}

double band_condition_residual(const lattice_params& p, double k) {
    require_positive_k(k, "band_condition_residual");
    double sa = std::sin(k * p.a);
    double sb = std::sin(k * p.b);
    return std::abs(p.gamma * sa * sb / (2.0 * k) + std::sin(k * (p.a + p.b))) -
           std::abs(sb) - std::abs(sa);
}

double band_condition_residual_negative(const lattice_params& p,
                                        double kappa) {
    require_positive_k(kappa, "band_condition_residual_negative");
    double u = p.gamma / (2.0 * kappa) + coth(kappa * p.a) + coth(kappa * p.b);
    return std::abs(u) - 1.0 / std::sinh(kappa * p.a) -
           1.0 / std::sinh(kappa * p.b);
}

double s_condition_residual(const lattice_params& p, const spectral_point& e) {
    double dg = p.tilde() - p.gamma;
    if (dg == 0.0) return 1.0;  // empty set: positive sentinel
    switch (e.sign) {
        case energy_sign::positive: {
            double k = e.k;
            double sa = std::sin(k * p.a);
            double sb = std::sin(k * p.b);
            double a_full =
                p.gamma * sa * sb / (2.0 * k) + std::sin(k * (p.a + p.b));
            double g = dg * sa / (2.0 * k);
            if (g == 0.0) {
                // exactly on the a-lattice: strict branch sign undefined,
                // report the closure residual of the nearer branch
                double w1 = std::abs(a_full + sb);
                double w2 = std::abs(a_full - sb);
                return std::min(w1, w2) - std::abs(sa);
            }
            double root = std::sqrt(g * g + 1.0);
            double w = a_full + (g > 0.0 ? root : -root) * sb;
            return std::abs(w) - std::abs(sa);
        }
        case energy_sign::negative: {
            double kappa = e.kappa;
            double u = p.gamma / (2.0 * kappa) + coth(kappa * p.a) +
                       coth(kappa * p.b);
            double isha = 1.0 / std::sinh(kappa * p.a);
            double half = dg / (2.0 * kappa);
            double root = std::sqrt(half * half + isha * isha);
            double sgn = dg > 0.0 ? 1.0 : -1.0;
            return std::abs(u + sgn * root) - 1.0 / std::sinh(kappa * p.b);
        }
        case energy_sign::zero: {
            double half = dg * p.a / 2.0;
            double root = std::sqrt(half * half + 1.0);
            double sgn = dg > 0.0 ? 1.0 : -1.0;
            return std::abs((p.a + p.b) + p.gamma * p.a * p.b / 2.0 +
                            sgn * p.b * root) -
                   p.a;
        }
    }
    throw internal_error("s_condition_residual: bad energy sign");
}

bc_result bc_membership(const lattice_params& p, const spectral_point& e) {
    double dg = p.tilde() - p.gamma;
    if (dg == 0.0) return bc_result::not_in_s;
    double slack = membership_slack(p) * (1.0 + std::abs(dg));
    if (s_condition_residual(p, e) > slack) return bc_result::not_in_s;
    if (e.sign == energy_sign::positive) {
        double g = perturbation_sign_fn(p, e);
        if (g > 0.0) return bc_result::in_s_plus;
        if (g < 0.0) return bc_result::in_s_minus;
        return bc_result::not_in_s;  // exactly on the a-lattice
    }
    return dg > 0.0 ? bc_result::in_s_plus : bc_result::in_s_minus;
}

double edge_curve_g(const lattice_params& p, double tau,
                    const spectral_point& e, branch_sign branch) {
    require_tau(tau, "edge_curve_g");
    double sgn = branch == branch_sign::plus ? 1.0 : -1.0;
    switch (e.sign) {
        case energy_sign::positive: {
            if (classify_momentum(p, e.k).in_xi) {
                throw singular_error("edge_curve_g: singular on Xi");
            }
            double f = f_tau(p, tau, e.k);
            double disc = f * f - 1.0;
            if (disc < 0.0) {
                throw domain_error("edge_curve_g: inside fiber band");
            }
            return p.gamma +
                   sgn * (2.0 * e.k / std::sin(e.k * p.a)) * std::sqrt(disc);
        }
        case energy_sign::negative: {
            double u = u_scaled(p, tau, e.kappa);
            double isha = 1.0 / std::sinh(e.kappa * p.a);
            double disc = u * u - isha * isha;  // (f_hat^2 - 1)/sinh^2
            if (disc < 0.0) {
                throw domain_error("edge_curve_g: inside fiber band");
            }
            return p.gamma + sgn * 2.0 * e.kappa * std::sqrt(disc);
        }
        case energy_sign::zero: {
            // kappa -> 0 limit of the hyperbolic branch
            double f0 = p.gamma * p.a / 2.0 + (p.a + p.b - tau * p.a) / p.b;
            double disc = f0 * f0 - 1.0;
            if (disc < 0.0) {
                throw domain_error("edge_curve_g: inside fiber band");
            }
            return p.gamma + sgn * (2.0 / p.a) * std::sqrt(disc);
        }
    }
    throw internal_error("edge_curve_g: bad energy sign");
}

edge_constants type1_edge_limits(const lattice_params& p, int n) {
    if (n < 1) {
        throw invalid_argument_error("type1_edge_limits: n must be >= 1");
    }
    edge_constants ec;
    ec.kind = edge_family::type1_odd;  // record covers both parities
    {
        double k0 = (2.0 * n - 1.0) * M_PI / p.b;
        double sa = std::sin(k0 * p.a);
        if (std::abs(sa) < tol::xi_rel * std::max(1.0, k0 * p.a)) {
            ec.odd_first_situation = true;
        } else {
            double t = (4.0 * n - 2.0) * M_PI;
            double base = p.b * p.gamma * sa + t * std::cos(k0 * p.a);
            ec.rho = base * base - t * t;
            if (ec.rho >= 0.0) {
                double step = std::sqrt(ec.rho) / (p.b * sa);
                ec.gamma_tilde_o_plus = p.gamma + step;
                ec.gamma_tilde_o_minus = p.gamma - step;
            }
        }
    }
    {
        double k0 = 2.0 * n * M_PI / p.b;
        double sa = std::sin(k0 * p.a);
        if (std::abs(sa) < tol::xi_rel * std::max(1.0, k0 * p.a)) {
            ec.even_first_situation = true;
        } else {
            double t = 4.0 * n * M_PI;
            double base = p.b * p.gamma * sa + t * std::cos(k0 * p.a);
            ec.sigma = base * base - t * t;
            if (ec.sigma >= 0.0) {
                double step = std::sqrt(ec.sigma) / (p.b * sa);
                ec.gamma_tilde_e_plus = p.gamma + step;
                ec.gamma_tilde_e_minus = p.gamma - step;
            }
        }
    }
    return ec;
}

edge_constants type2_edge_limits(const lattice_params& p, double k) {
    require_positive_k(k, "type2_edge_limits");
    if (classify_momentum(p, k).in_xi) {
        throw domain_error("type2_edge_limits: singular momentum");
    }
    double resid = band_condition_residual(p, k);
    double tol_edge =
        1e-6 * (1.0 + std::abs(p.gamma)) * (p.a + p.b) * std::max(1.0, k);
    if (std::abs(resid) > tol_edge) {
        throw domain_error("type2_edge_limits: not at a band edge");
    }
    double sa = std::sin(k * p.a);
    double sb = std::sin(k * p.b);
    double a_val = p.gamma * sa / (2.0 * k) + std::sin(k * (p.a + p.b)) / sb;
    double b_val = sa / sb;
    double m = 1.0 + 2.0 * std::abs(b_val);
    // the gap-side fibers share the sign of a_val; positive sign pairs with
    // the minus threshold curve
    double dir = a_val > 0.0 ? -1.0 : 1.0;
    edge_constants ec;
    ec.kind = edge_family::type2;
    ec.gamma_tilde_p1 = p.gamma;
    ec.gamma_tilde_p2 =
        p.gamma + dir * (2.0 * k / sa) * std::sqrt(m * m - 1.0);
    return ec;
}

edge_constants negative_edge_limits(const lattice_params& p, double kappa) {
    require_positive_k(kappa, "negative_edge_limits");
    double resid = band_condition_residual_negative(p, kappa);
    double tol_edge = 1e-6 * (1.0 + std::abs(p.gamma)) * (p.a + p.b) *
                      std::max(1.0, kappa);
    if (std::abs(resid) > tol_edge) {
        throw domain_error("negative_edge_limits: not at a band edge");
    }
    double isha = 1.0 / std::sinh(kappa * p.a);
    double ishb = 1.0 / std::sinh(kappa * p.b);
    double outer = isha + 2.0 * ishb;
    double step = 2.0 * kappa * std::sqrt(outer * outer - isha * isha);
    edge_constants ec;
    ec.kind = edge_family::negative;
    ec.gamma_tilde_n1 = p.gamma + step;
    ec.gamma_tilde_n2 = p.gamma - step;
    return ec;
}

std::pair<double, double> interior_gammas(const lattice_params& p, int n) {
    if (n < 1) {
        throw invalid_argument_error("interior_gammas: n must be >= 1");
    }
    double kn = n * M_PI / p.a;
    double arg = kn * p.b;
    if (std::abs(std::sin(arg)) < tol::xi_rel * std::max(1.0, arg)) {
        throw domain_error("interior_gammas: sin(k b) vanishes");
    }
    double t = std::tan(0.5 * arg);
    return {2.0 * kn * t, -2.0 * kn / t};
}

std::pair<double, double> xi_functions(const lattice_params& p, double k) {
    require_positive_k(k, "xi_functions");
    double xi1 = std::abs(std::sin(k * (0.5 * p.a + p.b))) -
                 std::abs(std::sin(0.5 * k * p.a));
    double xi2 = std::abs(std::cos(k * (0.5 * p.a + p.b))) -
                 std::abs(std::cos(0.5 * k * p.a));
    return {xi1, xi2};
}

}  // namespace qglat

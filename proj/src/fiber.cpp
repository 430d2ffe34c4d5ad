#include "qglat/fiber.hpp"

#include <algorithm>
#include <cmath>

#include "qglat/numerics.hpp"

namespace qglat {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

// scaled hyperbolic dispersion value f_hat / sinh(kappa a)
double u_scaled(const lattice_params& p, double tau, double kappa) {
    return p.gamma / (2.0 * kappa) + coth(kappa * p.a) + coth(kappa * p.b) -
           tau / std::sinh(kappa * p.b);
}

// kappa -> 0 limit of f_hat
double f_zero(const lattice_params& p, double tau) {
    return p.gamma * p.a / 2.0 + (p.a + p.b - tau * p.a) / p.b;
}

bool member_positive(const lattice_params& p, double tau, double k) {
    return std::abs(f_tau(p, tau, k)) <= 1.0;
}

}  // namespace

namespace detail {

double fiber_eigenvalue_residual(const lattice_params& p, double tau,
                                 double energy) {
    double dg = p.tilde() - p.gamma;
    if (energy > 0.0) {
        double k = std::sqrt(energy);
        double f = f_tau(p, tau, k);
        double disc = f * f - 1.0;
        if (disc < 0.0) {
            throw domain_error("fiber_eigenvalue_residual: inside fiber band");
        }
        double s = f < 0.0 ? 1.0 : -1.0;
        return dg * std::sin(k * p.a) / (2.0 * k) - s * std::sqrt(disc);
    }
    if (energy < 0.0) {
        double kappa = std::sqrt(-energy);
        double u = u_scaled(p, tau, kappa);
        double isha = 1.0 / std::sinh(kappa * p.a);
        double disc = u * u - isha * isha;
        if (disc < 0.0) {
            throw domain_error("fiber_eigenvalue_residual: inside fiber band");
        }
        double s = u < 0.0 ? 1.0 : -1.0;
        return dg / (2.0 * kappa) - s * std::sqrt(disc);
    }
    double f0 = f_zero(p, tau);
    double disc = f0 * f0 - 1.0;
    if (disc < 0.0) {
        throw domain_error("fiber_eigenvalue_residual: inside fiber band");
    }
    double s = f0 < 0.0 ? 1.0 : -1.0;
    return dg * p.a / 2.0 - s * std::sqrt(disc);
}

}  // namespace detail

bool fiber_band_membership(const lattice_params& p, const fiber_params& fp,
                           const spectral_point& e) {
    switch (e.sign) {
        case energy_sign::positive: {
            if (classify_momentum(p, e.k).in_xi_b) {
                // pole of f: agree -> one-sided value, disagree -> closure
                double h = xi_offset(p);
                double klo = e.k - h;
                double khi = e.k + h;
                bool left = klo > 0.0 ? member_positive(p, fp.tau, klo)
                                      : member_positive(p, fp.tau, khi);
                bool right = member_positive(p, fp.tau, khi);
                return left == right ? left : true;
            }
            return member_positive(p, fp.tau, e.k);
        }
        case energy_sign::negative: {
            double u = u_scaled(p, fp.tau, e.kappa);
            return std::abs(u) <= 1.0 / std::sinh(e.kappa * p.a);
        }
        case energy_sign::zero:
            return std::abs(f_zero(p, fp.tau)) <= 1.0;
    }
    throw internal_error("fiber_band_membership: bad energy sign");
}

std::vector<energy_interval> fiber_bands(const lattice_params& p,
                                         const fiber_params& fp,
                                         const energy_interval& window) {
    if (!(window.lo < window.hi)) {
        throw invalid_argument_error(
            "fiber_bands: window must have positive width");
    }
    std::vector<energy_interval> raw;
    bool zero_state = std::abs(f_zero(p, fp.tau)) <= 1.0;
    double dq = 1.0 / (tol::scan_density * p.max_edge());

    if (window.hi > 0.0) {
        double k_hi = std::sqrt(window.hi);
        std::vector<double> nodes;
        nodes.reserve((size_t)(k_hi / dq) + 64);
        for (size_t i = 1; i * dq < k_hi; ++i) nodes.push_back(i * dq);
        for (double edge : {p.a, p.b}) {
            for (int m = 1; m * M_PI / edge < k_hi * (1.0 + 1e-15); ++m) {
                nodes.push_back(m * M_PI / edge);
            }
        }
        nodes.push_back(k_hi);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end(),
                                [&](double x, double y) {
                                    return std::abs(y - x) < dq * 1e-9;
                                }),
                    nodes.end());
        auto member = [&](double k) {
            return fiber_band_membership(p, fp, spectral_point::from_k(k));
        };
        bool prev_state = zero_state;
        double prev_k = 0.0;
        bool open = prev_state;
        double start = 0.0;
        for (double k : nodes) {
            bool st = member(k);
            if (st != prev_state) {
                double lo = prev_k > 0.0 ? prev_k : std::min(1e-12, 0.5 * k);
                double ke =
                    bisect_predicate(member, lo, prev_state, k,
                                     tol::edge_bisect * std::max(1.0, k));
                if (st) {
                    start = ke;
                    open = true;
                } else if (open) {
                    raw.push_back(energy_interval(start * start, ke * ke));
                    open = false;
                }
            }
            prev_state = st;
            prev_k = k;
        }
        if (open) raw.push_back(energy_interval(start * start, k_hi * k_hi));
    }

    if (window.lo < 0.0) {
        double kap_hi = std::sqrt(-window.lo);
        double kap_lo = window.hi < 0.0 ? std::sqrt(-window.hi) : 0.0;
        auto member = [&](double kap) {
            return fiber_band_membership(p, fp, spectral_point::from_kappa(kap));
        };
        bool prev_state = kap_lo > 0.0 ? member(kap_lo) : zero_state;
        double prev_kap = kap_lo;
        bool open = prev_state;
        double start = kap_lo;
        size_t n = (size_t)std::ceil((kap_hi - kap_lo) / dq) + 1;
        for (size_t i = 1; i <= n; ++i) {
            double kap = std::min(kap_lo + i * dq, kap_hi);
            bool st = member(kap);
            if (st != prev_state) {
                double lo =
                    prev_kap > 0.0 ? prev_kap : std::min(1e-12, 0.5 * kap);
                double ke =
                    bisect_predicate(member, lo, prev_state, kap,
                                     tol::edge_bisect * std::max(1.0, kap));
                if (st) {
                    start = ke;
                    open = true;
                } else if (open) {
                    raw.push_back(
                        energy_interval(-ke * ke, -start * start));
                    open = false;
                }
            }
            prev_state = st;
            prev_kap = kap;
            if (kap >= kap_hi) break;
        }
        if (open) {
            raw.push_back(energy_interval(-kap_hi * kap_hi, -start * start));
        }
    }

    double escale =
        std::max(1.0, std::max(std::abs(window.lo), std::abs(window.hi)));
    auto merged = merge_intervals(std::move(raw), tol::energy_rel * escale);
    std::vector<energy_interval> out;
    for (const auto& iv : merged) {
        double lo = std::max(iv.lo, window.lo);
        double hi = std::min(iv.hi, window.hi);
        if (lo < hi) out.push_back(energy_interval(lo, hi));
    }
    return out;
}

std::pair<double, double> transfer_eigenvalues(const lattice_params& p,
                                               const fiber_params& fp,
                                               const spectral_point& e) {
    double f = 0.0;
    switch (e.sign) {
        case energy_sign::positive:
            f = f_tau(p, fp.tau, e.k);
            break;
        case energy_sign::negative:
            f = f_hat_tau(p, fp.tau, e.kappa);
            break;
        case energy_sign::zero:
            f = f_zero(p, fp.tau);
            break;
    }
    double disc = f * f - 1.0;
    if (disc < 0.0) {
        throw domain_error("transfer_eigenvalues: inside fiber band");
    }
    // larger-magnitude root first, partner as exact reciprocal so the
    // product stays 1 to rounding
    double s = std::sqrt(disc);
    double big = f + (f > 0.0 ? s : -s);
    double small = 1.0 / big;
    return f > 0.0 ? std::make_pair(big, small)
                   : std::make_pair(small, big);
}

std::optional<fiber_eigenvalue> fiber_discrete_eigenvalue(
    const lattice_params& p, const fiber_params& fp, const gap_record& gap) {
    p.tilde();  // fail fast without the perturbed coupling
    double lo = gap.interval.lo;
    double hi = gap.interval.hi;
    if (!(hi > lo)) {
        throw invalid_argument_error("fiber_discrete_eigenvalue: empty gap");
    }
    double w = hi - lo;
    double a_ = lo + 1e-9 * w;
    double b_ = hi - 1e-9 * w;
    auto resid = [&](double e) {
        return detail::fiber_eigenvalue_residual(p, fp.tau, e);
    };
    // Nodes on the singular momentum lattice carry no sign information (the
    // residual diverges there, so no root can hide at one); skip them.
    auto resid_or_nan = [&](double e) -> double {
        try {
            return resid(e);
        } catch (const singular_error&) {
            return qnan;
        }
    };

    int n = tol::gap_scan_init;
    int count_prev = -1;
    int stable = 0;
    int count = 0;
    std::pair<double, double> bracket{0.0, 0.0};
    for (;;) {
        count = 0;
        double pe = qnan;
        double pv = qnan;
        for (int i = 0; i <= n; ++i) {
            double e = a_ + (b_ - a_) * (double)i / (double)n;
            double v = resid_or_nan(e);
            if (std::isnan(v)) continue;
            if (v == 0.0) {
                ++count;
                bracket = {e, e};
                pe = e;
                pv = qnan;  // the zero is counted; suppress the sign compare
                continue;
            }
            if (!std::isnan(pv) && (v > 0.0) != (pv > 0.0)) {
                ++count;
                bracket = {pe, e};
            }
            pv = v;
            pe = e;
        }
        if (count == count_prev) {
            ++stable;
        } else {
            stable = 0;
        }
        count_prev = count;
        if ((stable >= 2 && count <= 1) || n >= (1 << 20)) break;
        n *= 2;
    }
    if (count_prev == 0) return std::nullopt;
    if (count_prev >= 2) {
        throw internal_error("fiber_discrete_eigenvalue: uniqueness violation");
    }

    double e_root;
    if (bracket.first == bracket.second) {
        e_root = bracket.first;
    } else {
        double tol_e = 1e-13 * std::max(1.0, std::max(std::abs(bracket.first),
                                                      std::abs(bracket.second)));
        e_root = bracket_root(resid, bracket.first, bracket.second, tol_e);
    }

    spectral_point pt = spectral_point::from_energy(e_root);
    double f = 0.0;
    switch (pt.sign) {
        case energy_sign::positive:
            f = f_tau(p, fp.tau, pt.k);
            break;
        case energy_sign::negative:
            f = f_hat_tau(p, fp.tau, pt.kappa);
            break;
        case energy_sign::zero:
            f = f_zero(p, fp.tau);
            break;
    }
    auto lam = transfer_eigenvalues(p, fp, pt);
    fiber_eigenvalue ev{fp, pt,
                        f < 0.0 ? fiber_branch::upper : fiber_branch::lower,
                        f > 0.0 ? lam.second : lam.first, 0.0};
    ev.localization_length =
        1.0 / std::abs(std::log(std::abs(ev.lambda_decaying)));

    // the residual equals the defect |f_tilde - lambda| up to the
    // negative-energy scaling
    double rc = std::abs(resid(e_root));
    if (pt.sign == energy_sign::negative) rc *= std::sinh(pt.kappa * p.a);
    if (!(rc < 1e-8)) {
        throw internal_error("fiber_discrete_eigenvalue: residual check failed");
    }
    return ev;
}

mode_profile compute_mode_profile(const fiber_eigenvalue& ev, int j_max) {
    if (j_max < 0) {
        throw invalid_argument_error("compute_mode_profile: j_max must be >= 0");
    }
    mode_profile mp;
    mp.decay_rate = std::abs(ev.lambda_decaying);
    std::vector<double> pow_abs((size_t)j_max + 1, 1.0);
    for (int j = 1; j <= j_max; ++j) {
        pow_abs[(size_t)j] = pow_abs[(size_t)j - 1] * ev.lambda_decaying;
    }
    mp.vertex_values.reserve(2 * (size_t)j_max + 1);
    for (int j = -j_max; j <= j_max; ++j) {
        mp.vertex_values.emplace_back(j, pow_abs[(size_t)std::abs(j)]);
    }
    return mp;
}

}  // namespace qglat

#include "qglat/unperturbed.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "qglat/dispersion.hpp"
#include "qglat/numerics.hpp"

namespace qglat {

namespace {

double membership_slack(const lattice_params& p) {
    return 1e-12 * (1.0 + std::abs(p.gamma)) * (1.0 + p.a + p.b);
}

double edge_condition_tol(const lattice_params& p, double k) {
    return 1e-6 * (1.0 + std::abs(p.gamma)) * (p.a + p.b) * std::max(1.0, k);
}

// continued-fraction reconstruction of x as num/den in lowest terms;
// nullopt when no denominator under the cap matches to the relative
// tolerance (strict, so near-rational ratios stay irrational)
std::optional<std::pair<long long, long long>> reconstruct_ratio(double x) {
    if (!(std::isfinite(x) && x > 0.0)) return std::nullopt;
    long long p0 = 1, q0 = 0;
    long long p1 = (long long)std::floor(x), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        if (q1 > tol::ratio_max_den) return std::nullopt;
        if (q1 > 0 && p1 > 0 &&
            std::abs(x - (double)p1 / (double)q1) < tol::ratio_rel * x) {
            return std::make_pair(p1, q1);
        }
        if (frac <= 0.0) return std::nullopt;
        double y = 1.0 / frac;
        double fl = std::floor(y);
        if (fl > (double)tol::ratio_max_den * 4.0) return std::nullopt;
        long long a = (long long)fl;
        frac = y - fl;
        if (q1 > (tol::ratio_max_den * 4) / std::max(a, 1LL)) {
            return std::nullopt;
        }
        long long p2 = a * p1 + p0;
        long long q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return std::nullopt;
}

// momenta where both edge lengths sit on their singular lattices
std::vector<double> flat_momenta(const lattice_params& p, double k_max) {
    std::vector<double> out;
    auto r = reconstruct_ratio(p.b / p.a);
    if (!r) return out;
    double k_step = (double)r->second * M_PI / p.a;
    for (int j = 1; j * k_step <= k_max * (1.0 + 1e-15); ++j) {
        out.push_back(j * k_step);
    }
    return out;
}

}  // namespace

bool band_membership_positive(const lattice_params& p, double k) {
    return band_condition_residual(p, k) <= membership_slack(p);
}

bool band_membership_negative(const lattice_params& p, double kappa) {
    return band_condition_residual_negative(p, kappa) <= membership_slack(p);
}

bool zero_in_spectrum(const lattice_params& p) {
    return p.gamma >= p.gamma_star() && p.gamma <= 0.0;
}

std::vector<double> flat_bands(const lattice_params& p, double e_max) {
    if (!std::isfinite(e_max)) {
        throw invalid_argument_error("flat_bands: e_max must be finite");
    }
    std::vector<double> out;
    if (e_max <= 0.0) return out;
    for (double k : flat_momenta(p, std::sqrt(e_max))) {
        double e = k * k;
        if (e <= e_max * (1.0 + 1e-15)) out.push_back(e);
    }
    return out;
}

double negative_kappa1(const lattice_params& p) {
    if (!(p.gamma < 0.0)) {
        throw domain_error("negative_kappa1: requires gamma < 0");
    }
    auto h = [&](double kap) {
        return p.gamma / (2.0 * kap) + std::tanh(0.5 * kap * p.a) +
               std::tanh(0.5 * kap * p.b);
    };
    double lo = 1e-8;
    double hi = 1.0;
    while (h(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e8) {
            throw internal_error("negative_kappa1: bracket expansion failed");
        }
    }
    return bracket_root(h, lo, hi, 1e-13 * std::max(1.0, hi));
}

std::optional<double> negative_kappa2(const lattice_params& p) {
    if (!(p.gamma < p.gamma_star())) return std::nullopt;
    auto u = [&](double kap) {
        return p.gamma / (2.0 * kap) + 1.0 / std::tanh(0.5 * kap * p.a) +
               1.0 / std::tanh(0.5 * kap * p.b);
    };
    double lo = 1e-8;
    double hi = 1.0;
    while (u(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e8) {
            throw internal_error("negative_kappa2: bracket expansion failed");
        }
    }
    if (u(lo) >= 0.0) {
        // root below the default floor: shrink (gamma barely under the
        // threshold gives an arbitrarily small root)
        while (u(lo) >= 0.0) {
            lo *= 0.5;
            if (lo < 1e-150) {
                throw internal_error(
                    "negative_kappa2: bracket shrink failed");
            }
        }
    }
    return bracket_root(u, lo, hi, 1e-13 * std::max(1.0, hi));
}

std::optional<energy_interval> negative_band(const lattice_params& p) {
    if (p.gamma >= 0.0) return std::nullopt;
    double k1 = negative_kappa1(p);
    auto k2 = negative_kappa2(p);
    double e2 = k2 ? -(*k2) * (*k2) : 0.0;
    return energy_interval(-k1 * k1, e2);
}

band_set compute_bands(const lattice_params& p,
                       const energy_interval& window) {
    if (!(window.lo < window.hi)) {
        throw invalid_argument_error(
            "compute_bands: window must have positive width");
    }
    band_set bs;
    bs.window = window;
    bs.negative_band = negative_band(p);

    std::vector<energy_interval> raw;
    if (bs.negative_band) raw.push_back(*bs.negative_band);

    double k_hi = window.hi > 0.0 ? std::sqrt(window.hi) : 0.0;
    std::vector<double> flat_ks;
    if (k_hi > 0.0) flat_ks = flat_momenta(p, k_hi);

    if (k_hi > 0.0) {
        // membership scan: uniform grid seeded with every singular momentum
        // so that narrow bands pinned there are never stepped over
        double dk = 1.0 / (tol::scan_density * p.max_edge());
        std::vector<double> nodes;
        nodes.reserve((size_t)(k_hi / dk) + 64);
        for (size_t i = 1; i * dk < k_hi; ++i) nodes.push_back(i * dk);
        for (double edge : {p.a, p.b}) {
            for (int m = 1; m * M_PI / edge < k_hi * (1.0 + 1e-15); ++m) {
                nodes.push_back(m * M_PI / edge);
            }
        }
        nodes.push_back(k_hi);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end(),
                                [&](double x, double y) {
                                    return std::abs(y - x) < dk * 1e-9;
                                }),
                    nodes.end());

        auto member = [&](double k) { return band_membership_positive(p, k); };

        auto snap = [&](double ke) {
            // flat momenta: the residual vanishes quadratically, which
            // stalls the bisection a few orders of magnitude away, hence
            // the generous radius guarded by a flatness signature
            for (double kf : flat_ks) {
                if (std::abs(ke - kf) <= 1e-5 * std::max(1.0, kf)) {
                    double d = 1e-6 * std::max(1.0, kf);
                    double theta = 1e-9 * (1.0 + std::abs(p.gamma)) *
                                   (p.a + p.b) * std::max(1.0, kf);
                    if (std::abs(band_condition_residual(p, kf - d)) < theta &&
                        std::abs(band_condition_residual(p, kf + d)) < theta) {
                        return kf;
                    }
                }
            }
            // singular momenta reached by the bisection within noise
            for (double edge : {p.a, p.b}) {
                double m = std::round(ke * edge / M_PI);
                if (m >= 1.0) {
                    double kx = m * M_PI / edge;
                    if (std::abs(ke - kx) <= 1e-8 * std::max(1.0, kx)) {
                        return kx;
                    }
                }
            }
            return ke;
        };

        // state at k -> 0+ from the zero-energy closed form; at
        // gamma <= gamma_star zero energy belongs to the negative band only
        bool prev_state = p.gamma > p.gamma_star() && p.gamma <= 0.0;
        double prev_k = 0.0;
        std::vector<std::pair<double, bool>> edges;  // (k, entering band)
        for (double k : nodes) {
            bool st = member(k);
            if (st != prev_state) {
                double lo = prev_k > 0.0 ? prev_k : std::min(1e-12, 0.5 * k);
                double ke =
                    bisect_predicate(member, lo, prev_state, k,
                                     tol::edge_bisect * std::max(1.0, k));
                edges.emplace_back(snap(ke), st);
            }
            prev_state = st;
            prev_k = k;
        }

        bool open = p.gamma > p.gamma_star() && p.gamma <= 0.0;
        double start = 0.0;
        for (const auto& [ke, entering] : edges) {
            if (entering) {
                start = ke;
                open = true;
            } else if (open) {
                raw.push_back(energy_interval(start * start, ke * ke));
                open = false;
            }
        }
        if (open) raw.push_back(energy_interval(start * start, k_hi * k_hi));
    }

    double escale =
        std::max(1.0, std::max(std::abs(window.lo), std::abs(window.hi)));
    auto merged = merge_intervals(std::move(raw), tol::energy_rel * escale);

    // flat energies inside the window
    for (double kf : flat_ks) {
        double e = kf * kf;
        if (e >= window.lo && e <= window.hi) bs.flat_bands.push_back(e);
    }

    // clip to the window; zero-width leftovers survive only as flat markers
    for (auto& iv : merged) {
        double lo = std::max(iv.lo, window.lo);
        double hi = std::min(iv.hi, window.hi);
        if (lo > hi) continue;
        if (lo == hi) {
            bool is_flat = false;
            for (double e : bs.flat_bands) {
                if (std::abs(e - lo) <= tol::energy_rel * escale) {
                    is_flat = true;
                }
            }
            if (!is_flat) continue;
        }
        bs.bands.push_back(energy_interval(lo, hi));
    }
    return bs;
}

std::pair<edge_kind, double> classify_edge_energy(const lattice_params& p,
                                                  double e) {
    if (!std::isfinite(e)) {
        throw invalid_argument_error(
            "classify_edge_energy: energy must be finite");
    }
    if (e == 0.0) {
        return {edge_kind::condition_edge, 0.0};
    }
    if (e > 0.0) {
        double k = std::sqrt(e);
        if (classify_momentum(p, k).in_xi) {
            return {edge_kind::xi_point, k};
        }
        if (std::abs(band_condition_residual(p, k)) <=
            edge_condition_tol(p, k)) {
            return {edge_kind::condition_edge, k};
        }
        throw unclassified_edge_error(
            "classify_edge_energy: unclassified edge");
    }
    double kappa = std::sqrt(-e);
    if (std::abs(band_condition_residual_negative(p, kappa)) <=
        edge_condition_tol(p, kappa)) {
        return {edge_kind::condition_edge, kappa};
    }
    throw unclassified_edge_error("classify_edge_energy: unclassified edge");
}

std::vector<gap_record> classify_gap_edges(const lattice_params& p,
                                           const band_set& bs) {
    std::vector<gap_record> out;
    for (size_t i = 1; i < bs.bands.size(); ++i) {
        double lo = bs.bands[i - 1].hi;
        double hi = bs.bands[i].lo;
        if (!(hi > lo)) continue;
        gap_record g;
        g.interval = energy_interval(lo, hi);
        std::tie(g.left_edge_kind, g.left_k) = classify_edge_energy(p, lo);
        std::tie(g.right_edge_kind, g.right_k) = classify_edge_energy(p, hi);
        out.push_back(g);
    }
    return out;
}

}  // namespace qglat

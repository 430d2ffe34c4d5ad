#include "qglat/perturbed.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "qglat/fiber.hpp"
#include "qglat/numerics.hpp"

namespace qglat {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

double touch_tol(double edge_energy) {
    return tol::touch_rel * std::max(1.0, std::abs(edge_energy));
}

// sign of the dispersion value in a gap (constant over the gap and over the
// transverse parameter); +1 pairs with the f > 1 branch
double gap_dispersion_sign(const lattice_params& p, const gap_record& gap) {
    double w = gap.interval.width();
    double e = gap.interval.lo + 0.6180339887498949 * w;
    if (e == 0.0) e = gap.interval.lo + 0.5 * w;
    double f;
    if (e > 0.0) {
        f = f_tau(p, 0.0, std::sqrt(e));
    } else {
        double kappa = std::sqrt(-e);
        f = p.gamma / (2.0 * kappa) + coth(kappa * p.a) + coth(kappa * p.b);
    }
    if (f == 0.0) {
        throw internal_error("gap_dispersion_sign: vanishing dispersion value");
    }
    return f > 0.0 ? 1.0 : -1.0;
}

// discrete eigenvalue energy of one extreme fiber inside the gap, if any
std::optional<double> extreme_fiber_root(const lattice_params& p,
                                         const gap_record& gap, double tau) {
    auto ev = fiber_discrete_eigenvalue(p, fiber_params::from_tau(tau), gap);
    if (!ev) return std::nullopt;
    return ev->point.energy;
}

struct membership_run {
    int count = 0;       // number of disjoint member runs found
    double first = 0.0;  // first member sample
    double last = 0.0;   // last member sample
    bool at_start = false;
    bool at_end = false;
    double step = 0.0;
};

membership_run scan_membership(const lattice_params& p,
                               const gap_record& gap) {
    double lo = gap.interval.lo;
    double hi = gap.interval.hi;
    double w = hi - lo;
    // The inset must clear the neighbourhood of a gap edge sitting on a flat
    // point, where the multiplied condition degenerates quadratically and a
    // sample within ~1e-6 in momentum of the edge reads as a member.
    double inset_lo =
        std::min(0.2 * w, std::max(1e-9 * w, 1e-5 * std::max(1.0, std::abs(lo))));
    double inset_hi =
        std::min(0.2 * w, std::max(1e-9 * w, 1e-5 * std::max(1.0, std::abs(hi))));
    double a_ = lo + inset_lo;
    double b_ = hi - inset_hi;
    auto member = [&](double e) {
        return s_membership(p, spectral_point::from_energy(e));
    };
    membership_run run;
    int n = tol::gap_scan_init;
    int prev_count = -1;
    int stable = 0;
    for (;;) {
        run = membership_run{};
        run.step = (b_ - a_) / n;
        bool prev = false;
        for (int i = 0; i <= n; ++i) {
            double e = a_ + (b_ - a_) * (double)i / (double)n;
            bool st = member(e);
            if (st) {
                if (!prev) {
                    ++run.count;
                    run.first = e;
                    if (i == 0) run.at_start = true;
                }
                run.last = e;
                if (i == n) run.at_end = true;
            }
            prev = st;
        }
        if (run.count == prev_count) {
            ++stable;
        } else {
            stable = 0;
        }
        prev_count = run.count;
        if ((stable >= 2 && run.count <= 1) || n >= (1 << 20)) break;
        n *= 2;
    }
    return run;
}

std::optional<new_band> solve_gap(const lattice_params& p,
                                  const gap_record& gap) {
    double lo = gap.interval.lo;
    double hi = gap.interval.hi;
    double w = hi - lo;
    if (!(w > 0.0)) return std::nullopt;
    double dg = p.tilde() - p.gamma;
    if (dg == 0.0) return std::nullopt;

    double fsig = gap_dispersion_sign(p, gap);
    bool branch_plus = fsig < 0.0;  // f < -1 pairs with the plus condition

    // sign feasibility: the active branch constrains the sign function,
    // which is constant over the gap
    double e_probe = lo + 0.6180339887498949 * w;
    if (e_probe == 0.0) e_probe = lo + 0.5 * w;
    double gsig =
        perturbation_sign_fn(p, spectral_point::from_energy(e_probe));
    if (branch_plus ? gsig < 0.0 : gsig > 0.0) return std::nullopt;

    auto r_up = extreme_fiber_root(p, gap, 1.0);
    auto r_dn = extreme_fiber_root(p, gap, -1.0);
    std::vector<double> roots;
    if (r_up) roots.push_back(*r_up);
    if (r_dn) roots.push_back(*r_dn);
    std::sort(roots.begin(), roots.end());
    if (roots.size() == 2 &&
        roots[1] - roots[0] <=
            1e-12 * std::max(1.0, std::abs(roots[0]))) {
        roots.pop_back();
    }

    membership_run run = scan_membership(p, gap);
    if (run.count >= 2) {
        throw internal_error("new_bands_in_gaps: connectivity violation");
    }

    auto member = [&](double e) {
        return s_membership(p, spectral_point::from_energy(e));
    };

    new_band nb;
    nb.gap = gap;
    nb.condition = branch_plus ? bc_result::in_s_plus : bc_result::in_s_minus;

    double band_lo = 0.0;
    double band_hi = 0.0;
    if (run.count == 0) {
        if (roots.empty()) return std::nullopt;
        if (roots.size() == 2) {
            band_lo = roots[0];
            band_hi = roots[1];
        } else {
            // single root with the band thinner than the scan: it can only
            // extend from the root to a gap edge, or degenerate to a point
            double r = roots[0];
            bool below = member(0.5 * (lo + r));
            bool above = member(0.5 * (r + hi));
            if (below && above) {
                throw internal_error(
                    "new_bands_in_gaps: connectivity violation");
            }
            if (below) {
                band_lo = lo;
                band_hi = r;
            } else if (above) {
                band_lo = r;
                band_hi = hi;
            } else {
                band_lo = band_hi = r;  // tangency at threshold coupling
            }
        }
    } else {
        // one membership run: resolve each end through the matching root,
        // the gap edge, or a membership bisection as fallback. Each root can
        // serve at most one end (the nearer one).
        std::optional<double> root_lo, root_hi;
        if (roots.size() == 2) {
            if (std::abs(roots[0] - run.first) <= 1.5 * run.step) {
                root_lo = roots[0];
            }
            if (std::abs(roots[1] - run.last) <= 1.5 * run.step) {
                root_hi = roots[1];
            }
        } else if (roots.size() == 1) {
            double d_lo = std::abs(roots[0] - run.first);
            double d_hi = std::abs(roots[0] - run.last);
            if (d_lo <= d_hi && d_lo <= 1.5 * run.step) {
                root_lo = roots[0];
            } else if (d_hi < d_lo && d_hi <= 1.5 * run.step) {
                root_hi = roots[0];
            }
        }
        auto resolve = [&](bool lower_end) {
            const auto& matched = lower_end ? root_lo : root_hi;
            if (matched) return *matched;
            if (lower_end && run.at_start) return lo;
            if (!lower_end && run.at_end) return hi;
            double sample = lower_end ? run.first : run.last;
            double outer = lower_end ? sample - run.step : sample + run.step;
            outer = std::clamp(outer, lo, hi);
            double blo = std::min(sample, outer);
            double bhi = std::max(sample, outer);
            double tol_e = 1e-12 * std::max(1.0, std::max(std::abs(blo),
                                                          std::abs(bhi)));
            return bisect_predicate(member, blo, member(blo), bhi, tol_e);
        };
        band_lo = resolve(true);
        band_hi = resolve(false);
    }
    if (band_hi < band_lo) std::swap(band_lo, band_hi);
    band_lo = std::max(band_lo, lo);
    band_hi = std::min(band_hi, hi);

    nb.interval = energy_interval(band_lo, band_hi);
    nb.touches_lower_edge = std::abs(band_lo - lo) <= touch_tol(lo);
    nb.touches_upper_edge = std::abs(band_hi - hi) <= touch_tol(hi);
    if (gap.left_edge_kind == edge_kind::spectrum_bottom) {
        if (nb.touches_lower_edge) {
            throw internal_error(
                "new_bands_in_gaps: band reached the scan truncation");
        }
        nb.touches_lower_edge = false;
    }
    return nb;
}

}  // namespace

bool s_membership(const lattice_params& p, const spectral_point& e) {
    return bc_membership(p, e) != bc_result::not_in_s;
}

std::vector<gap_record> spectral_gaps(const lattice_params& p,
                                      const energy_interval& window,
                                      bool include_semi_infinite) {
    auto bs = compute_bands(p, window);
    auto gaps = classify_gap_edges(p, bs);
    if (!include_semi_infinite) return gaps;

    // rebuild on an extended window so the spectrum bottom and the gaps
    // around the negative band are present even when the window misses them
    double pimax = M_PI / p.max_edge();
    double hi_ext = std::max(window.hi, 1.5 * pimax * pimax);
    double lo_ext = window.lo;
    if (p.gamma < 0.0) {
        double k1 = negative_kappa1(p);
        lo_ext = std::min(lo_ext, -k1 * k1 - 1.0);
    } else {
        lo_ext = std::min(lo_ext, -1.0);
    }
    auto bse = compute_bands(p, energy_interval(lo_ext, hi_ext));
    if (bse.bands.empty()) {
        throw internal_error("spectral_gaps: no spectrum found");
    }
    double bottom = bse.bands.front().lo;

    gap_record sg;
    double gt = p.gamma_tilde ? std::abs(*p.gamma_tilde) : 0.0;
    double kcap =
        std::max({10.0 / p.a, 10.0 / p.b, 5.0 * gt * p.max_edge()});
    double lo_tr = -kcap * kcap;
    if (lo_tr >= bottom - 1.0) lo_tr = bottom - 1.0;
    sg.interval = energy_interval(lo_tr, bottom);
    sg.left_edge_kind = edge_kind::spectrum_bottom;
    sg.left_k = 0.0;
    std::tie(sg.right_edge_kind, sg.right_k) =
        classify_edge_energy(p, bottom);

    std::vector<gap_record> out;
    out.push_back(sg);
    // negative / zero-straddling gaps from the extended scan that the
    // window-based list misses
    auto gapse = classify_gap_edges(p, bse);
    for (const auto& g : gapse) {
        if (!(g.interval.lo < 0.0)) continue;
        bool dup = false;
        for (const auto& h : gaps) {
            if (std::abs(h.interval.lo - g.interval.lo) <=
                    1e-9 * std::max(1.0, std::abs(g.interval.lo)) &&
                std::abs(h.interval.hi - g.interval.hi) <=
                    1e-9 * std::max(1.0, std::abs(g.interval.hi))) {
                dup = true;
            }
        }
        if (!dup) out.push_back(g);
    }
    for (const auto& g : gaps) out.push_back(g);
    std::sort(out.begin(), out.end(),
              [](const gap_record& x, const gap_record& y) {
                  return x.interval.lo < y.interval.lo;
              });
    return out;
}

std::vector<new_band> new_bands_in_gaps(const lattice_params& p,
                                        const energy_interval& window) {
    p.tilde();
    std::vector<new_band> out;
    for (const auto& g : spectral_gaps(p, window, true)) {
        auto nb = solve_gap(p, g);
        if (nb && nb->interval.width() >= 0.0) out.push_back(*nb);
    }
    return out;
}

regime_report classify_regime(const lattice_params& p,
                              const energy_interval& window) {
    double dg = p.tilde() - p.gamma;
    if (dg == 0.0) {
        throw no_perturbation_error("classify_regime: no perturbation");
    }
    regime_report rep;
    if (dg > 0.0) {
        rep.regime = p.gamma >= 0.0 ? regime_case::iv : regime_case::ii;
    } else {
        rep.regime = p.gamma >= 0.0 ? regime_case::iii : regime_case::i;
    }
    rep.spectrum_unchanged = rep.regime == regime_case::iv;
    for (const auto& g : spectral_gaps(p, window, true)) {
        auto nb = solve_gap(p, g);
        if (nb && g.left_edge_kind != edge_kind::spectrum_bottom &&
            nb->touches_lower_edge && nb->touches_upper_edge) {
            rep.closed_gaps.push_back(g);
        }
        rep.per_gap.emplace_back(g, nb);
    }
    return rep;
}

std::vector<touch_prediction> edge_touch_predictions(const lattice_params& p,
                                                     const gap_record& gap) {
    std::vector<touch_prediction> out;
    double fsig = gap_dispersion_sign(p, gap);
    branch_sign gb = fsig < 0.0 ? branch_sign::plus : branch_sign::minus;

    for (int side = 0; side < 2; ++side) {
        bool upper = side == 1;
        edge_kind kind = upper ? gap.right_edge_kind : gap.left_edge_kind;
        if (kind == edge_kind::spectrum_bottom) continue;
        double e_edge = upper ? gap.interval.hi : gap.interval.lo;
        double kv = upper ? gap.right_k : gap.left_k;

        touch_prediction tp;
        tp.upper_edge = upper;
        tp.kind = kind;

        if (kind == edge_kind::xi_point) {
            double sa = std::sin(kv * p.a);
            if (std::abs(sa) < tol::xi_rel * std::max(1.0, kv * p.a)) {
                // both tau-limits diverge: unreachable edge
                tp.divergent = true;
                tp.touch_lo = pos_inf;
                tp.touch_hi = -pos_inf;
                out.push_back(tp);
                continue;
            }
            int m = (int)std::llround(kv * p.b / M_PI);
            bool odd = m % 2 != 0;
            int n = odd ? (m + 1) / 2 : m / 2;
            edge_constants ec = type1_edge_limits(p, n);
            double t = odd ? (gb == branch_sign::plus ? ec.gamma_tilde_o_plus
                                                      : ec.gamma_tilde_o_minus)
                           : (gb == branch_sign::plus ? ec.gamma_tilde_e_plus
                                                      : ec.gamma_tilde_e_minus);
            if (std::isnan(t)) {
                tp.divergent = true;
                tp.touch_lo = pos_inf;
                tp.touch_hi = -pos_inf;
                out.push_back(tp);
                continue;
            }
            // direction of the diverging extreme: probe the threshold curve
            // a short step into the gap
            double k_gap_lo = std::sqrt(std::max(gap.interval.lo, 0.0));
            double k_gap_hi = std::sqrt(gap.interval.hi);
            double dkp = 1e-3 * (k_gap_hi - k_gap_lo);
            double k_probe = upper ? kv - dkp : kv + dkp;
            double tau_pole = odd ? 1.0 : -1.0;
            double far = edge_curve_g(p, tau_pole,
                                      spectral_point::from_k(k_probe), gb);
            tp.threshold = t;
            tp.other_limit = far > t ? pos_inf : -pos_inf;
            tp.touch_lo = far > t ? t : -pos_inf;
            tp.touch_hi = far > t ? pos_inf : t;
            out.push_back(tp);
            continue;
        }

        // condition edge
        double t = qnan;
        if (e_edge > 0.0) {
            t = type2_edge_limits(p, kv).gamma_tilde_p2;
        } else if (e_edge < 0.0) {
            edge_constants ec = negative_edge_limits(p, kv);
            t = gb == branch_sign::plus ? ec.gamma_tilde_n1
                                        : ec.gamma_tilde_n2;
        } else {
            // zero-energy edge: the non-degenerate extreme of the limiting
            // dispersion value gives the finite threshold
            double f_plus1 = p.gamma * p.a / 2.0 + 1.0;
            double f_minus1 = p.gamma * p.a / 2.0 + 1.0 + 2.0 * p.a / p.b;
            double tau_trivial =
                std::abs(std::abs(f_plus1) - 1.0) <
                        std::abs(std::abs(f_minus1) - 1.0)
                    ? 1.0
                    : -1.0;
            t = edge_curve_g(p, -tau_trivial, spectral_point::from_energy(0.0),
                             gb);
        }
        tp.threshold = t;
        tp.other_limit = p.gamma;
        tp.touch_lo = std::min(p.gamma, t);
        tp.touch_hi = std::max(p.gamma, t);
        out.push_back(tp);
    }
    return out;
}

}  // namespace qglat

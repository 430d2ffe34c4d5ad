#include "qglat/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace qglat {

namespace {

double checked_eval(const std::function<double(double)>& fn, double x) {
    double v = fn(x);
    if (std::isnan(v)) {
        throw singular_error("bracket_root: singular evaluation");
    }
    return v;
}

}  // namespace

lattice_params::lattice_params(double a_, double b_, double gamma_,
                               std::optional<double> gamma_tilde_)
    : a(a_), b(b_), gamma(gamma_), gamma_tilde(gamma_tilde_) {
    if (!(std::isfinite(a) && a > 0.0) || !(std::isfinite(b) && b > 0.0)) {
        throw invalid_argument_error(
            "lattice_params: edge lengths must be positive and finite");
    }
    if (!std::isfinite(gamma)) {
        throw invalid_argument_error("lattice_params: gamma must be finite");
    }
    if (gamma_tilde && !std::isfinite(*gamma_tilde)) {
        throw invalid_argument_error(
            "lattice_params: gamma_tilde must be finite");
    }
}

double lattice_params::tilde() const {
    if (!gamma_tilde) {
        throw missing_gamma_tilde_error("lattice_params: gamma_tilde required");
    }
    return *gamma_tilde;
}

spectral_point spectral_point::from_energy(double e) {
    if (!std::isfinite(e)) {
        throw invalid_argument_error("spectral_point: energy must be finite");
    }
    spectral_point sp;
    sp.energy = e;
    if (e > 0.0) {
        sp.sign = energy_sign::positive;
        sp.k = std::sqrt(e);
    } else if (e < 0.0) {
        sp.sign = energy_sign::negative;
        sp.kappa = std::sqrt(-e);
    } else {
        sp.sign = energy_sign::zero;
    }
    return sp;
}

spectral_point spectral_point::from_k(double k) {
    if (!(std::isfinite(k) && k > 0.0)) {
        throw invalid_argument_error("spectral_point: k must be positive");
    }
    spectral_point sp;
    sp.sign = energy_sign::positive;
    sp.k = k;
    sp.energy = k * k;
    return sp;
}

spectral_point spectral_point::from_kappa(double kappa) {
    if (!(std::isfinite(kappa) && kappa > 0.0)) {
        throw invalid_argument_error("spectral_point: kappa must be positive");
    }
    spectral_point sp;
    sp.sign = energy_sign::negative;
    sp.kappa = kappa;
    sp.energy = -kappa * kappa;
    return sp;
}

fiber_params::fiber_params(double theta2_) : theta2(theta2_) {
    if (!std::isfinite(theta2) || std::abs(theta2) > M_PI + 1e-12) {
        throw invalid_argument_error("fiber_params: theta2 outside [-pi, pi]");
    }
    tau = std::cos(theta2);
}

fiber_params fiber_params::from_tau(double tau_) {
    if (!std::isfinite(tau_) || std::abs(tau_) > 1.0 + 1e-12) {
        throw invalid_argument_error("fiber_params: tau outside [-1, 1]");
    }
    double t = std::clamp(tau_, -1.0, 1.0);
    fiber_params fp(std::acos(t));
    fp.tau = t;  // keep the caller's value exactly (acos/cos round trip)
    return fp;
}

energy_interval::energy_interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi) {
        throw invalid_argument_error(
            "energy_interval: requires finite lo <= hi");
    }
}

double bracket_root(const std::function<double(double)>& fn, double lo,
                    double hi, double tol) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo >= hi ||
        !(tol > 0.0)) {
        throw invalid_argument_error("bracket_root: bad bracket or tolerance");
    }
    double flo = checked_eval(fn, lo);
    double fhi = checked_eval(fn, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw no_bracket_error("bracket_root: no bracket");
    }
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at double resolution
        double fm = checked_eval(fn, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // secant polish inside the final bracket
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    for (int it = 0; it < 3; ++it) {
        double denom = f1 - f0;
        if (denom == 0.0) break;
        double x2 = x1 - f1 * (x1 - x0) / denom;
        if (!(x2 >= lo && x2 <= hi)) break;
        double f2 = checked_eval(fn, x2);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (f2 == 0.0) break;
    }
    return std::abs(f1) <= std::abs(f0) ? x1 : x0;
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        bool at_lo, double hi, double tol) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo >= hi ||
        !(tol > 0.0)) {
        throw invalid_argument_error(
            "bisect_predicate: bad bracket or tolerance");
    }
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<energy_interval> merge_intervals(std::vector<energy_interval> raw,
                                             double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw invalid_argument_error("merge_intervals: eps must be >= 0");
    }
    for (const auto& iv : raw) {
        if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)) || iv.lo > iv.hi) {
            throw invalid_argument_error("merge_intervals: malformed interval");
        }
    }
    if (raw.empty()) return raw;
    std::sort(raw.begin(), raw.end(),
              [](const energy_interval& x, const energy_interval& y) {
                  return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
              });
    std::vector<energy_interval> out;
    out.push_back(raw.front());
    for (size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].lo <= out.back().hi + eps) {
            out.back().hi = std::max(out.back().hi, raw[i].hi);
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

momentum_classification classify_momentum(const lattice_params& p, double k) {
    if (!(std::isfinite(k) && k > 0.0)) {
        throw invalid_argument_error("classify_momentum: k must be positive");
    }
    momentum_classification mc;
    mc.in_xi_a =
        std::abs(std::sin(k * p.a)) < tol::xi_rel * std::max(1.0, k * p.a);
    mc.in_xi_b =
        std::abs(std::sin(k * p.b)) < tol::xi_rel * std::max(1.0, k * p.b);
    mc.in_xi = mc.in_xi_a || mc.in_xi_b;
    mc.flat_band_point = mc.in_xi_a && mc.in_xi_b;
    return mc;
}

double xi_offset(const lattice_params& p) {
    return tol::xi_offset_rel * M_PI / p.max_edge();
}

}  // namespace qglat

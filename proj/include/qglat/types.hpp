#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qglat {

// Error taxonomy. Everything the library throws derives from qglat::error so
// the C layer can translate exceptions into status codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// bad user input (non-positive edge lengths, malformed intervals, ...)
struct invalid_argument_error : error { using error::error; };
// mathematically out of domain (wrong energy sign, point not on an edge, ...)
struct domain_error : error { using error::error; };
// evaluation at a pole of a dispersion quantity
struct singular_error : error { using error::error; };
// root finder called without a sign change
struct no_bracket_error : error { using error::error; };
// perturbed-lattice operation with gamma_tilde == gamma
struct no_perturbation_error : error { using error::error; };
// perturbed-lattice operation without gamma_tilde set
struct missing_gamma_tilde_error : error { using error::error; };
// a computed gap edge matched no known edge type
struct unclassified_edge_error : error { using error::error; };
// internal invariant violated; indicates a bug, not bad input
struct internal_error : error { using error::error; };

inline constexpr double qnan = std::numeric_limits<double>::quiet_NaN();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

// Tolerances shared across the library. Values are part of the contract of
// the routines that use them; tests pin behaviour against these constants.
namespace tol {
// relative tolerance on |sin(k a)| used to classify momenta onto the
// singular lattices k a in pi Z, k b in pi Z
inline constexpr double xi_rel = 1e-9;
// one-sided evaluation offset at singular momenta, scaled by pi/max(a,b)
inline constexpr double xi_offset_rel = 1e-7;
// band-edge bisection target in k (scaled by max(1,k))
inline constexpr double edge_bisect = 1e-12;
// relative energy tolerance for reported band endpoints
inline constexpr double energy_rel = 1e-9;
// samples per unit of k*max(a,b) in membership scans
inline constexpr double scan_density = 2000.0;
// relative energy tolerance for edge-touch detection
inline constexpr double touch_rel = 1e-7;
// continued-fraction rational reconstruction: relative tolerance and
// largest admissible denominator
inline constexpr double ratio_rel = 1e-12;
inline constexpr long long ratio_max_den = 1000000;
// initial sample count for in-gap residual scans (doubled adaptively)
inline constexpr int gap_scan_init = 512;
// residual bound a discrete fiber eigenvalue must satisfy
inline constexpr double fiber_residual = 1e-10;
}  // namespace tol

struct lattice_params {
    double a;
    double b;
    double gamma;
    std::optional<double> gamma_tilde;

    lattice_params(double a_, double b_, double gamma_,
                   std::optional<double> gamma_tilde_ = std::nullopt);

    // coupling strength below which a second negative dispersion root exists
    double gamma_star() const { return -4.0 * (1.0 / a + 1.0 / b); }
    bool has_perturbation() const { return gamma_tilde.has_value(); }
    // perturbed coupling; throws missing_gamma_tilde_error when unset
    double tilde() const;
    double max_edge() const { return a > b ? a : b; }
    double min_edge() const { return a < b ? a : b; }
};

enum class energy_sign { negative, zero, positive };

// A point on the energy axis carrying its natural spectral coordinate:
// k = sqrt(E) for E > 0, kappa = sqrt(-E) for E < 0.
struct spectral_point {
    energy_sign sign = energy_sign::zero;
    double k = 0.0;
    double kappa = 0.0;
    double energy = 0.0;

    static spectral_point from_energy(double e);
    static spectral_point from_k(double k);
    static spectral_point from_kappa(double kappa);
};

// Transverse quasimomentum of one fiber. theta2 must lie in [-pi, pi].
struct fiber_params {
    double theta2 = 0.0;
    double tau = 1.0;  // cos(theta2)
    std::optional<double> theta1;
    std::optional<double> tau1;

    explicit fiber_params(double theta2_);
    static fiber_params from_tau(double tau_);
};

struct momentum_classification {
    bool in_xi_a = false;  // k a in pi Z
    bool in_xi_b = false;  // k b in pi Z
    bool in_xi = false;
    bool flat_band_point = false;  // in both lattices simultaneously
};

// Closed interval on the energy axis. Zero width is allowed; band sets use
// zero-width entries only as flat-band markers.
struct energy_interval {
    double lo = 0.0;
    double hi = 0.0;

    energy_interval() = default;
    energy_interval(double lo_, double hi_);

    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(double e) const { return lo <= e && e <= hi; }
};

enum class edge_kind { xi_point, condition_edge, spectrum_bottom };

// An open spectral gap with classified endpoints. left_k / right_k hold the
// momentum (E > 0) or decay rate (E < 0) of the edge, 0 for a zero-energy
// edge. left_edge_kind == spectrum_bottom marks the semi-infinite gap below
// the spectrum; its interval.lo is then a scan truncation, not an edge.
struct gap_record {
    energy_interval interval;
    edge_kind left_edge_kind = edge_kind::condition_edge;
    edge_kind right_edge_kind = edge_kind::condition_edge;
    double left_k = 0.0;
    double right_k = 0.0;
};

// Spectrum clipped to a window: absolutely continuous bands (sorted, with
// pairwise disjoint interiors), flat-band energies, and the unclipped
// negative band when one exists.
struct band_set {
    std::vector<energy_interval> bands;
    std::vector<double> flat_bands;
    energy_interval window;
    std::optional<energy_interval> negative_band;
};

}  // namespace qglat

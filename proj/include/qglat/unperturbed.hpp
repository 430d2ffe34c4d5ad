#pragma once

#include <optional>
#include <vector>

#include "qglat/types.hpp"

namespace qglat {

// Band membership at positive / negative energy, evaluated through the
// pole-free residuals with a small absolute slack so that tangential band
// closures (zero-width gaps) register as members.
bool band_membership_positive(const lattice_params& p, double k);
bool band_membership_negative(const lattice_params& p, double kappa);

// True iff E = 0 belongs to the spectrum: gamma in [gamma_star, 0].
bool zero_in_spectrum(const lattice_params& p);

// Flat-band energies up to e_max. Non-empty only when b/a is rational with
// denominator below the reconstruction cap; then the flat momenta are the
// common multiples of pi/a and pi/b.
std::vector<double> flat_bands(const lattice_params& p, double e_max);

// Decay rates bounding the negative band: kappa1 solves the tanh edge
// equation (requires gamma < 0), kappa2 the coth one (exists iff
// gamma < gamma_star).
double negative_kappa1(const lattice_params& p);
std::optional<double> negative_kappa2(const lattice_params& p);

// The negative band [-kappa1^2, E2] with E2 = -kappa2^2 for
// gamma < gamma_star and E2 = 0 otherwise; nullopt for gamma >= 0.
std::optional<energy_interval> negative_band(const lattice_params& p);

// Full spectrum inside the window: scans the membership residual on a dense
// momentum grid seeded with every singular momentum, bisects each edge to
// tol::edge_bisect, snaps edges onto exact flat / singular momenta, adds
// the negative band and merges. Flat points isolated in gaps appear both as
// zero-width bands and in flat_bands.
band_set compute_bands(const lattice_params& p, const energy_interval& window);

// Classification of a single band edge: kind plus the spectral coordinate
// (k for E > 0, kappa for E < 0, 0 at zero energy). Throws
// unclassified_edge_error when the energy is neither a singular momentum
// nor a zero of the band-condition residual.
std::pair<edge_kind, double> classify_edge_energy(const lattice_params& p,
                                                  double e);

// Open gaps between consecutive bands with endpoint classification.
std::vector<gap_record> classify_gap_edges(const lattice_params& p,
                                           const band_set& bs);

}  // namespace qglat

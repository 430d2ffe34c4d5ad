#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qglat/types.hpp"
#include "qglat/dispersion.hpp"
#include "qglat/unperturbed.hpp"

namespace qglat {

// A guided band created inside a spectral gap by the perturbed coupling.
struct new_band {
    gap_record gap;
    energy_interval interval;
    bc_result condition = bc_result::not_in_s;  // in_s_plus or in_s_minus
    bool touches_lower_edge = false;
    bool touches_upper_edge = false;
};

enum class regime_case { i, ii, iii, iv };

struct regime_report {
    regime_case regime = regime_case::iv;
    std::vector<std::pair<gap_record, std::optional<new_band>>> per_gap;
    std::vector<gap_record> closed_gaps;  // gaps the new band fills entirely
    bool spectrum_unchanged = false;
};

// Prediction whether a new band can reach one edge of a gap: it touches the
// edge iff gamma_tilde lies in [touch_lo, touch_hi] (infinite endpoints
// allowed). divergent means both tau-limits at this edge diverge, so no
// finite coupling reaches it.
struct touch_prediction {
    bool upper_edge = false;  // prediction for the right (upper) edge
    edge_kind kind = edge_kind::condition_edge;
    bool divergent = false;
    double threshold = qnan;    // finite non-trivial tau-limit when defined
    double other_limit = qnan;  // second tau-limit (gamma or +-inf)
    double touch_lo = qnan;
    double touch_hi = qnan;
};

// Membership of an energy in the perturbed spectral set (either branch).
bool s_membership(const lattice_params& p, const spectral_point& e);

// Gaps of the unperturbed spectrum relevant to a perturbed-lattice search:
// the classified gaps inside the window, the semi-infinite gap below the
// spectrum (truncated; left_edge_kind == spectrum_bottom) when requested,
// and for gamma < gamma_star the gap above the negative band even when the
// window misses it.
std::vector<gap_record> spectral_gaps(const lattice_params& p,
                                      const energy_interval& window,
                                      bool include_semi_infinite);

// All guided bands the perturbed coupling creates in the gaps (including
// the semi-infinite one). Each gap holds at most one band per the fiber
// uniqueness property; disconnected membership inside one gap raises
// internal_error ("connectivity violation").
std::vector<new_band> new_bands_in_gaps(const lattice_params& p,
                                        const energy_interval& window);

// Sign-regime classification of the pair (gamma, gamma_tilde) with the
// per-gap band inventory. gamma_tilde == gamma raises no_perturbation_error.
regime_report classify_regime(const lattice_params& p,
                              const energy_interval& window);

// Touch thresholds for both edges of one gap (lower edge first). The
// spectrum_bottom pseudo-edge yields no prediction.
std::vector<touch_prediction> edge_touch_predictions(const lattice_params& p,
                                                     const gap_record& gap);

}  // namespace qglat

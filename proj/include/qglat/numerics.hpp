#pragma once

#include <functional>
#include <vector>

#include "qglat/types.hpp"

namespace qglat {

// Deterministic scalar root finder: bisection down to bracket width `tol`,
// then a short secant polish confined to the final bracket. Requires
// fn(lo) and fn(hi) to have opposite signs (no_bracket_error otherwise) and
// finite evaluations throughout (singular_error on NaN).
double bracket_root(const std::function<double(double)>& fn, double lo,
                    double hi, double tol);

// Boolean edge refinement: pred(lo) != pred(hi); bisects until the bracket
// is narrower than `tol` and returns the midpoint of the final bracket.
double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        bool at_lo, double hi, double tol);

// Sorts closed intervals and coalesces overlaps and gaps narrower than eps.
// Idempotent; inputs must be finite with lo <= hi.
std::vector<energy_interval> merge_intervals(std::vector<energy_interval> raw,
                                             double eps);

// Membership of k in the singular momentum lattices of the two edge lengths.
momentum_classification classify_momentum(const lattice_params& p, double k);

// Offset used for one-sided limits at singular momenta.
double xi_offset(const lattice_params& p);

}  // namespace qglat

#pragma once

#include <vector>

#include "qglat/types.hpp"
#include "qglat/fiber.hpp"

namespace qglat {

// Independent band-membership check: discretizes both transverse parameters
// on a grid_n-point grid and tests the two-parameter dispersion relation
// directly, with a tolerance matched to the grid resolution. k must be off
// the b-lattice singular momenta.
bool oracle_tau_scan(const lattice_params& p, double k, int grid_n);

// Largest defect of the transfer recursion over the chain |j| <= N for the
// decaying profile of a discrete fiber eigenvalue. The perturbed vertex sits
// at j = 0.
double oracle_recursion_residual(const lattice_params& p,
                                 const fiber_eigenvalue& ev, int n_chain);

// Second-order finite-difference model of the physical comb: n_cells unit
// cells on either side of the perturbed vertex, a transverse phase twist of
// theta2 on each loop, Dirichlet truncation one cell beyond the ends.
// Returns the discrete eigenvalues strictly inside the given gap (margins
// excluding O(h^2) edge pollution). Mesh width h must be at most
// min(a,b)/50 and n_cells at least 20.
std::vector<double> oracle_comb_discretization(const lattice_params& p,
                                               const fiber_params& fp,
                                               const gap_record& gap,
                                               double h, int n_cells);

}  // namespace qglat

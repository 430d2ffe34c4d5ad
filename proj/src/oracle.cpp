#include "qglat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "qglat/numerics.hpp"

namespace qglat {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

// dispersion value at the eigenvalue point, any energy sign
double dispersion_value(const lattice_params& p, double tau,
                        const spectral_point& e) {
    switch (e.sign) {
        case energy_sign::positive:
            return f_tau(p, tau, e.k);
        case energy_sign::negative:
            return f_hat_tau(p, tau, e.kappa);
        case energy_sign::zero:
            return p.gamma * p.a / 2.0 + (p.a + p.b - tau * p.a) / p.b;
    }
    throw internal_error("dispersion_value: bad energy sign");
}

double coupling_shift(const lattice_params& p, const spectral_point& e) {
    double dg = p.tilde() - p.gamma;
    switch (e.sign) {
        case energy_sign::positive:
            return dg * std::sin(e.k * p.a) / (2.0 * e.k);
        case energy_sign::negative:
            return dg * std::sinh(e.kappa * p.a) / (2.0 * e.kappa);
        case energy_sign::zero:
            return dg * p.a / 2.0;
    }
    throw internal_error("coupling_shift: bad energy sign");
}

using sparse_mat = Eigen::SparseMatrix<double>;

struct comb_matrices {
    sparse_mat K;
    Eigen::VectorXd M;     // lumped mass diagonal
    bool doubled = false;  // complex problem embedded as a doubled real one
};

comb_matrices assemble_comb(const lattice_params& p, const fiber_params& fp,
                            double h, int n_cells) {
    int N = n_cells;
    int na = std::max(2, (int)std::llround(p.a / h));
    int nb = std::max(3, (int)std::llround(p.b / h));
    double ha = p.a / na;
    double hb = p.b / nb;

    int nv = 2 * N + 1;
    int nloop = nb - 1;
    int nchain = na - 1;
    size_t off_loop = (size_t)nv;
    size_t off_chain = off_loop + (size_t)nv * nloop;
    size_t off_stub = off_chain + (size_t)(2 * N) * nchain;
    size_t total = off_stub + 2 * (size_t)nchain;

    auto vid = [&](int j) { return (size_t)(j + N); };
    auto lid = [&](int j, int m) {
        return off_loop + (size_t)(j + N) * nloop + (size_t)(m - 1);
    };
    auto cid = [&](int j, int m) {
        return off_chain + (size_t)(j + N) * nchain + (size_t)(m - 1);
    };
    auto sid = [&](int side, int m) {
        return off_stub + (size_t)side * nchain + (size_t)(m - 1);
    };

    std::complex<double> z(std::cos(fp.theta2), std::sin(fp.theta2));
    bool real_case = std::abs(z.imag()) < 1e-14;

    comb_matrices cm;
    cm.doubled = !real_case;
    size_t dim = real_case ? total : 2 * total;
    cm.M = Eigen::VectorXd::Zero((Eigen::Index)dim);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(dim * 8);

    auto add = [&](size_t r, size_t c, std::complex<double> v) {
        if (real_case) {
            trips.emplace_back((int)r, (int)c, v.real());
        } else {
            trips.emplace_back((int)r, (int)c, v.real());
            trips.emplace_back((int)(r + total), (int)(c + total), v.real());
            trips.emplace_back((int)r, (int)(c + total), -v.imag());
            trips.emplace_back((int)(r + total), (int)c, v.imag());
        }
    };
    auto add_mass = [&](size_t r, double v) {
        cm.M[(Eigen::Index)r] += v;
        if (!real_case) cm.M[(Eigen::Index)(r + total)] += v;
    };
    auto bond = [&](size_t q1, size_t q2, double hh,
                    std::complex<double> phase) {
        add(q1, q1, 1.0 / hh);
        add(q2, q2, 1.0 / hh);
        add(q1, q2, -std::conj(phase) / hh);
        add(q2, q1, -phase / hh);
        add_mass(q1, hh / 2.0);
        add_mass(q2, hh / 2.0);
    };
    auto dirich_bond = [&](size_t q, double hh) {
        add(q, q, 1.0 / hh);
        add_mass(q, hh / 2.0);
    };

    for (int j = -N; j <= N; ++j) {
        // loop of length b; the closing bond carries the transverse twist
        size_t prev = vid(j);
        for (int m = 1; m <= nloop; ++m) {
            bond(prev, lid(j, m), hb, 1.0);
            prev = lid(j, m);
        }
        bond(prev, vid(j), hb, z);
        double g = (j == 0 && p.gamma_tilde) ? *p.gamma_tilde : p.gamma;
        add(vid(j), vid(j), g);
    }
    for (int j = -N; j < N; ++j) {
        size_t prev = vid(j);
        for (int m = 1; m <= nchain; ++m) {
            bond(prev, cid(j, m), ha, 1.0);
            prev = cid(j, m);
        }
        bond(prev, vid(j + 1), ha, 1.0);
    }
    for (int side = 0; side < 2; ++side) {
        size_t prev = vid(side == 0 ? -N : N);
        for (int m = 1; m <= nchain; ++m) {
            bond(prev, sid(side, m), ha, 1.0);
            prev = sid(side, m);
        }
        dirich_bond(prev, ha);  // truncated endpoint held at zero
    }

    cm.K = sparse_mat((Eigen::Index)dim, (Eigen::Index)dim);
    cm.K.setFromTriplets(trips.begin(), trips.end());
    cm.K.makeCompressed();
    return cm;
}

// eigenvalue count of the pencil (K, M) below E via LDL^T inertia
long long count_below(const comb_matrices& cm, double e) {
    double jitter = 1e-12 * (1.0 + std::abs(e));
    for (int attempt = 0; attempt < 8; ++attempt) {
        double et = attempt == 0 ? e : e + jitter;
        sparse_mat a = cm.K;
        // subtract E from the lumped-mass diagonal
        for (Eigen::Index i = 0; i < cm.M.size(); ++i) {
            a.coeffRef(i, i) -= et * cm.M[i];
        }
        Eigen::SimplicialLDLT<sparse_mat> ldlt;
        ldlt.compute(a);
        if (ldlt.info() == Eigen::Success) {
            auto d = ldlt.vectorD();
            bool ok = true;
            long long neg = 0;
            for (Eigen::Index i = 0; i < d.size(); ++i) {
                if (!std::isfinite(d[i]) || d[i] == 0.0) {
                    ok = false;
                    break;
                }
                if (d[i] < 0.0) ++neg;
            }
            if (ok) {
                if (cm.doubled) {
                    if (neg % 2 != 0) {
                        ok = false;  // doubled spectrum must pair up
                    } else {
                        return neg / 2;
                    }
                }
                if (ok) return neg;
            }
        }
        jitter *= 4.0;
    }
    throw internal_error("oracle_comb_discretization: factorization failed");
}

}  // namespace

bool oracle_tau_scan(const lattice_params& p, double k, int grid_n) {
    if (grid_n < 3) {
        throw invalid_argument_error("oracle_tau_scan: grid_n must be >= 3");
    }
    if (!(std::isfinite(k) && k > 0.0)) {
        throw invalid_argument_error("oracle_tau_scan: k must be positive");
    }
    if (classify_momentum(p, k).in_xi_b) {
        throw singular_error("oracle_tau_scan: singular at Xi_b");
    }
    double sa = std::sin(k * p.a);
    double sb = std::sin(k * p.b);
    double bq = sa / sb;
    double rhs = p.gamma * sa / (2.0 * k) + std::sin(k * (p.a + p.b)) / sb;
    double tol_g = 2.0 / grid_n * (1.0 + std::abs(bq));
    for (int i2 = 0; i2 < grid_n; ++i2) {
        double tau2 = -1.0 + 2.0 * i2 / (grid_n - 1.0);
        double t = rhs - bq * tau2;
        long long i1 = std::llround((t + 1.0) / 2.0 * (grid_n - 1.0));
        i1 = std::clamp(i1, 0LL, (long long)grid_n - 1);
        double tau1 = -1.0 + 2.0 * (double)i1 / (grid_n - 1.0);
        if (std::abs(tau1 + bq * tau2 - rhs) <= tol_g) return true;
    }
    return false;
}

double oracle_recursion_residual(const lattice_params& p,
                                 const fiber_eigenvalue& ev, int n_chain) {
    if (n_chain < 1) {
        throw invalid_argument_error(
            "oracle_recursion_residual: n_chain must be >= 1");
    }
    double f = dispersion_value(p, ev.fiber.tau, ev.point);
    double f_til = f + coupling_shift(p, ev.point);
    double lam = ev.lambda_decaying;
    std::vector<double> pw((size_t)n_chain + 2, 1.0);
    for (size_t j = 1; j < pw.size(); ++j) pw[j] = pw[j - 1] * lam;
    double worst = std::abs(2.0 * lam - 2.0 * f_til);  // perturbed vertex
    for (int j = 1; j <= n_chain; ++j) {
        double r = std::abs(pw[(size_t)j + 1] - 2.0 * f * pw[(size_t)j] +
                            pw[(size_t)j - 1]);
        worst = std::max(worst, r);
    }
    return worst;
}

std::vector<double> oracle_comb_discretization(const lattice_params& p,
                                               const fiber_params& fp,
                                               const gap_record& gap,
                                               double h, int n_cells) {
    if (!(h > 0.0) || h > p.min_edge() / 50.0 * (1.0 + 1e-12)) {
        throw invalid_argument_error(
            "oracle_comb_discretization: h must be at most min(a,b)/50");
    }
    if (n_cells < 20) {
        throw invalid_argument_error(
            "oracle_comb_discretization: n_cells must be >= 20");
    }
    double lo = gap.interval.lo;
    double hi = gap.interval.hi;
    if (!(hi > lo)) {
        throw invalid_argument_error("oracle_comb_discretization: empty gap");
    }

    comb_matrices cm = assemble_comb(p, fp, h, n_cells);

    double w = hi - lo;
    double m_lo = std::max(0.01 * w, 10.0 * h * h * (1.0 + std::abs(lo)));
    double m_hi = std::max(0.01 * w, 10.0 * h * h * (1.0 + std::abs(hi)));
    double e_lo = lo + m_lo;
    double e_hi = hi - m_hi;
    if (!(e_hi > e_lo)) return {};

    long long n_lo = count_below(cm, e_lo);
    long long n_hi = count_below(cm, e_hi);

    std::vector<double> out;
    for (long long t = 1; t <= n_hi - n_lo; ++t) {
        double blo = e_lo;
        double bhi = e_hi;
        // smallest E with count(E) >= n_lo + t
        while (bhi - blo > 5e-11 * std::max(1.0, std::abs(bhi))) {
            double mid = 0.5 * (blo + bhi);
            if (mid <= blo || mid >= bhi) break;
            if (count_below(cm, mid) >= n_lo + t) {
                bhi = mid;
            } else {
                blo = mid;
            }
        }
        out.push_back(0.5 * (blo + bhi));
    }
    return out;
}

}  // namespace qglat

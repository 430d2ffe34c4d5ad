#include "qglat.h"

#include <cmath>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "qglat/fiber.hpp"
#include "qglat/measure.hpp"
#include "qglat/perturbed.hpp"
#include "qglat/unperturbed.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
qg_status wrap(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return QG_OK;
    } catch (const qglat::invalid_argument_error& e) {
        g_last_error = e.what();
        return QG_ERR_INVALID_ARGUMENT;
    } catch (const qglat::domain_error& e) {
        g_last_error = e.what();
        return QG_ERR_DOMAIN;
    } catch (const qglat::singular_error& e) {
        g_last_error = e.what();
        return QG_ERR_SINGULAR;
    } catch (const qglat::no_bracket_error& e) {
        g_last_error = e.what();
        return QG_ERR_NO_BRACKET;
    } catch (const qglat::no_perturbation_error& e) {
        g_last_error = e.what();
        return QG_ERR_NO_PERTURBATION;
    } catch (const qglat::missing_gamma_tilde_error& e) {
        g_last_error = e.what();
        return QG_ERR_MISSING_GAMMA_TILDE;
    } catch (const qglat::unclassified_edge_error& e) {
        g_last_error = e.what();
        return QG_ERR_UNCLASSIFIED_EDGE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QG_ERR_INTERNAL;
    }
}

qg_status arg_error(const char* msg) {
    g_last_error = msg;
    return QG_ERR_INVALID_ARGUMENT;
}

int edge_kind_code(qglat::edge_kind k) {
    switch (k) {
        case qglat::edge_kind::xi_point: return QG_EDGE_XI;
        case qglat::edge_kind::condition_edge: return QG_EDGE_CONDITION;
        case qglat::edge_kind::spectrum_bottom: return QG_EDGE_SPECTRUM_BOTTOM;
    }
    return QG_EDGE_CONDITION;
}

}  // namespace

struct qg_lattice {
    qglat::lattice_params params;
};

struct qg_spectrum {
    qglat::band_set bands;
    std::vector<qglat::gap_record> gaps;
};

struct qg_perturbed_report {
    qglat::regime_report report;
};

struct qg_fiber_result {
    std::vector<qglat::energy_interval> bands;
    std::vector<qglat::fiber_eigenvalue> eigenvalues;
};

extern "C" {

const char* qg_version(void) { return "qglat 1.0.0"; }

const char* qg_status_name(qg_status s) {
    switch (s) {
        case QG_OK: return "QG_OK";
        case QG_ERR_INVALID_ARGUMENT: return "QG_ERR_INVALID_ARGUMENT";
        case QG_ERR_DOMAIN: return "QG_ERR_DOMAIN";
        case QG_ERR_SINGULAR: return "QG_ERR_SINGULAR";
        case QG_ERR_NO_BRACKET: return "QG_ERR_NO_BRACKET";
        case QG_ERR_NO_PERTURBATION: return "QG_ERR_NO_PERTURBATION";
        case QG_ERR_MISSING_GAMMA_TILDE: return "QG_ERR_MISSING_GAMMA_TILDE";
        case QG_ERR_UNCLASSIFIED_EDGE: return "QG_ERR_UNCLASSIFIED_EDGE";
        case QG_ERR_INTERNAL: return "QG_ERR_INTERNAL";
    }
    return "QG_ERR_INTERNAL";
}

const char* qg_last_error(void) { return g_last_error.c_str(); }

qg_status qg_lattice_create(double a, double b, double gamma,
                            qg_lattice** out) {
    if (!out) return arg_error("qg_lattice_create: out is null");
    *out = nullptr;
    return wrap([&] {
        *out = new qg_lattice{qglat::lattice_params(a, b, gamma)};
    });
}

qg_status qg_lattice_set_gamma_tilde(qg_lattice* lat, double gamma_tilde) {
    if (!lat) return arg_error("qg_lattice_set_gamma_tilde: lat is null");
    return wrap([&] {
        if (!std::isfinite(gamma_tilde)) {
            throw qglat::invalid_argument_error(
                "qg_lattice_set_gamma_tilde: gamma_tilde must be finite");
        }
        lat->params.gamma_tilde = gamma_tilde;
    });
}

qg_status qg_lattice_clear_gamma_tilde(qg_lattice* lat) {
    if (!lat) return arg_error("qg_lattice_clear_gamma_tilde: lat is null");
    lat->params.gamma_tilde.reset();
    return QG_OK;
}

qg_status qg_lattice_gamma_star(const qg_lattice* lat, double* out) {
    if (!lat || !out) return arg_error("qg_lattice_gamma_star: null argument");
    *out = lat->params.gamma_star();
    return QG_OK;
}

void qg_lattice_free(qg_lattice* lat) { delete lat; }

qg_status qg_band_membership(const qg_lattice* lat, double energy,
                             int* member) {
    if (!lat || !member) return arg_error("qg_band_membership: null argument");
    return wrap([&] {
        auto pt = qglat::spectral_point::from_energy(energy);
        bool m = false;
        switch (pt.sign) {
            case qglat::energy_sign::positive:
                m = qglat::band_membership_positive(lat->params, pt.k);
                break;
            case qglat::energy_sign::negative:
                m = qglat::band_membership_negative(lat->params, pt.kappa);
                break;
            case qglat::energy_sign::zero:
                m = qglat::zero_in_spectrum(lat->params);
                break;
        }
        *member = m ? 1 : 0;
    });
}

qg_status qg_s_membership(const qg_lattice* lat, double energy, int* member) {
    if (!lat || !member) return arg_error("qg_s_membership: null argument");
    return wrap([&] {
        auto pt = qglat::spectral_point::from_energy(energy);
        *member = qglat::s_membership(lat->params, pt) ? 1 : 0;
    });
}

qg_status qg_spectrum_compute(const qg_lattice* lat, double e_lo, double e_hi,
                              qg_spectrum** out) {
    if (!lat || !out) return arg_error("qg_spectrum_compute: null argument");
    *out = nullptr;
    return wrap([&] {
        qglat::energy_interval window(e_lo, e_hi);
        auto sp = std::make_unique<qg_spectrum>();
        sp->bands = qglat::compute_bands(lat->params, window);
        sp->gaps = qglat::classify_gap_edges(lat->params, sp->bands);
        *out = sp.release();
    });
}

qg_status qg_spectrum_band_count(const qg_spectrum* sp, size_t* out) {
    if (!sp || !out) return arg_error("qg_spectrum_band_count: null argument");
    *out = sp->bands.bands.size();
    return QG_OK;
}

qg_status qg_spectrum_band(const qg_spectrum* sp, size_t i, double* lo,
                           double* hi, int* kind) {
    if (!sp || !lo || !hi || !kind) {
        return arg_error("qg_spectrum_band: null argument");
    }
    if (i >= sp->bands.bands.size()) {
        return arg_error("qg_spectrum_band: index out of range");
    }
    const auto& band = sp->bands.bands[i];
    *lo = band.lo;
    *hi = band.hi;
    *kind = band.width() == 0.0 ? QG_BAND_FLAT : QG_BAND_AC;
    return QG_OK;
}

qg_status qg_spectrum_flat_count(const qg_spectrum* sp, size_t* out) {
    if (!sp || !out) return arg_error("qg_spectrum_flat_count: null argument");
    *out = sp->bands.flat_bands.size();
    return QG_OK;
}

qg_status qg_spectrum_flat(const qg_spectrum* sp, size_t i, double* energy) {
    if (!sp || !energy) return arg_error("qg_spectrum_flat: null argument");
    if (i >= sp->bands.flat_bands.size()) {
        return arg_error("qg_spectrum_flat: index out of range");
    }
    *energy = sp->bands.flat_bands[i];
    return QG_OK;
}

qg_status qg_spectrum_has_negative_band(const qg_spectrum* sp, int* out) {
    if (!sp || !out) {
        return arg_error("qg_spectrum_has_negative_band: null argument");
    }
    *out = sp->bands.negative_band.has_value() ? 1 : 0;
    return QG_OK;
}

qg_status qg_spectrum_negative_band(const qg_spectrum* sp, double* lo,
                                    double* hi) {
    if (!sp || !lo || !hi) {
        return arg_error("qg_spectrum_negative_band: null argument");
    }
    if (!sp->bands.negative_band) {
        g_last_error = "qg_spectrum_negative_band: no negative band";
        return QG_ERR_DOMAIN;
    }
    *lo = sp->bands.negative_band->lo;
    *hi = sp->bands.negative_band->hi;
    return QG_OK;
}

qg_status qg_spectrum_gap_count(const qg_spectrum* sp, size_t* out) {
    if (!sp || !out) return arg_error("qg_spectrum_gap_count: null argument");
    *out = sp->gaps.size();
    return QG_OK;
}

qg_status qg_spectrum_gap(const qg_spectrum* sp, size_t i, double* lo,
                          double* hi, int* left_kind, int* right_kind,
                          double* left_k, double* right_k) {
    if (!sp || !lo || !hi || !left_kind || !right_kind || !left_k ||
        !right_k) {
        return arg_error("qg_spectrum_gap: null argument");
    }
    if (i >= sp->gaps.size()) {
        return arg_error("qg_spectrum_gap: index out of range");
    }
    const auto& g = sp->gaps[i];
    *lo = g.interval.lo;
    *hi = g.interval.hi;
    *left_kind = edge_kind_code(g.left_edge_kind);
    *right_kind = edge_kind_code(g.right_edge_kind);
    *left_k = g.left_k;
    *right_k = g.right_k;
    return QG_OK;
}

void qg_spectrum_free(qg_spectrum* sp) { delete sp; }

qg_status qg_perturbed_compute(const qg_lattice* lat, double e_lo,
                               double e_hi, qg_perturbed_report** out) {
    if (!lat || !out) return arg_error("qg_perturbed_compute: null argument");
    *out = nullptr;
    return wrap([&] {
        qglat::energy_interval window(e_lo, e_hi);
        auto rep = std::make_unique<qg_perturbed_report>();
        rep->report = qglat::classify_regime(lat->params, window);
        *out = rep.release();
    });
}

qg_status qg_perturbed_case(const qg_perturbed_report* rep, int* out) {
    if (!rep || !out) return arg_error("qg_perturbed_case: null argument");
    switch (rep->report.regime) {
        case qglat::regime_case::i: *out = QG_CASE_I; break;
        case qglat::regime_case::ii: *out = QG_CASE_II; break;
        case qglat::regime_case::iii: *out = QG_CASE_III; break;
        case qglat::regime_case::iv: *out = QG_CASE_IV; break;
    }
    return QG_OK;
}

qg_status qg_perturbed_unchanged(const qg_perturbed_report* rep, int* out) {
    if (!rep || !out) return arg_error("qg_perturbed_unchanged: null argument");
    *out = rep->report.spectrum_unchanged ? 1 : 0;
    return QG_OK;
}

qg_status qg_perturbed_gap_count(const qg_perturbed_report* rep, size_t* out) {
    if (!rep || !out) return arg_error("qg_perturbed_gap_count: null argument");
    *out = rep->report.per_gap.size();
    return QG_OK;
}

qg_status qg_perturbed_gap(const qg_perturbed_report* rep, size_t i,
                           double* lo, double* hi, int* left_kind,
                           int* right_kind) {
    if (!rep || !lo || !hi || !left_kind || !right_kind) {
        return arg_error("qg_perturbed_gap: null argument");
    }
    if (i >= rep->report.per_gap.size()) {
        return arg_error("qg_perturbed_gap: index out of range");
    }
    const auto& g = rep->report.per_gap[i].first;
    *lo = g.interval.lo;
    *hi = g.interval.hi;
    *left_kind = edge_kind_code(g.left_edge_kind);
    *right_kind = edge_kind_code(g.right_edge_kind);
    return QG_OK;
}

qg_status qg_perturbed_gap_has_band(const qg_perturbed_report* rep, size_t i,
                                    int* out) {
    if (!rep || !out) {
        return arg_error("qg_perturbed_gap_has_band: null argument");
    }
    if (i >= rep->report.per_gap.size()) {
        return arg_error("qg_perturbed_gap_has_band: index out of range");
    }
    *out = rep->report.per_gap[i].second.has_value() ? 1 : 0;
    return QG_OK;
}

qg_status qg_perturbed_gap_band(const qg_perturbed_report* rep, size_t i,
                                double* lo, double* hi, int* condition,
                                int* touches_lower, int* touches_upper) {
    if (!rep || !lo || !hi || !condition || !touches_lower || !touches_upper) {
        return arg_error("qg_perturbed_gap_band: null argument");
    }
    if (i >= rep->report.per_gap.size()) {
        return arg_error("qg_perturbed_gap_band: index out of range");
    }
    const auto& nb = rep->report.per_gap[i].second;
    if (!nb) {
        g_last_error = "qg_perturbed_gap_band: gap holds no band";
        return QG_ERR_DOMAIN;
    }
    *lo = nb->interval.lo;
    *hi = nb->interval.hi;
    *condition = nb->condition == qglat::bc_result::in_s_plus
                     ? QG_CONDITION_PLUS
                     : QG_CONDITION_MINUS;
    *touches_lower = nb->touches_lower_edge ? 1 : 0;
    *touches_upper = nb->touches_upper_edge ? 1 : 0;
    return QG_OK;
}

qg_status qg_perturbed_closed_gap_count(const qg_perturbed_report* rep,
                                        size_t* out) {
    if (!rep || !out) {
        return arg_error("qg_perturbed_closed_gap_count: null argument");
    }
    *out = rep->report.closed_gaps.size();
    return QG_OK;
}

qg_status qg_perturbed_closed_gap(const qg_perturbed_report* rep, size_t i,
                                  double* lo, double* hi) {
    if (!rep || !lo || !hi) {
        return arg_error("qg_perturbed_closed_gap: null argument");
    }
    if (i >= rep->report.closed_gaps.size()) {
        return arg_error("qg_perturbed_closed_gap: index out of range");
    }
    *lo = rep->report.closed_gaps[i].interval.lo;
    *hi = rep->report.closed_gaps[i].interval.hi;
    return QG_OK;
}

void qg_perturbed_report_free(qg_perturbed_report* rep) { delete rep; }

qg_status qg_fiber_compute(const qg_lattice* lat, double theta2, double e_lo,
                           double e_hi, qg_fiber_result** out) {
    if (!lat || !out) return arg_error("qg_fiber_compute: null argument");
    *out = nullptr;
    return wrap([&] {
        qglat::energy_interval window(e_lo, e_hi);
        qglat::fiber_params fp(theta2);
        auto fr = std::make_unique<qg_fiber_result>();
        fr->bands = qglat::fiber_bands(lat->params, fp, window);
        const auto& p = lat->params;
        if (p.has_perturbation() && *p.gamma_tilde != p.gamma) {
            auto gaps = qglat::spectral_gaps(p, window, true);
            for (const auto& g : gaps) {
                if (g.interval.hi <= window.lo || g.interval.lo >= window.hi) {
                    continue;
                }
                if (auto ev = qglat::fiber_discrete_eigenvalue(p, fp, g)) {
                    fr->eigenvalues.push_back(*ev);
                }
            }
        }
        *out = fr.release();
    });
}

qg_status qg_fiber_band_count(const qg_fiber_result* fr, size_t* out) {
    if (!fr || !out) return arg_error("qg_fiber_band_count: null argument");
    *out = fr->bands.size();
    return QG_OK;
}

qg_status qg_fiber_band(const qg_fiber_result* fr, size_t i, double* lo,
                        double* hi) {
    if (!fr || !lo || !hi) return arg_error("qg_fiber_band: null argument");
    if (i >= fr->bands.size()) {
        return arg_error("qg_fiber_band: index out of range");
    }
    *lo = fr->bands[i].lo;
    *hi = fr->bands[i].hi;
    return QG_OK;
}

qg_status qg_fiber_eigenvalue_count(const qg_fiber_result* fr, size_t* out) {
    if (!fr || !out) {
        return arg_error("qg_fiber_eigenvalue_count: null argument");
    }
    *out = fr->eigenvalues.size();
    return QG_OK;
}

qg_status qg_fiber_eigenvalue(const qg_fiber_result* fr, size_t i,
                              double* energy, int* branch,
                              double* lambda_decaying,
                              double* localization_length) {
    if (!fr || !energy || !branch || !lambda_decaying ||
        !localization_length) {
        return arg_error("qg_fiber_eigenvalue: null argument");
    }
    if (i >= fr->eigenvalues.size()) {
        return arg_error("qg_fiber_eigenvalue: index out of range");
    }
    const auto& ev = fr->eigenvalues[i];
    *energy = ev.point.energy;
    *branch = ev.branch == qglat::fiber_branch::lower ? QG_BRANCH_LOWER
                                                      : QG_BRANCH_UPPER;
    *lambda_decaying = ev.lambda_decaying;
    *localization_length = ev.localization_length;
    return QG_OK;
}

qg_status qg_fiber_mode_profile(const qg_fiber_result* fr, size_t i,
                                int j_max, double* values, size_t n_values) {
    if (!fr || !values) {
        return arg_error("qg_fiber_mode_profile: null argument");
    }
    if (i >= fr->eigenvalues.size()) {
        return arg_error("qg_fiber_mode_profile: index out of range");
    }
    if (j_max < 0 || n_values != 2 * (size_t)j_max + 1) {
        return arg_error("qg_fiber_mode_profile: n_values != 2*j_max + 1");
    }
    return wrap([&] {
        auto prof = qglat::compute_mode_profile(fr->eigenvalues[i], j_max);
        if (prof.vertex_values.size() != n_values) {
            throw qglat::internal_error(
                "qg_fiber_mode_profile: profile size mismatch");
        }
        for (size_t m = 0; m < n_values; ++m) {
            values[m] = prof.vertex_values[m].second;
        }
    });
}

void qg_fiber_result_free(qg_fiber_result* fr) { delete fr; }

qg_status qg_measure_compute(const qg_lattice* lat, double k_max,
                             long long samples, qg_measure_report* out) {
    if (!lat || !out) return arg_error("qg_measure_compute: null argument");
    return wrap([&] {
        auto rep = qglat::compute_measure_report(lat->params, k_max, samples);
        out->k_energy_cutoff = rep.K;
        out->p_sigma = rep.p_sigma;
        out->p_s = rep.p_s.value_or(0.0);
        out->has_p_s = rep.p_s.has_value() ? 1 : 0;
        out->p1 = rep.p1;
        out->p2 = rep.p2;
        out->xi_cutoff_k = rep.xi_cutoff_k;
        out->sample_count = rep.sample_count;
        out->estimator =
            rep.estimator == qglat::estimator_kind::grid ? 0 : 1;
    });
}

}  // extern "C"

// Command-line front end for the qglat shared library. Talks to the engine
// exclusively through the C API.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qglat.h"

namespace {

using nlohmann::json;

constexpr double pi = 3.14159265358979323846;

[[noreturn]] void die_status(qg_status st) {
    std::cerr << "error: " << qg_last_error() << " ["
              << qg_status_name(st) << "]\n";
    switch (st) {
        case QG_ERR_INVALID_ARGUMENT:
        case QG_ERR_DOMAIN:
        case QG_ERR_SINGULAR:
        case QG_ERR_NO_PERTURBATION:
        case QG_ERR_MISSING_GAMMA_TILDE:
            std::exit(3);
        default:
            std::exit(4);
    }
}

void check(qg_status st) {
    if (st != QG_OK) die_status(st);
}

[[noreturn]] void die_validation(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(3);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string svg_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct lattice_handle {
    qg_lattice* lat = nullptr;
    lattice_handle(double a, double b, double gamma,
                   std::optional<double> gamma_tilde) {
        check(qg_lattice_create(a, b, gamma, &lat));
        if (gamma_tilde) {
            check(qg_lattice_set_gamma_tilde(lat, *gamma_tilde));
        }
    }
    ~lattice_handle() { qg_lattice_free(lat); }
    lattice_handle(const lattice_handle&) = delete;
    lattice_handle& operator=(const lattice_handle&) = delete;
};

const char* edge_kind_name(int k) {
    switch (k) {
        case QG_EDGE_XI: return "xi_point";
        case QG_EDGE_CONDITION: return "condition_edge";
        case QG_EDGE_SPECTRUM_BOTTOM: return "spectrum_bottom";
    }
    return "unknown";
}

const char* case_name(int c) {
    switch (c) {
        case QG_CASE_I: return "i";
        case QG_CASE_II: return "ii";
        case QG_CASE_III: return "iii";
        case QG_CASE_IV: return "iv";
    }
    return "unknown";
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) die_validation("cannot open output file: " + out_path);
    os << text;
}

struct common_opts {
    double a = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    std::optional<double> gamma_tilde;
    double emin = 0.0;
    double emax = 0.0;
    std::string format = "csv";
    std::string out_path;
};

void add_lattice_opts(CLI::App* cmd, common_opts& o, bool tilde_required) {
    cmd->add_option("--a", o.a, "horizontal edge length")->required();
    cmd->add_option("--b", o.b, "loop edge length")->required();
    cmd->add_option("--gamma", o.gamma, "vertex coupling")->required();
    auto* gt = cmd->add_option("--gamma-tilde", o.gamma_tilde,
                               "perturbed coupling at the marked line");
    if (tilde_required) gt->required();
}

void add_window_opts(CLI::App* cmd, common_opts& o) {
    cmd->add_option("--emin", o.emin, "window lower energy (default 0)");
    cmd->add_option("--emax", o.emax, "window upper energy")->required();
}

void add_output_opts(CLI::App* cmd, common_opts& o) {
    cmd->add_option("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
}

// ---- bands ----------------------------------------------------------------

struct spectrum_handle {
    qg_spectrum* sp = nullptr;
    spectrum_handle(const lattice_handle& lh, double lo, double hi) {
        check(qg_spectrum_compute(lh.lat, lo, hi, &sp));
    }
    ~spectrum_handle() { qg_spectrum_free(sp); }
    spectrum_handle(const spectrum_handle&) = delete;
    spectrum_handle& operator=(const spectrum_handle&) = delete;
};

int run_bands(const common_opts& o) {
    lattice_handle lh(o.a, o.b, o.gamma, o.gamma_tilde);
    spectrum_handle sh(lh, o.emin, o.emax);

    size_t nb = 0, nf = 0, ng = 0;
    check(qg_spectrum_band_count(sh.sp, &nb));
    check(qg_spectrum_flat_count(sh.sp, &nf));
    check(qg_spectrum_gap_count(sh.sp, &ng));
    int has_neg = 0;
    check(qg_spectrum_has_negative_band(sh.sp, &has_neg));

    if (o.format == "json") {
        json j;
        j["a"] = o.a;
        j["b"] = o.b;
        j["gamma"] = o.gamma;
        j["window"] = {o.emin, o.emax};
        j["bands"] = json::array();
        for (size_t i = 0; i < nb; ++i) {
            double lo, hi;
            int kind;
            check(qg_spectrum_band(sh.sp, i, &lo, &hi, &kind));
            j["bands"].push_back({{"lo", lo},
                                  {"hi", hi},
                                  {"kind", kind == QG_BAND_FLAT ? "flat"
                                                                : "ac"}});
        }
        j["flat_bands"] = json::array();
        for (size_t i = 0; i < nf; ++i) {
            double e;
            check(qg_spectrum_flat(sh.sp, i, &e));
            j["flat_bands"].push_back(e);
        }
        if (has_neg) {
            double lo, hi;
            check(qg_spectrum_negative_band(sh.sp, &lo, &hi));
            j["negative_band"] = {{"lo", lo}, {"hi", hi}};
        } else {
            j["negative_band"] = nullptr;
        }
        j["gaps"] = json::array();
        for (size_t i = 0; i < ng; ++i) {
            double lo, hi, lk, rk;
            int lkind, rkind;
            check(qg_spectrum_gap(sh.sp, i, &lo, &hi, &lkind, &rkind, &lk,
                                  &rk));
            j["gaps"].push_back({{"lo", lo},
                                 {"hi", hi},
                                 {"left_kind", edge_kind_name(lkind)},
                                 {"right_kind", edge_kind_name(rkind)},
                                 {"left_k", lk},
                                 {"right_k", rk}});
        }
        emit(j.dump(2) + "\n", o.out_path);
        return 0;
    }

    std::string csv =
        "type,index,lo,hi,kind,left_kind,right_kind,left_k,right_k\n";
    for (size_t i = 0; i < nb; ++i) {
        double lo, hi;
        int kind;
        check(qg_spectrum_band(sh.sp, i, &lo, &hi, &kind));
        csv += "band," + std::to_string(i) + "," + num(lo) + "," + num(hi) +
               "," + (kind == QG_BAND_FLAT ? "flat" : "ac") + ",,,,\n";
    }
    for (size_t i = 0; i < nf; ++i) {
        double e;
        check(qg_spectrum_flat(sh.sp, i, &e));
        csv += "flat," + std::to_string(i) + "," + num(e) + "," + num(e) +
               ",flat,,,,\n";
    }
    if (has_neg) {
        double lo, hi;
        check(qg_spectrum_negative_band(sh.sp, &lo, &hi));
        csv += "negative_band,0," + num(lo) + "," + num(hi) + ",ac,,,,\n";
    }
    for (size_t i = 0; i < ng; ++i) {
        double lo, hi, lk, rk;
        int lkind, rkind;
        check(qg_spectrum_gap(sh.sp, i, &lo, &hi, &lkind, &rkind, &lk, &rk));
        csv += "gap," + std::to_string(i) + "," + num(lo) + "," + num(hi) +
               ",," + edge_kind_name(lkind) + "," + edge_kind_name(rkind) +
               "," + num(lk) + "," + num(rk) + "\n";
    }
    emit(csv, o.out_path);
    return 0;
}

// ---- perturbed ------------------------------------------------------------

struct perturbed_handle {
    qg_perturbed_report* rep = nullptr;
    perturbed_handle(const lattice_handle& lh, double lo, double hi) {
        check(qg_perturbed_compute(lh.lat, lo, hi, &rep));
    }
    ~perturbed_handle() { qg_perturbed_report_free(rep); }
    perturbed_handle(const perturbed_handle&) = delete;
    perturbed_handle& operator=(const perturbed_handle&) = delete;
};

int run_perturbed(const common_opts& o) {
    lattice_handle lh(o.a, o.b, o.gamma, o.gamma_tilde);
    perturbed_handle ph(lh, o.emin, o.emax);

    int case_code = 0, unchanged = 0;
    size_t ng = 0, ncg = 0;
    check(qg_perturbed_case(ph.rep, &case_code));
    check(qg_perturbed_unchanged(ph.rep, &unchanged));
    check(qg_perturbed_gap_count(ph.rep, &ng));
    check(qg_perturbed_closed_gap_count(ph.rep, &ncg));

    if (o.format == "json") {
        json j;
        j["case"] = case_name(case_code);
        j["spectrum_unchanged"] = unchanged != 0;
        j["gaps"] = json::array();
        for (size_t i = 0; i < ng; ++i) {
            double lo, hi;
            int lkind, rkind, has_band;
            check(qg_perturbed_gap(ph.rep, i, &lo, &hi, &lkind, &rkind));
            check(qg_perturbed_gap_has_band(ph.rep, i, &has_band));
            json g = {{"lo", lo},
                      {"hi", hi},
                      {"left_kind", edge_kind_name(lkind)},
                      {"right_kind", edge_kind_name(rkind)}};
            if (has_band) {
                double blo, bhi;
                int cond, tl, tu;
                check(qg_perturbed_gap_band(ph.rep, i, &blo, &bhi, &cond,
                                            &tl, &tu));
                g["band"] = {
                    {"lo", blo},
                    {"hi", bhi},
                    {"condition",
                     cond == QG_CONDITION_PLUS ? "plus" : "minus"},
                    {"touches_lower", tl != 0},
                    {"touches_upper", tu != 0}};
            } else {
                g["band"] = nullptr;
            }
            j["gaps"].push_back(g);
        }
        j["closed_gaps"] = json::array();
        for (size_t i = 0; i < ncg; ++i) {
            double lo, hi;
            check(qg_perturbed_closed_gap(ph.rep, i, &lo, &hi));
            j["closed_gaps"].push_back({{"lo", lo}, {"hi", hi}});
        }
        emit(j.dump(2) + "\n", o.out_path);
        return 0;
    }

    std::string csv =
        "case,unchanged,gap_index,gap_lo,gap_hi,left_kind,right_kind,"
        "has_band,band_lo,band_hi,condition,touches_lower,touches_upper\n";
    for (size_t i = 0; i < ng; ++i) {
        double lo, hi;
        int lkind, rkind, has_band;
        check(qg_perturbed_gap(ph.rep, i, &lo, &hi, &lkind, &rkind));
        check(qg_perturbed_gap_has_band(ph.rep, i, &has_band));
        csv += std::string(case_name(case_code)) + "," +
               std::to_string(unchanged) + "," + std::to_string(i) + "," +
               num(lo) + "," + num(hi) + "," + edge_kind_name(lkind) + "," +
               edge_kind_name(rkind) + ",";
        if (has_band) {
            double blo, bhi;
            int cond, tl, tu;
            check(qg_perturbed_gap_band(ph.rep, i, &blo, &bhi, &cond, &tl,
                                        &tu));
            csv += "1," + num(blo) + "," + num(bhi) + "," +
                   (cond == QG_CONDITION_PLUS ? "plus" : "minus") + "," +
                   std::to_string(tl) + "," + std::to_string(tu) + "\n";
        } else {
            csv += "0,,,,,\n";
        }
    }
    emit(csv, o.out_path);
    return 0;
}

// ---- fiber ----------------------------------------------------------------

struct fiber_handle {
    qg_fiber_result* fr = nullptr;
    fiber_handle(const lattice_handle& lh, double theta2, double lo,
                 double hi) {
        check(qg_fiber_compute(lh.lat, theta2, lo, hi, &fr));
    }
    ~fiber_handle() { qg_fiber_result_free(fr); }
    fiber_handle(const fiber_handle&) = delete;
    fiber_handle& operator=(const fiber_handle&) = delete;
};

int run_fiber(const common_opts& o, const std::vector<double>& theta2_list,
              int theta2_grid, int profile_j_max) {
    std::vector<double> thetas = theta2_list;
    if (theta2_grid > 0) {
        if (!thetas.empty()) {
            die_validation("use either --theta2 or --theta2-grid, not both");
        }
        if (theta2_grid == 1) {
            thetas.push_back(0.0);
        } else {
            for (int i = 0; i < theta2_grid; ++i) {
                thetas.push_back(-pi + 2.0 * pi * i / (theta2_grid - 1.0));
            }
        }
    }
    if (thetas.empty()) thetas.push_back(0.0);
    for (double t : thetas) {
        if (std::abs(t) > pi) {
            die_validation("--theta2 must lie in [-pi, pi]");
        }
    }

    lattice_handle lh(o.a, o.b, o.gamma, o.gamma_tilde);

    if (o.format == "json") {
        json j;
        j["fibers"] = json::array();
        for (double t : thetas) {
            fiber_handle fh(lh, t, o.emin, o.emax);
            json jf;
            jf["theta2"] = t;
            size_t nb = 0, ne = 0;
            check(qg_fiber_band_count(fh.fr, &nb));
            check(qg_fiber_eigenvalue_count(fh.fr, &ne));
            jf["bands"] = json::array();
            for (size_t i = 0; i < nb; ++i) {
                double lo, hi;
                check(qg_fiber_band(fh.fr, i, &lo, &hi));
                jf["bands"].push_back({{"lo", lo}, {"hi", hi}});
            }
            jf["eigenvalues"] = json::array();
            for (size_t i = 0; i < ne; ++i) {
                double e, lam, loc;
                int br;
                check(qg_fiber_eigenvalue(fh.fr, i, &e, &br, &lam, &loc));
                json je = {{"energy", e},
                           {"branch",
                            br == QG_BRANCH_LOWER ? "lower" : "upper"},
                           {"lambda", lam},
                           {"localization_length", loc}};
                if (profile_j_max > 0) {
                    std::vector<double> vals(2 * (size_t)profile_j_max + 1);
                    check(qg_fiber_mode_profile(fh.fr, i, profile_j_max,
                                                vals.data(), vals.size()));
                    je["profile"] = vals;
                }
                jf["eigenvalues"].push_back(je);
            }
            j["fibers"].push_back(jf);
        }
        emit(j.dump(2) + "\n", o.out_path);
        return 0;
    }

    std::string csv =
        "theta2,type,index,lo,hi,branch,lambda,localization_length\n";
    for (double t : thetas) {
        fiber_handle fh(lh, t, o.emin, o.emax);
        size_t nb = 0, ne = 0;
        check(qg_fiber_band_count(fh.fr, &nb));
        check(qg_fiber_eigenvalue_count(fh.fr, &ne));
        for (size_t i = 0; i < nb; ++i) {
            double lo, hi;
            check(qg_fiber_band(fh.fr, i, &lo, &hi));
            csv += num(t) + ",band," + std::to_string(i) + "," + num(lo) +
                   "," + num(hi) + ",,,\n";
        }
        for (size_t i = 0; i < ne; ++i) {
            double e, lam, loc;
            int br;
            check(qg_fiber_eigenvalue(fh.fr, i, &e, &br, &lam, &loc));
            csv += num(t) + ",eigenvalue," + std::to_string(i) + "," +
                   num(e) + "," + num(e) + "," +
                   (br == QG_BRANCH_LOWER ? "lower" : "upper") + "," +
                   num(lam) + "," + num(loc) + "\n";
            if (profile_j_max > 0) {
                std::vector<double> vals(2 * (size_t)profile_j_max + 1);
                check(qg_fiber_mode_profile(fh.fr, i, profile_j_max,
                                            vals.data(), vals.size()));
                for (size_t m = 0; m < vals.size(); ++m) {
                    int jj = (int)m - profile_j_max;
                    csv += num(t) + ",profile," + std::to_string(i) + "," +
                           std::to_string(jj) + "," + num(vals[m]) +
                           ",,,\n";
                }
            }
        }
    }
    emit(csv, o.out_path);
    return 0;
}

// ---- sweep ----------------------------------------------------------------

struct sweep_band {
    double lo = 0.0, hi = 0.0;
    int condition = QG_CONDITION_PLUS;
    int touches_lower = 0, touches_upper = 0;
};

struct sweep_step {
    double value = 0.0;
    std::vector<std::pair<double, double>> spectrum;  // clipped bands
    std::vector<double> flats;
    std::vector<std::pair<double, double>> gaps;
    std::vector<std::optional<sweep_band>> gap_bands;
};

std::string render_sweep_svg(const std::vector<sweep_step>& steps,
                             double from, double to, double e_lo,
                             double e_hi, const std::string& vary) {
    const double w = 900.0, h = 600.0, ml = 70.0, mr = 30.0, mt = 30.0,
                 mb = 50.0;
    double span = to - from;
    auto xpos = [&](double v) {
        if (span == 0.0 || steps.size() < 2) return ml + (w - ml - mr) / 2.0;
        return ml + (v - from) / span * (w - ml - mr);
    };
    auto ypos = [&](double e) {
        return h - mb - (e - e_lo) / (e_hi - e_lo) * (h - mt - mb);
    };
    double col = steps.size() > 1
                     ? (w - ml - mr) / (double)(steps.size() - 1) * 0.8
                     : (w - ml - mr) * 0.5;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"" + svg_num(w) + "\" height=\"" + svg_num(h) +
         "\" viewBox=\"0 0 " + svg_num(w) + " " + svg_num(h) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + svg_num(w) + "\" height=\"" +
         svg_num(h) + "\" fill=\"white\"/>\n";

    auto rect = [&](double x, double e1, double e2, const char* fill) {
        double y1 = ypos(e2);
        double y2 = ypos(e1);
        if (y2 - y1 < 1.0) {
            double c = 0.5 * (y1 + y2);
            y1 = c - 0.75;
            y2 = c + 0.75;
        }
        s += "<rect x=\"" + svg_num(x - col / 2.0) + "\" y=\"" +
             svg_num(y1) + "\" width=\"" + svg_num(col) + "\" height=\"" +
             svg_num(y2 - y1) + "\" fill=\"" + fill + "\"/>\n";
    };

    for (const auto& st : steps) {
        double x = xpos(st.value);
        for (const auto& bd : st.spectrum) {
            rect(x, std::max(bd.first, e_lo), std::min(bd.second, e_hi),
                 "#c8c8c8");
        }
        for (size_t i = 0; i < st.gap_bands.size(); ++i) {
            if (!st.gap_bands[i]) continue;
            const auto& nb = *st.gap_bands[i];
            rect(x, std::max(nb.lo, e_lo), std::min(nb.hi, e_hi),
                 nb.condition == QG_CONDITION_PLUS ? "#2b6cb0" : "#c53030");
        }
        for (double e : st.flats) {
            if (e < e_lo || e > e_hi) continue;
            rect(x, e, e, "#c53030");
        }
    }

    // axes
    s += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(h - mb) +
         "\" x2=\"" + svg_num(w - mr) + "\" y2=\"" + svg_num(h - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt) +
         "\" x2=\"" + svg_num(ml) + "\" y2=\"" + svg_num(h - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    auto text = [&](double x, double y, const std::string& t,
                    const char* anchor) {
        s += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) +
             "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
             anchor + "\">" + t + "</text>\n";
    };
    text(ml, h - mb + 18.0, svg_num(from), "middle");
    text(w - mr, h - mb + 18.0, svg_num(to), "middle");
    text((ml + w - mr) / 2.0, h - 12.0, vary, "middle");
    text(ml - 8.0, h - mb + 4.0, svg_num(e_lo), "end");
    text(ml - 8.0, mt + 4.0, svg_num(e_hi), "end");
    text(ml - 8.0, (mt + h - mb) / 2.0, "E", "end");
    s += "</svg>\n";
    return s;
}

int run_sweep(const common_opts& o, const std::string& vary, double from,
              double to, int steps, const std::string& svg_path) {
    if (steps <= 0) die_validation("--steps must be positive");
    if (vary != "gamma_tilde" && vary != "a") {
        die_validation("--vary must be gamma_tilde or a");
    }
    if (vary == "a" && !o.gamma_tilde) {
        die_validation("--gamma-tilde is required when varying a");
    }

    std::vector<sweep_step> out_steps;
    out_steps.reserve((size_t)steps);
    for (int i = 0; i < steps; ++i) {
        double v = steps == 1
                       ? from
                       : from + (to - from) * (double)i / (steps - 1.0);
        double av = vary == "a" ? v : o.a;
        std::optional<double> gt =
            vary == "gamma_tilde" ? std::optional<double>(v) : o.gamma_tilde;
        bool degenerate = gt && *gt == o.gamma;  // no perturbation this step
        lattice_handle lh(av, o.b, o.gamma, gt);
        spectrum_handle sh(lh, o.emin, o.emax);

        sweep_step st;
        st.value = v;
        size_t nb = 0, nf = 0, ng = 0;
        check(qg_spectrum_band_count(sh.sp, &nb));
        for (size_t m = 0; m < nb; ++m) {
            double lo, hi;
            int kind;
            check(qg_spectrum_band(sh.sp, m, &lo, &hi, &kind));
            if (kind == QG_BAND_AC) st.spectrum.emplace_back(lo, hi);
        }
        check(qg_spectrum_flat_count(sh.sp, &nf));
        for (size_t m = 0; m < nf; ++m) {
            double e;
            check(qg_spectrum_flat(sh.sp, m, &e));
            st.flats.push_back(e);
        }
        if (degenerate) {
            check(qg_spectrum_gap_count(sh.sp, &ng));
            for (size_t m = 0; m < ng; ++m) {
                double lo, hi, lk, rk;
                int lkind, rkind;
                check(qg_spectrum_gap(sh.sp, m, &lo, &hi, &lkind, &rkind,
                                      &lk, &rk));
                st.gaps.emplace_back(lo, hi);
                st.gap_bands.emplace_back(std::nullopt);
            }
            out_steps.push_back(std::move(st));
            continue;
        }
        perturbed_handle ph(lh, o.emin, o.emax);
        check(qg_perturbed_gap_count(ph.rep, &ng));
        for (size_t m = 0; m < ng; ++m) {
            double lo, hi;
            int lkind, rkind, has_band;
            check(qg_perturbed_gap(ph.rep, m, &lo, &hi, &lkind, &rkind));
            check(qg_perturbed_gap_has_band(ph.rep, m, &has_band));
            st.gaps.emplace_back(lo, hi);
            if (has_band) {
                sweep_band nb2;
                check(qg_perturbed_gap_band(ph.rep, m, &nb2.lo, &nb2.hi,
                                            &nb2.condition,
                                            &nb2.touches_lower,
                                            &nb2.touches_upper));
                st.gap_bands.emplace_back(nb2);
            } else {
                st.gap_bands.emplace_back(std::nullopt);
            }
        }
        out_steps.push_back(std::move(st));
    }

    if (!svg_path.empty()) {
        double e_lo = o.emin;
        for (const auto& st : out_steps) {
            for (const auto& bd : st.spectrum) e_lo = std::min(e_lo, bd.first);
            for (const auto& nb2 : st.gap_bands) {
                if (nb2) e_lo = std::min(e_lo, nb2->lo);
            }
        }
        std::ofstream os(svg_path, std::ios::binary);
        if (!os) die_validation("cannot open svg file: " + svg_path);
        os << render_sweep_svg(out_steps, from, to, e_lo, o.emax, vary);
    }

    if (o.format == "json") {
        json j;
        j["vary"] = vary;
        j["steps"] = json::array();
        for (const auto& st : out_steps) {
            json js;
            js["value"] = st.value;
            js["gaps"] = json::array();
            for (size_t m = 0; m < st.gaps.size(); ++m) {
                json g = {{"lo", st.gaps[m].first},
                          {"hi", st.gaps[m].second}};
                if (st.gap_bands[m]) {
                    const auto& nb2 = *st.gap_bands[m];
                    g["band"] = {
                        {"lo", nb2.lo},
                        {"hi", nb2.hi},
                        {"condition", nb2.condition == QG_CONDITION_PLUS
                                          ? "plus"
                                          : "minus"},
                        {"touches_lower", nb2.touches_lower != 0},
                        {"touches_upper", nb2.touches_upper != 0}};
                } else {
                    g["band"] = nullptr;
                }
                js["gaps"].push_back(g);
            }
            j["steps"].push_back(js);
        }
        emit(j.dump(2) + "\n", o.out_path);
        return 0;
    }

    std::string csv =
        "step,value,gap_index,gap_lo,gap_hi,has_band,band_lo,band_hi,"
        "condition,touches_lower,touches_upper\n";
    for (size_t i = 0; i < out_steps.size(); ++i) {
        const auto& st = out_steps[i];
        for (size_t m = 0; m < st.gaps.size(); ++m) {
            csv += std::to_string(i) + "," + num(st.value) + "," +
                   std::to_string(m) + "," + num(st.gaps[m].first) + "," +
                   num(st.gaps[m].second) + ",";
            if (st.gap_bands[m]) {
                const auto& nb2 = *st.gap_bands[m];
                csv += "1," + num(nb2.lo) + "," + num(nb2.hi) + "," +
                       (nb2.condition == QG_CONDITION_PLUS ? "plus"
                                                           : "minus") +
                       "," + std::to_string(nb2.touches_lower) + "," +
                       std::to_string(nb2.touches_upper) + "\n";
            } else {
                csv += "0,,,,,\n";
            }
        }
    }
    emit(csv, o.out_path);
    return 0;
}

// ---- measure ----------------------------------------------------------------

int run_measure(const common_opts& o, double k_max, long long samples) {
    lattice_handle lh(o.a, o.b, o.gamma, o.gamma_tilde);
    qg_measure_report rep{};
    check(qg_measure_compute(lh.lat, k_max, samples, &rep));

    json j;
    j["K"] = rep.k_energy_cutoff;
    j["p_sigma"] = rep.p_sigma;
    if (rep.has_p_s) {
        j["p_s"] = rep.p_s;
    } else {
        j["p_s"] = nullptr;
    }
    j["p1"] = rep.p1;
    j["p2"] = rep.p2;
    j["sample_count"] = rep.sample_count;
    j["estimator"] = rep.estimator == 0 ? "grid" : "monte_carlo";
    j["xi_cutoff_k"] = rep.xi_cutoff_k;
    emit(j.dump(2) + "\n", o.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"band structure of delta-coupled rectangular-lattice "
                 "quantum graphs"};
    app.require_subcommand(1);

    common_opts ob, op, of, os, om;

    auto* bands = app.add_subcommand("bands", "unperturbed spectrum");
    add_lattice_opts(bands, ob, false);
    add_window_opts(bands, ob);
    add_output_opts(bands, ob);

    auto* pert = app.add_subcommand(
        "perturbed", "guided bands created by the perturbed line");
    add_lattice_opts(pert, op, true);
    add_window_opts(pert, op);
    add_output_opts(pert, op);

    auto* fiber = app.add_subcommand(
        "fiber", "bands and discrete eigenvalues of single fibers");
    std::vector<double> theta2_list;
    int theta2_grid = 0;
    int profile_j_max = 0;
    add_lattice_opts(fiber, of, false);
    add_window_opts(fiber, of);
    fiber->add_option("--theta2", theta2_list,
                      "transverse phase in [-pi, pi] (repeatable)");
    fiber->add_option("--theta2-grid", theta2_grid,
                      "sample N phases uniformly over [-pi, pi]");
    fiber->add_option("--profile", profile_j_max,
                      "emit decaying vertex profiles for |j| <= this");
    add_output_opts(fiber, of);

    auto* sweep = app.add_subcommand(
        "sweep", "guided bands along a parameter sweep");
    std::string vary = "gamma_tilde";
    double from = 0.0, to = 0.0;
    int steps = 0;
    std::string svg_path;
    add_lattice_opts(sweep, os, false);
    add_window_opts(sweep, os);
    sweep->add_option("--vary", vary, "parameter to vary: gamma_tilde or a");
    sweep->add_option("--from", from, "first parameter value")->required();
    sweep->add_option("--to", to, "last parameter value")->required();
    sweep->add_option("--steps", steps, "number of sweep steps")->required();
    sweep->add_option("--svg", svg_path, "write an SVG band diagram here");
    add_output_opts(sweep, os);

    auto* measure = app.add_subcommand(
        "measure", "spectral fractions at high energy");
    double k_max = 0.0;
    long long samples = 1000000;
    add_lattice_opts(measure, om, false);
    measure->add_option("--kmax", k_max, "momentum cutoff")->required();
    measure->add_option("--samples", samples,
                        "grid points per estimate (default 1e6)");
    add_output_opts(measure, om);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (bands->parsed()) return run_bands(ob);
    if (pert->parsed()) return run_perturbed(op);
    if (fiber->parsed()) {
        return run_fiber(of, theta2_list, theta2_grid, profile_j_max);
    }
    if (sweep->parsed()) return run_sweep(os, vary, from, to, steps, svg_path);
    if (measure->parsed()) return run_measure(om, k_max, samples);
    return 2;
}

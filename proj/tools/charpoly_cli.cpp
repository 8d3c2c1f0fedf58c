/* Command-line front end: census counting, C_P prediction, orbit
 * decomposition, and the numerical verification suite.
 *
 * Exit codes: 0 success/pass, 1 usage error, 2 missing input, 3 budget
 * exhausted, 4 verification failure.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "charpoly/constants.hpp"
#include "charpoly/counter.hpp"
#include "charpoly/geometry.hpp"
#include "charpoly/haar.hpp"
#include "charpoly/lmd.hpp"
#include "charpoly/numfield.hpp"
#include "charpoly/polynomial.hpp"
#include "charpoly/prelude.hpp"

using ojson = nlohmann::ordered_json;
using namespace charpoly;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMissing = 2;
constexpr int kExitBudget = 3;
constexpr int kExitVerify = 4;

IntPolynomial parse_poly(const std::string &csv) {
    std::vector<long> coeffs;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(item, &pos);
        } catch (const std::exception &) {
            throw invalid_input("polynomial coefficient '" + item + "' is not an integer");
        }
        if (pos != item.size())
            throw invalid_input("polynomial coefficient '" + item + "' is not an integer");
        coeffs.push_back(v);
    }
    if (coeffs.size() < 3) throw invalid_input("polynomial must have degree >= 2");
    if (coeffs.front() != 1) throw invalid_input("leading coefficient must be 1");
    return IntPolynomial::from_leading(coeffs);
}

ojson zz_json(const ZZ &z) {
    if (z.fits_slong_p()) return static_cast<long>(z.get_si());
    return z.get_str();
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<OrderInvariants> load_invariants(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw missing_input("cannot open invariants file: " + path);
    ojson doc;
    try {
        in >> doc;
    } catch (const std::exception &e) {
        throw invalid_input(std::string("invariants file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw invalid_input("invariants file must be a JSON array");
    std::vector<OrderInvariants> rows;
    for (const auto &item : doc) {
        if (!item.is_object()) throw invalid_input("invariants entries must be objects");
        OrderInvariants inv;
        try {
            inv.disc = ZZ(item.at("disc").get<long>());
            inv.conductor = ZZ(item.at("conductor").get<long>());
            inv.h = item.at("h").get<long>();
            inv.h_narrow = inv.h;
            inv.regulator = item.at("R").get<double>();
            inv.w = item.at("w").get<long>();
        } catch (const std::exception &e) {
            throw invalid_input(std::string("invariants entry missing field: ") + e.what());
        }
        rows.push_back(inv);
    }
    return rows;
}

ojson report_orders(const PredictionReport &rep) {
    ojson arr = ojson::array();
    for (const auto &row : rep.orders) {
        ojson o;
        o["disc"] = zz_json(row.inv.disc);
        o["conductor"] = zz_json(row.inv.conductor);
        o["h"] = row.inv.h;
        o["w"] = row.inv.w;
        o["regulator"] = row.inv.regulator;
        o["nu_H"] = row.nu_H;
        o["kappa_disc_poly"] = row.kappa_disc_poly;
        o["kappa_disc_field"] = row.kappa_disc_field;
        o["contrib_disc_poly"] = row.contrib_disc_poly;
        o["contrib_disc_field"] = row.contrib_disc_field;
        arr.push_back(o);
    }
    return arr;
}

ojson report_json(const PredictionReport &rep) {
    ojson o;
    ojson poly = ojson::array();
    for (auto it = rep.poly.rbegin(); it != rep.poly.rend(); ++it) poly.push_back(zz_json(*it));
    o["poly"] = poly;
    o["n"] = rep.n;
    o["r1"] = rep.r1;
    o["r2"] = rep.r2;
    o["m"] = rep.m;
    o["disc_poly"] = zz_json(rep.disc_poly);
    o["disc_field"] = zz_json(rep.disc_field);
    o["vol_ball_m"] = rep.vol_ball_m;
    o["vol_minkowski_n"] = rep.vol_minkowski_n;
    o["vol_G_mod_Gamma_n"] = rep.vol_G_mod_Gamma_n;
    o["c_eta_disc_poly"] = rep.c_eta_disc_poly;
    o["c_eta_disc_field"] = rep.c_eta_disc_field;
    o["orders"] = report_orders(rep);
    o["C_P_disc_poly"] = rep.C_P_disc_poly;
    o["C_P_disc_field"] = rep.C_P_disc_field;
    o["disc_choice"] = rep.disc_choice;
    o["C_P"] = rep.C_P;
    o["dual_route_rel_err"] = rep.dual_route_rel_err;
    return o;
}

ojson check_json(const CheckReport &c, const ojson &parameters) {
    ojson o;
    o["name"] = c.name;
    o["parameters"] = parameters;
    o["lhs"] = c.lhs;
    o["rhs"] = c.rhs;
    o["abs_err"] = c.abs_err;
    o["rel_err"] = c.rel_err;
    o["pass"] = c.pass;
    if (!c.note.empty()) o["note"] = c.note;
    return o;
}

struct CountRow {
    std::string T_str;
    double T = 0.0;
    ZZ count;
    double per_tm = 0.0;
    bool have_pred = false;
    double predicted = 0.0;
    double ratio = 0.0;
};

void emit_count(const std::vector<CountRow> &rows, const std::string &format) {
    if (format == "csv") {
        std::printf("T,count,count_per_Tm,predicted_CP,ratio\n");
        for (const auto &r : rows) {
            std::printf("%s,%s,%s,%s,%s\n", r.T_str.c_str(), r.count.get_str().c_str(),
                        fmt_double(r.per_tm).c_str(),
                        r.have_pred ? fmt_double(r.predicted).c_str() : "",
                        r.have_pred ? fmt_double(r.ratio).c_str() : "");
        }
        return;
    }
    ojson arr = ojson::array();
    for (const auto &r : rows) {
        ojson o;
        o["T"] = r.T;
        o["count"] = zz_json(r.count);
        o["count_per_Tm"] = r.per_tm;
        if (r.have_pred) {
            o["predicted_CP"] = r.predicted;
            o["ratio"] = r.ratio;
        } else {
            o["predicted_CP"] = nullptr;
            o["ratio"] = nullptr;
        }
        arr.push_back(o);
    }
    std::printf("%s\n", arr.dump(2).c_str());
}

int run_predict(const std::string &poly_csv, const std::string &disc_choice,
                const std::string &invariants_path, const std::string &format) {
    IntPolynomial P = parse_poly(poly_csv);
    std::vector<OrderInvariants> supplied;
    const std::vector<OrderInvariants> *ptr = nullptr;
    if (!invariants_path.empty()) {
        supplied = load_invariants(invariants_path);
        ptr = &supplied;
    }
    PredictionReport rep = predict_CP(P, disc_choice, ptr);
    if (format == "csv") {
        std::printf("poly,n,r1,r2,m,disc_poly,disc_field,disc_choice,C_P,c_eta,dual_route_rel_err\n");
        std::printf("\"%s\",%d,%d,%d,%d,%s,%s,%s,%s,%s,%s\n", P.str().c_str(), rep.n, rep.r1,
                    rep.r2, rep.m, rep.disc_poly.get_str().c_str(),
                    rep.disc_field.get_str().c_str(), rep.disc_choice.c_str(),
                    fmt_double(rep.C_P).c_str(),
                    fmt_double(disc_choice == "field" ? rep.c_eta_disc_field : rep.c_eta_disc_poly)
                        .c_str(),
                    fmt_double(rep.dual_route_rel_err).c_str());
    } else {
        std::printf("%s\n", report_json(rep).dump(2).c_str());
    }
    return kExitOk;
}

int run_count(const std::string &poly_csv, const std::string &radius,
              const std::string &radius_sweep, const std::string &norm_rule,
              const std::string &disc_choice, const std::string &invariants_path, int threads,
              const std::string &stream_path, const std::string &format,
              unsigned long long node_budget) {
    IntPolynomial P = parse_poly(poly_csv);
    if (radius.empty() == radius_sweep.empty())
        throw invalid_input("provide exactly one of --radius or --radius-sweep");
    if (!stream_path.empty() && radius.empty())
        throw invalid_input("--stream requires a single --radius");

    std::vector<std::string> t_strings;
    {
        std::stringstream ss(radius.empty() ? radius_sweep : radius);
        std::string item;
        while (std::getline(ss, item, ',')) t_strings.push_back(item);
    }
    if (t_strings.empty()) throw invalid_input("no radius given");

    bool have_pred = false;
    double predicted = 0.0;
    if (P.degree() == 2) {
        PredictionReport rep = predict_CP(P, disc_choice);
        predicted = rep.C_P;
        have_pred = true;
    } else if (!invariants_path.empty()) {
        std::vector<OrderInvariants> supplied = load_invariants(invariants_path);
        PredictionReport rep = predict_CP(P, disc_choice, &supplied);
        predicted = rep.C_P;
        have_pred = true;
    }

    int m = static_cast<int>(P.degree() * (P.degree() - 1) / 2);
    std::vector<CountRow> rows;
    for (const auto &ts : t_strings) {
        QQ T = parse_decimal(ts);
        if (!(sgn(T) > 0)) throw invalid_input("radius must be > 0");
        CountOptions opt;
        opt.T = T;
        opt.strict = (norm_rule == "lt");
        opt.threads = threads;
        opt.node_budget = node_budget;
        CountResult res = count_matrices(P, opt);
        CountRow row;
        row.T_str = ts;
        row.T = T.get_d();
        row.count = res.count;
        row.per_tm = res.count.get_d() / std::pow(row.T, m);
        row.have_pred = have_pred;
        if (have_pred) {
            row.predicted = predicted;
            row.ratio = row.per_tm / predicted;
        }
        rows.push_back(row);
    }

    if (!stream_path.empty()) {
        std::ofstream out(stream_path);
        if (!out) throw missing_input("cannot open stream file for writing: " + stream_path);
        QQ T = parse_decimal(t_strings[0]);
        QQ t2 = T * T;
        bool strict = (norm_rule == "lt");
        bool t2_integral = is_integer(t2);
        enumerate_matrices(P, floor_q(t2), [&](const ZMat &X) {
            if (strict && t2_integral) {
                ZZ n2(0);
                for (const ZZ &v : X.a) n2 += v * v;
                if (QQ(n2) == t2) return;
            }
            for (size_t i = 0; i < X.nr; i++)
                for (size_t j = 0; j < X.nc; j++) {
                    if (i + j > 0) out << ' ';
                    out << X(i, j).get_str();
                }
            out << '\n';
        }, node_budget);
    }

    emit_count(rows, format);
    return kExitOk;
}

int run_orbits(const std::string &poly_csv, const std::string &radius, int,
               const std::string &format, unsigned long long node_budget) {
    IntPolynomial P = parse_poly(poly_csv);
    if (P.degree() > 3) {
        std::fprintf(stderr,
                     "orbits: degree %zu is not supported; orbit analysis covers degree 2 and 3\n",
                     P.degree());
        return kExitUsage;
    }
    QQ T = parse_decimal(radius);
    if (!(sgn(T) > 0)) throw invalid_input("radius must be > 0");
    std::vector<ZMat> mats;
    enumerate_matrices(P, floor_q(T * T), [&](const ZMat &X) { mats.push_back(X); }, node_budget);
    FieldPtr F = NumberField::create(P);
    OrbitDecomposition dec = orbit_decompose(mats, F);

    struct Row {
        size_t size;
        ZZ order_disc;
        bool have_cond;
        ZZ conductor;
        std::string tag;
    };
    std::vector<Row> rows;
    for (size_t c = 0; c < dec.classes.size(); ++c) {
        Row r;
        r.size = dec.classes[c].size();
        r.order_disc = dec.invariants[c].order_disc;
        r.tag = dec.invariants[c].tag;
        r.have_cond = (P.degree() == 2);
        if (r.have_cond) r.conductor = conductor_decompose(r.order_disc).first;
        rows.push_back(r);
    }

    if (format == "csv") {
        std::printf("class,size,order_disc,conductor,tag\n");
        for (size_t i = 0; i < rows.size(); ++i)
            std::printf("%zu,%zu,%s,%s,\"%s\"\n", i, rows[i].size,
                        rows[i].order_disc.get_str().c_str(),
                        rows[i].have_cond ? rows[i].conductor.get_str().c_str() : "",
                        rows[i].tag.c_str());
    } else {
        ojson o;
        o["poly"] = poly_csv;
        o["radius"] = T.get_d();
        o["total_matrices"] = mats.size();
        o["num_classes"] = rows.size();
        o["certified"] = dec.certified;
        ojson arr = ojson::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            ojson c;
            c["class"] = i;
            c["size"] = rows[i].size;
            c["order_disc"] = zz_json(rows[i].order_disc);
            if (rows[i].have_cond) c["conductor"] = zz_json(rows[i].conductor);
            else c["conductor"] = nullptr;
            c["tag"] = rows[i].tag;
            arr.push_back(c);
        }
        o["classes"] = arr;
        std::printf("%s\n", o.dump(2).c_str());
    }
    return kExitOk;
}

int emit_verify(const std::vector<ojson> &checks) {
    bool all_pass = true;
    ojson arr = ojson::array();
    for (const auto &c : checks) {
        arr.push_back(c);
        if (!c.at("pass").get<bool>()) all_pass = false;
    }
    ojson o;
    o["checks"] = arr;
    o["pass"] = all_pass;
    std::printf("%s\n", o.dump(2).c_str());
    return all_pass ? kExitOk : kExitVerify;
}

int run_verify_haar(const std::string &identity, long samples, std::uint64_t seed) {
    std::vector<CheckReport> reps = haar_verify(samples, seed);
    ojson params;
    params["identity"] = identity;
    params["samples"] = samples;
    params["seed"] = seed;
    auto matches = [&identity](const std::string &name) {
        if (identity == "all") return true;
        if (identity == "iwasawa-cartan") return name.rfind("kna_eq_kak", 0) == 0;
        if (identity == "knk-cartan") return name.rfind("knk_eq_kak", 0) == 0;
        if (identity == "iwasawa-knk") return name.rfind("kna_eq_knk", 0) == 0;
        return false;
    };
    std::vector<ojson> out;
    for (const auto &c : reps) {
        bool aux = c.name.rfind("radial", 0) == 0 || c.name.rfind("negative", 0) == 0;
        if (identity == "all" ? true : (matches(c.name) && !aux)) out.push_back(check_json(c, params));
    }
    if (out.empty()) throw invalid_input("unknown identity: " + identity);
    return emit_verify(out);
}

int run_verify_jacobian(const std::string &poly_csv, std::uint64_t seed) {
    IntPolynomial P = parse_poly(poly_csv);
    GeometrySession g(P);
    ojson params;
    params["poly"] = poly_csv;
    params["seed"] = seed;
    std::vector<ojson> out;
    for (const auto &c : g.sij_det_checks()) out.push_back(check_json(c, params));
    for (const auto &c : jacobian_check(g, seed)) out.push_back(check_json(c, params));
    return emit_verify(out);
}

int run_verify_sandwich(const std::string &poly_csv, const std::string &radius, long samples,
                        std::uint64_t seed) {
    IntPolynomial P = parse_poly(poly_csv);
    GeometrySession g(P);
    double T = parse_decimal(radius).get_d();
    ojson params;
    params["poly"] = poly_csv;
    params["radius"] = T;
    params["samples"] = samples;
    params["seed"] = seed;
    CheckReport c = sandwich_check(g, T, samples, seed);
    return emit_verify({check_json(c, params)});
}

int run_verify_ceta(const std::string &poly_csv, const std::string &radius, long samples,
                    std::uint64_t seed) {
    IntPolynomial P = parse_poly(poly_csv);
    GeometrySession g(P);
    double T;
    if (radius.empty()) T = (P.degree() == 2) ? 1000.0 : 100.0;
    else T = parse_decimal(radius).get_d();
    ojson params;
    params["poly"] = poly_csv;
    params["radius"] = T;
    params["samples"] = samples;
    params["seed"] = seed;
    CetaReport rep = mc_c_eta(g, T, samples, seed);
    ojson row = check_json(rep.check, params);
    row["std_error"] = rep.std_error;
    row["window_low"] = rep.lower;
    row["window_high"] = rep.upper;
    return emit_verify({row});
}

int run_verify_minkowski2(int grid) {
    CheckReport c = minkowski2_quadrature(grid);
    ojson params;
    params["grid"] = grid;
    return emit_verify({check_json(c, params)});
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"integer-matrix census and constant-verification tool"};
    app.require_subcommand(1);

    std::string poly, radius, radius_sweep, norm_rule = "leq", disc_choice = "poly";
    std::string invariants_path, stream_path, format = "json", identity = "all";
    long samples = 1000000;
    std::uint64_t seed = 0;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    int grid = 2000;
    unsigned long long node_budget = 5'000'000'000ULL;

    auto add_common = [&](CLI::App *cmd, bool need_poly) {
        auto *p = cmd->add_option("--poly", poly, "monic polynomial, comma-separated, leading 1 first");
        if (need_poly) p->required();
        cmd->add_option("--format", format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--seed", seed, "deterministic seed (default 0)");
        cmd->add_option("--threads", threads, "worker threads (default: cores)");
    };

    CLI::App *predict = app.add_subcommand("predict", "closed-form C_P prediction");
    add_common(predict, true);
    predict->add_option("--disc-choice", disc_choice, "poly or field")
        ->check(CLI::IsMember({"poly", "field"}));
    predict->add_option("--invariants", invariants_path, "order invariants JSON (degree >= 3)");

    CLI::App *count = app.add_subcommand("count", "census of integer matrices in a Frobenius ball");
    add_common(count, true);
    count->add_option("--radius", radius, "ball radius T");
    count->add_option("--radius-sweep", radius_sweep, "comma-separated list of radii");
    count->add_option("--norm-rule", norm_rule, "leq (default) or lt")
        ->check(CLI::IsMember({"leq", "lt"}));
    count->add_option("--disc-choice", disc_choice, "poly or field")
        ->check(CLI::IsMember({"poly", "field"}));
    count->add_option("--invariants", invariants_path, "order invariants JSON (degree >= 3)");
    count->add_option("--stream", stream_path, "write censused matrices to this file");
    count->add_option("--node-budget", node_budget, "enumeration node budget");

    CLI::App *orbits = app.add_subcommand("orbits", "orbit decomposition of a ball census");
    add_common(orbits, true);
    orbits->add_option("--radius", radius, "ball radius T")->required();
    orbits->add_option("--node-budget", node_budget, "enumeration node budget");

    CLI::App *verify = app.add_subcommand("verify", "numerical verification suite");
    verify->require_subcommand(1);
    CLI::App *vhaar = verify->add_subcommand("haar", "Haar decomposition identities");
    add_common(vhaar, false);
    vhaar->add_option("--identity", identity,
                      "iwasawa-cartan | knk-cartan | iwasawa-knk | all")
        ->check(CLI::IsMember({"iwasawa-cartan", "knk-cartan", "iwasawa-knk", "all"}));
    vhaar->add_option("--samples", samples, "QMC samples per integral");
    CLI::App *vjac = verify->add_subcommand("jacobian", "constant Jacobian of delta");
    add_common(vjac, true);
    CLI::App *vsand = verify->add_subcommand("sandwich", "delta sandwich inclusions");
    add_common(vsand, true);
    vsand->add_option("--radius", radius, "ball radius T (default 10)");
    vsand->add_option("--samples", samples, "sample count");
    CLI::App *vceta = verify->add_subcommand("ceta", "Monte Carlo c_eta estimate");
    add_common(vceta, true);
    vceta->add_option("--radius", radius, "ball radius T (default 1000 quadratic, 100 cubic)");
    vceta->add_option("--samples", samples, "QMC samples");
    CLI::App *vmink = verify->add_subcommand("minkowski2", "reduced-domain volume quadrature");
    add_common(vmink, false);
    vmink->add_option("--grid", grid, "grid resolution per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(predict))
            return run_predict(poly, disc_choice, invariants_path, format);
        if (app.got_subcommand(count))
            return run_count(poly, radius, radius_sweep, norm_rule, disc_choice, invariants_path,
                             threads, stream_path, format, node_budget);
        if (app.got_subcommand(orbits))
            return run_orbits(poly, radius, threads, format, node_budget);
        if (app.got_subcommand(verify)) {
            if (verify->got_subcommand(vhaar)) return run_verify_haar(identity, samples, seed);
            if (verify->got_subcommand(vjac)) return run_verify_jacobian(poly, seed);
            if (verify->got_subcommand(vsand))
                return run_verify_sandwich(poly, radius.empty() ? "10" : radius,
                                           vsand->count("--samples") ? samples : 100000, seed);
            if (verify->got_subcommand(vceta)) return run_verify_ceta(poly, radius, samples, seed);
            if (verify->got_subcommand(vmink)) return run_verify_minkowski2(grid);
        }
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitUsage;
    } catch (const missing_input &e) {
        std::fprintf(stderr, "missing input: %s\n", e.what());
        return kExitMissing;
    } catch (const budget_exceeded &e) {
        std::fprintf(stderr, "budget exceeded: %s\n", e.what());
        return kExitBudget;
    } catch (const invalid_input &e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitUsage;
    } catch (const error &e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return kExitVerify;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitVerify;
    }
}

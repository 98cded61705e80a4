#include "qrm/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrm/cycle_solver.hpp"
#include "qrm/degeneration.hpp"
#include "qrm/errors.hpp"
#include "qrm/local_invariants.hpp"
#include "qrm/moduli.hpp"
#include "qrm/per_curves.hpp"
#include "qrm/render.hpp"

namespace qrm {

namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation:
        case ErrorCode::DegenerateMap:
        case ErrorCode::PeriodTooLarge:
        case ErrorCode::UnsupportedPeriod:
        case ErrorCode::InadmissiblePath:
        case ErrorCode::InadmissibleMarking:
        case ErrorCode::DegenerateFixedPoints:
        case ErrorCode::NoAdmissiblePair:
        case ErrorCode::CommonComponent:
        case ErrorCode::ContainsInfinityLine:
            return 2;
        default:
            return 3;
    }
}

Complex parse_complex(const std::string& text) {
    auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
        return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorCode::Validation, "cannot parse complex value: " + text);
    }
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json point_json(const SpherePoint& p) {
    if (p.is_inf()) return "inf";
    return complex_json(p.z);
}

struct MapSpec {
    std::string map_text;
    std::string gk, f_alpha, f_beta, F_gamma, F_delta, poly;

    RationalMap2 build() const {
        int picked = int(!map_text.empty()) + int(!gk.empty()) + int(!poly.empty()) +
                     int(!f_alpha.empty() || !f_beta.empty()) +
                     int(!F_gamma.empty() || !F_delta.empty());
        if (picked != 1)
            throw Error(ErrorCode::Validation,
                        "give exactly one of --map, --gk, --poly, --alpha/--beta, "
                        "--gamma/--delta");
        if (!map_text.empty()) {
            std::string text = map_text;
            if (!text.empty() && text[0] != '{') {
                std::ifstream in(text);
                if (!in) throw Error(ErrorCode::Validation, "cannot open map file: " + text);
                std::stringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            }
            return RationalMap2::from_json(text);
        }
        if (!gk.empty()) return RationalMap2::g_family(parse_complex(gk));
        if (!poly.empty()) {
            auto c1 = poly.find(';');
            auto c2 = poly.find(';', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw Error(ErrorCode::Validation, "--poly wants a2;a1;a0");
            return RationalMap2::polynomial(parse_complex(poly.substr(0, c1)),
                                            parse_complex(poly.substr(c1 + 1, c2 - c1 - 1)),
                                            parse_complex(poly.substr(c2 + 1)));
        }
        if (!f_alpha.empty() || !f_beta.empty()) {
            if (f_alpha.empty() || f_beta.empty())
                throw Error(ErrorCode::Validation, "--alpha needs --beta");
            return RationalMap2::f_form(parse_complex(f_alpha), parse_complex(f_beta));
        }
        if (F_gamma.empty() || F_delta.empty())
            throw Error(ErrorCode::Validation, "--gamma needs --delta");
        return RationalMap2::F_form(parse_complex(F_gamma), parse_complex(F_delta));
    }
};

void add_map_options(CLI::App* cmd, MapSpec& spec) {
    cmd->add_option("--map", spec.map_text, "map as JSON text or a file path");
    cmd->add_option("--gk", spec.gk, "G family parameter T (re[,im])");
    cmd->add_option("--poly", spec.poly, "quadratic polynomial a2;a1;a0");
    cmd->add_option("--alpha", spec.f_alpha, "f normal form alpha (re[,im])");
    cmd->add_option("--beta", spec.f_beta, "f normal form beta (re[,im])");
    cmd->add_option("--gamma", spec.F_gamma, "F normal form gamma (re[,im])");
    cmd->add_option("--delta", spec.F_delta, "F normal form delta (re[,im])");
}

void emit(const nlohmann::json& j, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << j.dump() << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCode::Validation, "cannot write: " + out_path);
    f << j.dump() << "\n";
}

ProjectiveCurve curve_from(int n, const std::string& rho_text) {
    // exact Gaussian rational when the text parses as p/q[,r/s]
    try {
        return per_curve(n, parse_gaussian(rho_text));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Validation) throw;
    }
    return per_curve(n, parse_complex(rho_text));
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"quadratic rational map toolkit"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write JSON output to a file instead of stdout");

    MapSpec fix_map, cyc_map, cls_map, mod_map, audit_map, member_map;

    auto* fix = app.add_subcommand("fix", "fixed points with eigenvalues");
    add_map_options(fix, fix_map);

    auto* cyc = app.add_subcommand("cycles", "exact-period cycles");
    add_map_options(cyc, cyc_map);
    int cyc_n = 2;
    cyc->add_option("--n", cyc_n, "period")->required();

    auto* cls = app.add_subcommand("classify", "critical-orbit classification");
    add_map_options(cls, cls_map);
    int cls_iter = 20000;
    double cls_tol = 1e-8;
    cls->add_option("--max-iter", cls_iter, "iteration cap");
    cls->add_option("--tol", cls_tol, "recurrence tolerance");

    auto* mod = app.add_subcommand("moduli", "Milnor coordinates and eigenvalues");
    add_map_options(mod, mod_map);

    auto* conv = app.add_subcommand("convert", "normal-form conversions");
    std::string conv_from, conv_alpha, conv_beta, conv_gamma, conv_delta, conv_x, conv_y;
    std::string conv_branch = "plus";
    conv->add_option("--from", conv_from, "f | F | moduli")->required();
    conv->add_option("--alpha", conv_alpha, "");
    conv->add_option("--beta", conv_beta, "");
    conv->add_option("--gamma", conv_gamma, "");
    conv->add_option("--delta", conv_delta, "");
    conv->add_option("--x", conv_x, "");
    conv->add_option("--y", conv_y, "");
    conv->add_option("--branch", conv_branch, "plus | minus");

    auto* per = app.add_subcommand("per", "Per_n(rho) curve algebra");
    per->require_subcommand(1);
    auto* per_eval = per->add_subcommand("eval", "evaluate the curve at (1, X, Y)");
    int pe_n = 1;
    std::string pe_rho, pe_x, pe_y;
    per_eval->add_option("--n", pe_n)->required();
    per_eval->add_option("--rho", pe_rho)->required();
    per_eval->add_option("--x", pe_x)->required();
    per_eval->add_option("--y", pe_y)->required();
    auto* per_int = per->add_subcommand("intersect", "intersection cycle of two curves");
    int pi_n1 = 1, pi_n2 = 2;
    std::string pi_rho1, pi_rho2;
    per_int->add_option("--n1", pi_n1)->required();
    per_int->add_option("--rho1", pi_rho1)->required();
    per_int->add_option("--n2", pi_n2)->required();
    per_int->add_option("--rho2", pi_rho2)->required();
    auto* per_inf = per->add_subcommand("infinity", "intersection with the line at infinity");
    int pf_n = 2;
    std::string pf_rho;
    per_inf->add_option("--n", pf_n)->required();
    per_inf->add_option("--rho", pf_rho)->required();
    auto* per_div = per->add_subcommand("divides", "exact divisibility of curve 1 into curve 2");
    int pd_n1 = 1, pd_n2 = 3;
    std::string pd_rho1, pd_rho2;
    per_div->add_option("--n1", pd_n1)->required();
    per_div->add_option("--rho1", pd_rho1)->required();
    per_div->add_option("--n2", pd_n2)->required();
    per_div->add_option("--rho2", pd_rho2)->required();
    auto* per_dn = per->add_subcommand("dn", "the d(n) sequence");
    int dn_n = 10;
    per_dn->add_option("--n", dn_n);

    auto* member_cmd = app.add_subcommand("member", "n-cycle eigenvalue membership");
    add_map_options(member_cmd, member_map);
    int mem_n = 1;
    std::string mem_rho;
    double mem_tol = 1e-6;
    member_cmd->add_option("--n", mem_n)->required();
    member_cmd->add_option("--rho", mem_rho)->required();
    member_cmd->add_option("--tol", mem_tol);

    auto* degen = app.add_subcommand("degen", "degeneration path reports");
    int dg_p = 1, dg_q = 2, dg_track = 0;
    std::string dg_tau = "1", dg_eps = "1e-4";
    double dg_radius = 1.0;
    degen->add_option("--p", dg_p);
    degen->add_option("--q", dg_q);
    degen->add_option("--tau", dg_tau);
    degen->add_option("--eps", dg_eps, "single eps or comma list");
    degen->add_option("--radius", dg_radius, "test circle radius for the sup error");
    degen->add_option("--track-n", dg_track, "also track exact-period-n cycles");

    auto* rend = app.add_subcommand("render", "bifurcation-locus renders");
    std::string rd_plane = "gk", rd_center = "0,0", rd_image, rd_sidecar;
    double rd_width = 0.0;
    int rd_res = 512, rd_iter = 20000;
    double rd_tol = 1e-8;
    rend->add_option("--plane", rd_plane, "gk | per2");
    rend->add_option("--center", rd_center);
    rend->add_option("--width", rd_width);
    rend->add_option("--res", rd_res);
    rend->add_option("--max-iter", rd_iter);
    rend->add_option("--tol", rd_tol);
    rend->add_option("--image", rd_image, "write the PPM (P6) image here");

    auto* audit = app.add_subcommand("audit", "index-sum, eigenvalue relation and census");
    add_map_options(audit, audit_map);
    int audit_nmax = 4;
    audit->add_option("--nmax", audit_nmax);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        std::stringstream ss;
        int rc = app.exit(e, ss, ss);
        out << ss.str();
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*fix) {
            auto g = fix_map.build();
            nlohmann::json j = nlohmann::json::array();
            for (const auto& fp : g.fixed_points()) {
                nlohmann::json rec;
                rec["location"] = point_json(fp.location);
                rec["eigenvalue"] = complex_json(fp.eigenvalue);
                rec["multiplicity"] = fp.multiplicity;
                j.push_back(rec);
            }
            emit(j, out_path, out);
        } else if (*cyc) {
            auto g = cyc_map.build();
            nlohmann::json j = nlohmann::json::array();
            for (const auto& rec : cycles(g, cyc_n))
                j.push_back(nlohmann::json::parse(cycle_record_json(rec)));
            emit(j, out_path, out);
        } else if (*cls) {
            auto g = cls_map.build();
            PixelClass pc = classify_parameter(g, cls_iter, cls_tol);
            nlohmann::json j;
            j["tag"] = combined_tag_name(pc.tag);
            j["periods"] = {pc.periods[0], pc.periods[1]};
            j["heuristic_bc"] = pc.heuristic_bc;
            nlohmann::json fates = nlohmann::json::array();
            for (const auto& f : pc.fates) {
                nlohmann::json fj;
                fj["kind"] = f.kind == CritFateKind::Cycle ? "attracted-to-cycle"
                             : f.kind == CritFateKind::ParabolicDrift ? "parabolic-drift-to-inf"
                                                                      : "undecided";
                fj["period"] = f.period;
                nlohmann::json pts = nlohmann::json::array();
                for (const auto& p : f.cycle) pts.push_back(point_json(p));
                fj["cycle"] = pts;
                fates.push_back(fj);
            }
            j["fates"] = fates;
            emit(j, out_path, out);
        } else if (*mod) {
            auto g = mod_map.build();
            auto pt = moduli_point(g);
            auto t = eigen_triple(g);
            nlohmann::json j;
            j["X"] = complex_json(pt.X);
            j["Y"] = complex_json(pt.Y);
            j["eigen"] = {complex_json(t.values[0]), complex_json(t.values[1]),
                          complex_json(t.values[2])};
            emit(j, out_path, out);
        } else if (*conv) {
            nlohmann::json j;
            if (conv_from == "f") {
                fNormalForm nf(parse_complex(conv_alpha), parse_complex(conv_beta));
                auto res = f_to_F(nf, conv_branch == "minus" ? SqrtBranch::Minus
                                                             : SqrtBranch::Plus);
                j["gamma"] = complex_json(res.F.gamma);
                j["delta"] = complex_json(res.F.delta);
                j["a"] = complex_json(res.a);
                j["b"] = complex_json(res.b);
                j["chi_plus"] = point_json(res.chi_plus);
                j["chi_minus"] = point_json(res.chi_minus);
            } else if (conv_from == "F") {
                auto nf = F_to_f(FNormalForm{parse_complex(conv_gamma), parse_complex(conv_delta)});
                j["alpha"] = complex_json(nf.alpha);
                j["beta"] = complex_json(nf.beta);
            } else if (conv_from == "moduli") {
                auto res = from_moduli({parse_complex(conv_x), parse_complex(conv_y)});
                j["map"] = nlohmann::json::parse(res.map.to_json());
                j["used_f_form"] = res.used_f_form;
                j["triple"] = {complex_json(res.triple[0]), complex_json(res.triple[1]),
                               complex_json(res.triple[2])};
            } else {
                throw Error(ErrorCode::Validation, "--from must be f, F or moduli");
            }
            emit(j, out_path, out);
        } else if (*per) {
            nlohmann::json j;
            if (*per_eval) {
                auto c = curve_from(pe_n, pe_rho);
                Complex v = c.evaluate(1.0, parse_complex(pe_x), parse_complex(pe_y));
                j["value"] = complex_json(v);
                j["degree"] = c.degree();
            } else if (*per_int) {
                auto cycle = intersect(curve_from(pi_n1, pi_rho1), curve_from(pi_n2, pi_rho2));
                j = nlohmann::json::parse(intersection_cycle_json(cycle));
            } else if (*per_inf) {
                auto cycle = intersect_at_infinity(curve_from(pf_n, pf_rho));
                j = nlohmann::json::parse(intersection_cycle_json(cycle));
            } else if (*per_div) {
                j["divides"] = divides(curve_from(pd_n1, pd_rho1), curve_from(pd_n2, pd_rho2));
            } else {
                nlohmann::json seq = nlohmann::json::array();
                for (int n = 1; n <= dn_n; ++n) seq.push_back(d_of_n(n));
                j["d"] = seq;
            }
            emit(j, out_path, out);
        } else if (*member_cmd) {
            auto g = member_map.build();
            nlohmann::json j;
            j["member"] = member(g, mem_n, parse_complex(mem_rho), mem_tol);
            emit(j, out_path, out);
        } else if (*degen) {
            DegenerationPath path(dg_p, dg_q, parse_complex(dg_tau));
            std::vector<double> eps_list;
            std::stringstream ss(dg_eps);
            std::string tok;
            while (std::getline(ss, tok, ',')) eps_list.push_back(std::stod(tok));
            nlohmann::json stages = nlohmann::json::array();
            for (double eps : eps_list) {
                auto pt = path.at(eps);
                auto il = index_limit(path, eps);
                nlohmann::json s;
                s["eps"] = eps;
                s["alpha"] = complex_json(pt.alpha);
                s["beta"] = complex_json(pt.beta);
                s["gamma"] = complex_json(pt.gamma);
                s["delta"] = complex_json(pt.F.delta);
                s["S"] = complex_json(il.S);
                s["limit_printed"] = complex_json(il.limit_printed);
                s["limit_rederived"] = complex_json(il.limit_rederived);
                s["sup_error"] = limit_error(path, eps, dg_radius);
                stages.push_back(s);
            }
            nlohmann::json j;
            j["p"] = dg_p;
            j["q"] = dg_q;
            j["tau"] = complex_json(parse_complex(dg_tau));
            j["T"] = complex_json(path.T());
            j["stages"] = stages;
            if (dg_track > 0) {
                auto rep = track_cycles(path, eps_list, dg_track);
                nlohmann::json tracks = nlohmann::json::array();
                for (const auto& st : rep.stages) {
                    nlohmann::json t;
                    t["eps"] = st.eps;
                    nlohmann::json cs = nlohmann::json::array();
                    for (const auto& rec : st.cycles)
                        cs.push_back(nlohmann::json::parse(cycle_record_json(rec)));
                    t["cycles"] = cs;
                    tracks.push_back(t);
                }
                j["tracking"] = tracks;
                j["eigenvalue_limit"] = complex_json(rep.eigenvalue_limit);
                j["alternative"] =
                    rep.alternative == LimitAlternative::FiniteCycleWithInfinity
                        ? "finite-cycle-with-infinity"
                        : rep.alternative == LimitAlternative::CriticalPreorbit
                              ? "critical-preorbit"
                              : "infinity-only";
            }
            emit(j, out_path, out);
        } else if (*rend) {
            RenderJob job =
                (rd_plane == "per2") ? RenderJob::per2_default() : RenderJob::gk_default();
            if (rd_plane != "per2" && rd_plane != "gk")
                throw Error(ErrorCode::Validation, "--plane must be gk or per2");
            job.center = parse_complex(rd_center);
            if (rd_width > 0.0) job.width = rd_width;
            job.resolution = rd_res;
            job.max_iter = rd_iter;
            job.tol = rd_tol;
            auto result = render(job);
            if (!rd_image.empty()) {
                std::ofstream img(rd_image, std::ios::binary);
                if (!img) throw Error(ErrorCode::Validation, "cannot write: " + rd_image);
                std::string bytes = ppm_bytes(result);
                img.write(bytes.data(), long(bytes.size()));
            }
            emit(nlohmann::json::parse(job_json(job, result)), out_path, out);
        } else if (*audit) {
            auto g = audit_map.build();
            auto sum = index_sum_audit(g);
            auto t = eigen_triple(g);
            auto rep = fs_audit(g, audit_nmax);
            nlohmann::json j;
            j["index_sum"] = complex_json(sum.index_sum);
            j["index_residual"] = sum.residual;
            j["mult_sum"] = sum.mult_sum;
            j["abc_residual"] = t.abc_residual();
            j["census"] = nlohmann::json::parse(census_report_json(rep));
            emit(j, out_path, out);
        }
    } catch (const Error& e) {
        out << "{\"error\":\"" << e.what() << "\"}\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        out << "{\"error\":\"" << e.what() << "\"}\n";
        return 3;
    }
    return 0;
}

}  // namespace qrm

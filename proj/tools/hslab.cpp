// Batch front-end: every operation as a subcommand, reports to CSV/JSON.
//
// Exit codes: 0 success, 2 validation error, 3 solver failure (Diverged /
// degenerate denominator), 4 NotPositive.  Diagnostics go to stderr; data
// goes to --out or stdout.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hslab/families.hpp"
#include "hslab/functionals.hpp"
#include "hslab/io.hpp"
#include "hslab/mesh.hpp"
#include "hslab/minimizer.hpp"
#include "hslab/params.hpp"
#include "hslab/scanner.hpp"

using nlohmann::json;
using namespace hslab;

namespace {

struct RunConfig {
    // ParamSet pieces; q kept as text until resolved ("pstar"/"pstar_eff").
    int d = 3, k = 1;
    double p = 2.0, a = 0.0, b = 0.0, gamma = 0.0;
    std::string q_text = "4";
    // mesh
    int nr = 96, ns = 96;
    double r_max = 20.0;
    std::string grading = "log";
    // solver
    int max_iters = 5000;
    double tol = 1e-7;
    std::uint64_t seed = 42;
    int renorm_every = 25;
    std::string init = "gaussian";
    // io
    std::string out_path;
    std::string format = "json";

    ParamSet params() const {
        ParamSet ps;
        ps.d = d;
        ps.k = k;
        ps.p = p;
        ps.a = a;
        ps.b = b;
        ps.gamma = gamma;
        std::string j = "{\"d\":" + std::to_string(d) + ",\"k\":" + std::to_string(k) +
                        ",\"p\":" + fmt17(p) + ",\"a\":" + fmt17(a) + ",\"b\":" + fmt17(b) +
                        ",\"gamma\":" + fmt17(gamma) + ",\"q\":";
        // Reuse the JSON loader so "pstar"/"pstar_eff" resolve identically.
        bool numeric = !q_text.empty() && q_text.find_first_not_of("0123456789.eE+-") ==
                                              std::string::npos;
        j += numeric ? q_text : ("\"" + q_text + "\"");
        j += "}";
        return paramset_from_json(j);
    }

    MeshSpec mesh() const {
        if (nr < 8 || nr > 4096 || ns < 8 || ns > 4096)
            throw BadResolution("mesh resolution must be within [8, 4096] per axis");
        MeshSpec m;
        m.nr = nr;
        m.ns = ns;
        m.r_max = r_max;
        m.grading = grading_from_string(grading);
        return m;
    }

    SolverConfig solver() const {
        SolverConfig cfg;
        cfg.max_iters = max_iters;
        cfg.tol_rel = tol;
        cfg.seed = seed;
        cfg.renormalize_every = renorm_every;
        return cfg;
    }

    ProfileGrid grid(const ParamSet& ps) const {
        const MeshSpec m = mesh();
        return build_grid(m.nr, m.ns, m.r_max, m.grading, ps.d, ps.k);
    }
};

void emit(const RunConfig& rc, const std::string& data) {
    if (rc.out_path.empty()) {
        std::cout << data;
        if (!data.empty() && data.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(rc.out_path, std::ios::binary);
    if (!f) throw ParseError("cannot open output path: " + rc.out_path);
    f << data;
}

std::string minimize_report(const RunConfig& rc, const MinimizeResult& res) {
    if (rc.format == "csv") {
        std::ostringstream os;
        os << "constant_estimate,iterations,converged,flag\n"
           << fmt17(res.constant_estimate) << ',' << res.iterations << ','
           << (res.converged ? "true" : "false") << ',' << to_string(res.concentration_flag)
           << '\n';
        return os.str();
    }
    json j{{"constant_estimate", res.constant_estimate},
           {"iterations", res.iterations},
           {"converged", res.converged},
           {"concentration_flag", to_string(res.concentration_flag)}};
    return j.dump(2);
}

std::vector<double> parse_list(const std::vector<double>& v) { return v; }

void add_param_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("-d", rc.d, "ambient dimension")->required();
    cmd->add_option("-k", rc.k, "dimension of the y-subspace")->required();
    cmd->add_option("-p", rc.p, "gradient exponent")->required();
    cmd->add_option("-q", rc.q_text, "target exponent (number, pstar, or pstar_eff)")->required();
    cmd->add_option("-a", rc.a, "|y| weight exponent");
    cmd->add_option("-b", rc.b, "|z| weight exponent (weight |z|^-b)");
    cmd->add_option("--gamma", rc.gamma, "denominator weight exponent");
}

void add_mesh_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--nr", rc.nr, "radial (|x|) resolution");
    cmd->add_option("--ns", rc.ns, "axial (|y|) resolution");
    cmd->add_option("--rmax", rc.r_max, "truncation radius");
    cmd->add_option("--grading", rc.grading, "uniform or log");
}

void add_solver_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--max-iters", rc.max_iters, "descent iteration cap");
    cmd->add_option("--tol", rc.tol, "relative decrease per 50 iterations to stop");
    cmd->add_option("--seed", rc.seed, "RNG seed for random initial profiles");
    cmd->add_option("--renorm-every", rc.renorm_every, "renormalization period");
    cmd->add_option("--init", rc.init, "initial profile: gaussian, talenti, random");
}

void add_io_options(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--out", rc.out_path, "output path (default: stdout)");
    cmd->add_option("--format", rc.format, "csv or json (table: md or csv)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hslab: sharp constants of anisotropic Hardy-Sobolev inequalities"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file with flat keys matching the flags");
    app.allow_config_extras(CLI::config_extras_mode::ignore);

    RunConfig rc;

    auto* c_classify = app.add_subcommand("classify", "attainability verdict for one ParamSet");
    auto* c_constant = app.add_subcommand("constant", "estimate S_{a,b,gamma}(q) by descent");
    auto* c_mazya = app.add_subcommand("mazya", "estimate the Maz'ya constant M_a(q)");
    auto* c_radial = app.add_subcommand("radial", "radial-class constant at q = p*");
    auto* c_family = app.add_subcommand("family", "test-family sweeps (translate/concentrate/power/horiuchi)");
    auto* c_verify = app.add_subcommand("verify-tb", "transform-identity residual on a smooth bump");
    auto* c_sgamma = app.add_subcommand("sweep-gamma", "estimate along a gamma list");
    auto* c_sb = app.add_subcommand("sweep-b", "bottom-case sweep over b (p = 2)");
    auto* c_table = app.add_subcommand("table", "regime/verdict table for a ParamSet list");

    for (auto* cmd : {c_classify, c_constant, c_mazya, c_radial, c_family, c_verify, c_sgamma, c_sb})
        add_param_options(cmd, rc);
    for (auto* cmd : {c_constant, c_mazya, c_family, c_verify, c_sgamma, c_sb})
        add_mesh_options(cmd, rc);
    for (auto* cmd : {c_constant, c_mazya, c_radial, c_sgamma, c_sb})
        add_solver_options(cmd, rc);
    for (auto* cmd : {c_classify, c_constant, c_mazya, c_radial, c_family, c_verify, c_sgamma,
                      c_sb, c_table})
        add_io_options(cmd, rc);

    std::string trace_out, profile_out;
    c_constant->add_option("--trace-out", trace_out, "write the descent trace CSV here");
    c_constant->add_option("--profile-out", profile_out, "write the final profile CSV here");
    c_mazya->add_option("--trace-out", trace_out, "write the descent trace CSV here");

    int radial_nodes = 400;
    double t_min = 1e-4, t_max = 1e4;
    c_radial->add_option("--radial-nodes", radial_nodes, "1D resolution");
    c_radial->add_option("--tmin", t_min, "innermost radial node");
    c_radial->add_option("--tmax", t_max, "outermost radial node");

    std::string family_kind = "translate";
    std::vector<double> h_values{10.0, 20.0, 40.0, 80.0};
    double family_eps = 0.05;
    std::vector<double> radii{1e-4, 1e4};
    c_family->add_option("--family", family_kind, "translate, concentrate, power, or horiuchi");
    c_family->add_option("--h", h_values, "h values for translate/concentrate")->expected(-1);
    c_family->add_option("--eps", family_eps, "power-profile offset");
    c_family->add_option("--radii", radii, "power-profile cutoff radii (lo hi)")->expected(2);

    std::vector<double> gammas, bs;
    c_sgamma->add_option("--gammas", gammas, "gamma list")->expected(-1)->required();
    c_sb->add_option("--bs", bs, "b list")->expected(-1)->required();

    std::string params_file;
    c_table->add_option("--params-file", params_file, "JSON array of ParamSet objects")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (*c_classify) {
            const ParamSet ps = rc.params();
            emit(rc, to_json(classify(ps), ps));
        } else if (*c_constant) {
            const ParamSet ps = rc.params();
            ProfileGrid g = rc.grid(ps);
            fill_init(g, init_profile_from_string(rc.init), ps, rc.seed);
            MinimizeResult res = minimize_quotient(ps, rc.solver(), std::move(g));
            if (!trace_out.empty()) std::ofstream(trace_out) << trace_to_csv(res.trace);
            if (!profile_out.empty()) std::ofstream(profile_out) << grid_to_csv(res.profile);
            emit(rc, minimize_report(rc, res));
        } else if (*c_mazya) {
            const ParamSet ps = rc.params();
            ProfileGrid g = rc.grid(ps);
            fill_init(g, init_profile_from_string(rc.init), ps, rc.seed);
            MinimizeResult res = estimate_mazya(ps, rc.solver(), std::move(g));
            if (!trace_out.empty()) std::ofstream(trace_out) << trace_to_csv(res.trace);
            emit(rc, minimize_report(rc, res));
        } else if (*c_radial) {
            const ParamSet ps = rc.params();
            MinimizeResult res = minimize_radial(ps, rc.solver(), radial_nodes, t_min, t_max);
            emit(rc, minimize_report(rc, res));
        } else if (*c_family) {
            const ParamSet ps = rc.params();
            std::vector<FamilyPoint> pts;
            if (family_kind == "translate") {
                ProfileGrid base = rc.grid(ps);
                fill_compact_bump(base, 1.0, 1.0, 1.0);
                for (double h : parse_list(h_values)) {
                    const auto rep = translate_family_quotient(ps, base, h);
                    pts.push_back({FamilyKind::TranslateAlongSigma0, h, rep.quotient,
                                   rep.quad_error});
                }
            } else if (family_kind == "concentrate") {
                const auto base = talenti_profile(ps.d, ps.p, 1.0);
                for (double h : parse_list(h_values)) {
                    const auto rep = concentrate_family_quotient(ps, base, h);
                    pts.push_back({FamilyKind::ConcentrateAtPoint, h, rep.quotient,
                                   rep.quad_error});
                }
            } else if (family_kind == "power") {
                const MeshSpec m = rc.mesh();
                ProfileGrid g = build_grid(m.nr, m.ns, m.r_max, m.grading, ps.d, ps.k);
                radial_power_profile(ps, family_eps, radii[0], radii[1], g);
                const auto rep = hardy_quotient(ps, g);
                pts.push_back({FamilyKind::RadialPower, family_eps, rep.quotient, rep.quad_error});
            } else if (family_kind == "horiuchi") {
                pts.push_back({FamilyKind::HoriuchiRadial, 0.0, horiuchi_radial_bound(ps), 0.0});
            } else {
                throw ParseError("unknown family kind: " + family_kind);
            }
            emit(rc, family_points_to_csv(pts));
        } else if (*c_verify) {
            const ParamSet ps = rc.params();
            ProfileGrid g = rc.grid(ps);
            const double c = 0.35 * g.r_max, w = 0.2 * g.r_max;
            fill_compact_bump(g, c, c, w);
            const double residual = verify_tb_identity(ps, g);
            json j{{"residual", residual}, {"nr", g.nr()}, {"ns", g.ns()}};
            emit(rc, j.dump(2));
        } else if (*c_sgamma) {
            const ParamSet ps = rc.params();
            SweepResult res = sweep_gamma(ps, gammas, rc.solver(), rc.mesh());
            if (rc.format == "json") {
                emit(rc, sweep_verdicts_to_json(res, ps));
            } else {
                emit(rc, sweep_to_csv(res));
                if (!rc.out_path.empty())
                    std::ofstream(rc.out_path + ".verdicts.json")
                        << sweep_verdicts_to_json(res, ps);
            }
        } else if (*c_sb) {
            const ParamSet ps = rc.params();
            SweepResult res = sweep_bottom_b(ps, bs, rc.solver(), rc.mesh());
            if (rc.format == "json") {
                emit(rc, sweep_verdicts_to_json(res, ps));
            } else {
                emit(rc, sweep_to_csv(res));
                if (!rc.out_path.empty())
                    std::ofstream(rc.out_path + ".verdicts.json")
                        << sweep_verdicts_to_json(res, ps);
            }
        } else if (*c_table) {
            std::ifstream f(params_file);
            if (!f) throw ParseError("cannot read params file: " + params_file);
            std::stringstream buf;
            buf << f.rdbuf();
            const auto list = paramsets_from_json(buf.str());
            const RegimeTable t = regime_table(list);
            emit(rc, rc.format == "csv" ? table_to_csv(t) : table_to_markdown(t));
        }
    } catch (const NotPositive& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const Diverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ZeroDenominator& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

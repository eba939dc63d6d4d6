#include "hslab/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hslab/io.hpp"

namespace hslab {

using nlohmann::json;

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Gamma: return "gamma";
        case SweepAxis::B: return "b";
        case SweepAxis::Q: return "q";
        case SweepAxis::A: return "a";
    }
    return "gamma";
}

namespace {

SweepPoint run_point(const ParamSet& ps, const SolverConfig& cfg, const MeshSpec& mesh,
                     double param, bool bottom_form) {
    SweepPoint pt;
    pt.parameter = param;
    try {
        ProfileGrid g = build_grid(mesh.nr, mesh.ns, mesh.r_max, mesh.grading, ps.d, ps.k);
        fill_init(g, InitProfile::GaussianBump, ps, cfg.seed);
        MinimizeResult res = bottom_form ? minimize_bottom_jb(ps, cfg, std::move(g))
                                         : minimize_quotient(ps, cfg, std::move(g));
        pt.estimate = res.constant_estimate;
        pt.converged = res.converged;
        pt.flag = res.concentration_flag;
    } catch (const NotPositive& e) {
        pt.error = std::string("NotPositive: ") + e.what();
    } catch (const Error& e) {
        pt.error = e.what();
    }
    return pt;
}

} // namespace

SweepResult sweep_gamma(const ParamSet& ps_base, const std::vector<double>& gammas,
                        const SolverConfig& cfg, const MeshSpec& mesh) {
    std::vector<double> vals = gammas;
    std::sort(vals.begin(), vals.end());
    SweepResult out;
    out.axis = SweepAxis::Gamma;
    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(vals.size());
    for (double gv : vals) {
        ParamSet ps = ps_base;
        ps.gamma = gv;
        jobs.emplace_back(std::async(std::launch::async, run_point, ps, cfg, mesh, gv, false));
    }
    for (size_t i = 0; i < vals.size(); ++i) {
        out.points.push_back(jobs[i].get());
        ParamSet ps = ps_base;
        ps.gamma = vals[i];
        out.verdicts.push_back(classify(ps));
    }
    return out;
}

SweepResult sweep_bottom_b(const ParamSet& ps_base, const std::vector<double>& bs,
                           const SolverConfig& cfg, const MeshSpec& mesh) {
    if (!detail::nearly(ps_base.p, 2.0)) throw WrongP("sweep_bottom_b: requires p = 2");
    const double two_ha = 2.0 * ps_base.h_of(ps_base.a);
    for (double bv : bs)
        if (!(bv < two_ha))
            throw OutOfRange("sweep_bottom_b: violated condition b < 2H_a at b = " +
                             std::to_string(bv));

    std::vector<double> vals = bs;
    std::sort(vals.begin(), vals.end());
    SweepResult out;
    out.axis = SweepAxis::B;

    auto bottom_ps = [&](double bv) {
        ParamSet ps = ps_base;
        ps.b = bv;
        ps.gamma = bv;
        return ps;
    };

    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(vals.size() + 1);
    for (double bv : vals)
        jobs.emplace_back(
            std::async(std::launch::async, run_point, bottom_ps(bv), cfg, mesh, bv, true));
    // Maz'ya reference through the same solver (b = 0).
    auto ma_job = std::async(std::launch::async, run_point, bottom_ps(0.0), cfg, mesh, 0.0, true);

    for (size_t i = 0; i < vals.size(); ++i) {
        out.points.push_back(jobs[i].get());
        out.verdicts.push_back(classify(bottom_ps(vals[i])));
    }
    out.mazya_estimate = ma_job.get().estimate;

    if (std::isfinite(out.mazya_estimate)) {
        for (const auto& pt : out.points) {
            if (std::isfinite(pt.estimate) && pt.estimate < 0.97 * out.mazya_estimate) {
                out.bstar_estimate = pt.parameter;
                break;
            }
        }
    }
    return out;
}

bool nondecreasing_within(const std::vector<SweepPoint>& pts, double rel_tol) {
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!std::isfinite(pts[i].estimate) || !std::isfinite(pts[i + 1].estimate)) continue;
        if (pts[i + 1].estimate < pts[i].estimate * (1.0 - rel_tol)) return false;
    }
    return true;
}

bool strictly_decreasing_beyond(const std::vector<SweepPoint>& pts, double rel_tol) {
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!std::isfinite(pts[i].estimate) || !std::isfinite(pts[i + 1].estimate)) return false;
        if (!(pts[i + 1].estimate < pts[i].estimate * (1.0 - rel_tol))) return false;
    }
    return true;
}

std::string sweep_to_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "param,estimate,converged,flag\n";
    for (const auto& pt : r.points)
        os << fmt17(pt.parameter) << ',' << fmt17(pt.estimate) << ','
           << (pt.converged ? "true" : "false") << ','
           << (pt.error.empty() ? to_string(pt.flag) : "error") << '\n';
    return os.str();
}

std::string sweep_verdicts_to_json(const SweepResult& r, const ParamSet& ps_base) {
    json points = json::array();
    for (size_t i = 0; i < r.points.size(); ++i) {
        const auto& pt = r.points[i];
        json jp{{"param", pt.parameter},
                {"estimate", pt.estimate},
                {"converged", pt.converged},
                {"flag", to_string(pt.flag)}};
        if (!pt.error.empty()) jp["error"] = pt.error;
        if (i < r.verdicts.size())
            jp["verdict"] = json::parse(to_json(r.verdicts[i], ps_base));
        points.push_back(jp);
    }
    json j{{"axis", to_string(r.axis)}, {"points", points}};
    if (r.bstar_estimate) j["bstar_estimate"] = *r.bstar_estimate;
    if (std::isfinite(r.mazya_estimate)) j["mazya_estimate"] = r.mazya_estimate;
    return j.dump(2);
}

RegimeTable regime_table(const std::vector<ParamSet>& ps_list) {
    RegimeTable t;
    t.columns = {"d", "k", "p", "q", "a", "b", "gamma", "regime", "positive", "attainability",
                 "citations", "note"};
    for (const auto& ps : ps_list) {
        const Verdict v = classify(ps);
        std::string cites;
        for (size_t i = 0; i < v.citations.size(); ++i) {
            if (i) cites += "; ";
            cites += v.citations[i];
        }
        t.rows.push_back({std::to_string(ps.d), std::to_string(ps.k), fmt17(ps.p), fmt17(ps.q),
                          fmt17(ps.a), fmt17(ps.b), fmt17(ps.gamma), to_string(v.regime),
                          v.positive ? "true" : "false", to_string(v.attainability), cites,
                          v.condition_note});
    }
    return t;
}

std::string table_to_markdown(const RegimeTable& t) {
    std::ostringstream os;
    os << '|';
    for (const auto& c : t.columns) os << ' ' << c << " |";
    os << "\n|";
    for (size_t i = 0; i < t.columns.size(); ++i) os << " --- |";
    os << '\n';
    for (const auto& row : t.rows) {
        os << '|';
        for (const auto& cell : row) os << ' ' << cell << " |";
        os << '\n';
    }
    return os.str();
}

std::string table_to_csv(const RegimeTable& t) {
    std::ostringstream os;
    auto esc = [](const std::string& s) {
        if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    };
    for (size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << esc(row[i]);
        os << '\n';
    }
    return os.str();
}

} // namespace hslab

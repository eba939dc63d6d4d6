#include "hslab/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hslab/families.hpp"
#include "hslab/io.hpp"

namespace hslab {

const char* to_string(ConcentrationFlag f) {
    switch (f) {
        case ConcentrationFlag::None: return "None";
        case ConcentrationFlag::TowardAxis: return "TowardAxis";
        case ConcentrationFlag::TowardOrigin: return "TowardOrigin";
        case ConcentrationFlag::TowardInfinity: return "TowardInfinity";
    }
    return "None";
}

InitProfile init_profile_from_string(const std::string& s) {
    if (s == "gaussian" || s == "GaussianBump") return InitProfile::GaussianBump;
    if (s == "talenti" || s == "TalentiLike") return InitProfile::TalentiLike;
    if (s == "random" || s == "Random") return InitProfile::Random;
    throw ParseError("unknown init profile: " + s);
}

void fill_init(ProfileGrid& g, InitProfile kind, const ParamSet& ps, std::uint64_t seed) {
    switch (kind) {
        case InitProfile::GaussianBump: {
            const double c = 0.5 * g.r_max / 20.0;
            fill_gaussian_bump(g, c, c, g.r_max / 40.0);
            return;
        }
        case InitProfile::TalentiLike: {
            const double p_shape = ps.p < static_cast<double>(g.d) ? ps.p : 2.0;
            fill_talenti_bubble(g, p_shape, g.r_max / 20.0);
            return;
        }
        case InitProfile::Random: {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> uc(std::log(g.r_max / 100.0),
                                                      std::log(g.r_max / 2.0));
            std::uniform_real_distribution<double> uw(g.r_max / 40.0, g.r_max / 8.0);
            std::uniform_real_distribution<double> ua(0.2, 1.0);
            std::vector<double> acc(g.values.size(), 0.0);
            ProfileGrid tmp = g;
            for (int b = 0; b < 6; ++b) {
                fill_gaussian_bump(tmp, std::exp(uc(rng)), std::exp(uc(rng)), uw(rng));
                const double amp = ua(rng);
                for (size_t m = 0; m < acc.size(); ++m) acc[m] += amp * tmp.values[m];
            }
            g.values = acc;
            return;
        }
    }
}

namespace {

double power_integral(double lo, double hi, double e) {
    if (std::abs(e + 1.0) < 1e-13) return std::log(hi / lo);
    return (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
}

// Dual-cell edges around each node: [0, m_1], [m_1, m_2], ..., [m_{n-1}, x_n].
std::vector<double> dual_edges(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<double> e(n + 1);
    e[0] = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) e[i + 1] = 0.5 * (x[i] + x[i + 1]);
    e[n] = x[n - 1];
    return e;
}

// Three-point derivative stencil coefficients per row.
struct Stencil {
    std::vector<double> cm, c0, cp;
};

Stencil make_stencil(const std::vector<double>& x) {
    const size_t n = x.size();
    Stencil st;
    st.cm.assign(n, 0.0);
    st.c0.assign(n, 0.0);
    st.cp.assign(n, 0.0);
    if (n < 2) return st;
    st.c0[0] = -1.0 / (x[1] - x[0]);
    st.cp[0] = 1.0 / (x[1] - x[0]);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
        st.cm[i] = -hp / (hm * (hm + hp));
        st.c0[i] = (hp - hm) / (hm * hp);
        st.cp[i] = hm / (hp * (hm + hp));
    }
    st.cm[n - 1] = -1.0 / (x[n - 1] - x[n - 2]);
    st.c0[n - 1] = 1.0 / (x[n - 1] - x[n - 2]);
    return st;
}

struct WeightFields {
    std::vector<double> w; // per node
};

// Exact dual-cell integral of w(r,s) r^{d-k-1} s^{k-1} with the |z| factor
// frozen at the dual-cell centroid.
WeightFields node_weights(const ProfileGrid& g, const WeightSpec& w) {
    const int nr = g.nr(), ns = g.ns();
    const double er = static_cast<double>(g.d - g.k - 1);
    const double es = static_cast<double>(g.k - 1) + w.y_exp;
    if (er <= -1.0 || es <= -1.0)
        throw DivergentWeight("node_weights: non-integrable axis exponent");
    const auto re = dual_edges(g.r_nodes), se = dual_edges(g.s_nodes);
    std::vector<double> pr(nr), ps_(ns), rc(nr), sc(ns);
    for (int i = 0; i < nr; ++i) {
        pr[i] = power_integral(re[i], re[i + 1], er);
        rc[i] = 0.5 * (re[i] + re[i + 1]);
    }
    for (int j = 0; j < ns; ++j) {
        ps_[j] = power_integral(se[j], se[j + 1], es);
        sc[j] = 0.5 * (se[j] + se[j + 1]);
    }
    const double ang = sphere_area(g.d - g.k) * sphere_area(g.k);
    WeightFields f;
    f.w.resize(static_cast<size_t>(nr) * ns);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ns; ++j) {
            double z = 1.0;
            if (w.z_exp != 0.0)
                z = std::pow(rc[i] * rc[i] + sc[j] * sc[j] + w.z_sq_offset, 0.5 * w.z_exp);
            f.w[static_cast<size_t>(i) * ns + j] = ang * pr[i] * ps_[j] * z;
        }
    return f;
}

struct DiscreteOps {
    int nr = 0, ns = 0;
    Stencil str, sts;
    std::vector<double> w_num;   // gradient-term weights
    std::vector<double> w_hardy; // J_b correction weights (bottom solver)
    double hardy_coef = 0.0;
    std::vector<double> v_den;
    std::vector<double> omega; // plain volume metric
    double p = 2.0, q = 4.0;
    double delta2 = 0.0; // regularization of |grad u|^{p-2}

    void apply_dr(const std::vector<double>& u, std::vector<double>& out) const {
        for (int j = 0; j < ns; ++j)
            for (int i = 0; i < nr; ++i) {
                double v = str.c0[i] * u[idx(i, j)];
                if (i > 0) v += str.cm[i] * u[idx(i - 1, j)];
                if (i + 1 < nr) v += str.cp[i] * u[idx(i + 1, j)];
                out[idx(i, j)] = v;
            }
    }
    void apply_ds(const std::vector<double>& u, std::vector<double>& out) const {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < ns; ++j) {
                double v = sts.c0[j] * u[idx(i, j)];
                if (j > 0) v += sts.cm[j] * u[idx(i, j - 1)];
                if (j + 1 < ns) v += sts.cp[j] * u[idx(i, j + 1)];
                out[idx(i, j)] = v;
            }
    }
    void apply_dr_t(const std::vector<double>& w, std::vector<double>& out) const {
        for (int j = 0; j < ns; ++j)
            for (int i = 0; i < nr; ++i) {
                double v = str.c0[i] * w[idx(i, j)];
                if (i > 0) v += str.cp[i - 1] * w[idx(i - 1, j)];
                if (i + 1 < nr) v += str.cm[i + 1] * w[idx(i + 1, j)];
                out[idx(i, j)] += v;
            }
    }
    void apply_ds_t(const std::vector<double>& w, std::vector<double>& out) const {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < ns; ++j) {
                double v = sts.c0[j] * w[idx(i, j)];
                if (j > 0) v += sts.cp[j - 1] * w[idx(i, j - 1)];
                if (j + 1 < ns) v += sts.cm[j + 1] * w[idx(i, j + 1)];
                out[idx(i, j)] += v;
            }
    }
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * ns + j; }

    double numerator(const std::vector<double>& u, std::vector<double>& dr,
                     std::vector<double>& ds) const {
        apply_dr(u, dr);
        apply_ds(u, ds);
        double acc = 0.0;
        const size_t n = u.size();
        if (p == 2.0) {
            for (size_t m = 0; m < n; ++m) acc += w_num[m] * (dr[m] * dr[m] + ds[m] * ds[m]);
        } else {
            for (size_t m = 0; m < n; ++m)
                acc += w_num[m] * std::pow(dr[m] * dr[m] + ds[m] * ds[m] + delta2, 0.5 * p);
        }
        if (!w_hardy.empty())
            for (size_t m = 0; m < n; ++m) acc += hardy_coef * w_hardy[m] * u[m] * u[m];
        return acc;
    }

    double denominator(const std::vector<double>& u) const {
        double acc = 0.0;
        if (q == 2.0) {
            for (size_t m = 0; m < u.size(); ++m) acc += v_den[m] * u[m] * u[m];
        } else {
            for (size_t m = 0; m < u.size(); ++m)
                acc += v_den[m] * std::pow(std::abs(u[m]), q);
        }
        return acc;
    }

    void numerator_gradient(const std::vector<double>& u, const std::vector<double>& dr,
                            const std::vector<double>& ds, std::vector<double>& grad,
                            std::vector<double>& scratch) const {
        const size_t n = u.size();
        std::fill(grad.begin(), grad.end(), 0.0);
        if (p == 2.0) {
            for (size_t m = 0; m < n; ++m) scratch[m] = 2.0 * w_num[m] * dr[m];
            apply_dr_t(scratch, grad);
            for (size_t m = 0; m < n; ++m) scratch[m] = 2.0 * w_num[m] * ds[m];
            apply_ds_t(scratch, grad);
        } else {
            std::vector<double> phi(n);
            for (size_t m = 0; m < n; ++m)
                phi[m] = p * w_num[m] *
                         std::pow(dr[m] * dr[m] + ds[m] * ds[m] + delta2, 0.5 * p - 1.0);
            for (size_t m = 0; m < n; ++m) scratch[m] = phi[m] * dr[m];
            apply_dr_t(scratch, grad);
            for (size_t m = 0; m < n; ++m) scratch[m] = phi[m] * ds[m];
            apply_ds_t(scratch, grad);
        }
        if (!w_hardy.empty())
            for (size_t m = 0; m < n; ++m) grad[m] += 2.0 * hardy_coef * w_hardy[m] * u[m];
    }

    void denominator_gradient(const std::vector<double>& u, std::vector<double>& grad) const {
        if (q == 2.0) {
            for (size_t m = 0; m < u.size(); ++m) grad[m] = 2.0 * v_den[m] * u[m];
        } else {
            for (size_t m = 0; m < u.size(); ++m)
                grad[m] = q * v_den[m] * std::pow(std::abs(u[m]), q - 2.0) * u[m];
        }
    }
};

// Rayleigh-quotient weights for the full problem on this grid.
DiscreteOps make_hs_ops(const ParamSet& ps, const ProfileGrid& g) {
    DiscreteOps ops;
    ops.nr = g.nr();
    ops.ns = g.ns();
    ops.str = make_stencil(g.r_nodes);
    ops.sts = make_stencil(g.s_nodes);
    ops.p = ps.p;
    ops.q = ps.q;
    ops.w_num = node_weights(g, {ps.a, -ps.b, 0.0}).w;
    ops.v_den = node_weights(g, {ps.theta(), -ps.gamma * ps.q / ps.p, 0.0}).w;
    ops.omega = node_weights(g, {0.0, 0.0, 0.0}).w;
    return ops;
}

DiscreteOps make_jb_ops(const ParamSet& ps, const ProfileGrid& g) {
    DiscreteOps ops;
    ops.nr = g.nr();
    ops.ns = g.ns();
    ops.str = make_stencil(g.r_nodes);
    ops.sts = make_stencil(g.s_nodes);
    ops.p = 2.0;
    ops.q = ps.q;
    const double ha = ps.h_of(ps.a);
    ops.w_num = node_weights(g, {ps.a, 0.0, 0.0}).w;
    ops.w_hardy = node_weights(g, {ps.a, -2.0, 0.0}).w;
    ops.hardy_coef = 0.5 * ps.b * (0.5 * ps.b - 2.0 * ha);
    ops.v_den = node_weights(g, {-static_cast<double>(ps.d) + ps.q * ha, 0.0, 0.0}).w;
    ops.omega = node_weights(g, {0.0, 0.0, 0.0}).w;
    return ops;
}

ConcentrationFlag concentration_flag(const DiscreteOps& ops, const std::vector<double>& u) {
    const int nr = ops.nr, ns = ops.ns;
    double total = 0.0, outer = 0.0, axis = 0.0, origin = 0.0;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ns; ++j) {
            const double m = ops.v_den[ops.idx(i, j)] *
                             std::pow(std::abs(u[ops.idx(i, j)]), ops.q);
            total += m;
            if (i >= 9 * nr / 10 || j >= 9 * ns / 10) outer += m;
            if (j < ns / 10) axis += m;
            if (i < nr / 10 && j < ns / 10) origin += m;
        }
    if (total <= 0.0) return ConcentrationFlag::None;
    if (origin >= 0.9 * total) return ConcentrationFlag::TowardOrigin;
    if (axis >= 0.9 * total) return ConcentrationFlag::TowardAxis;
    if (outer >= 0.9 * total) return ConcentrationFlag::TowardInfinity;
    return ConcentrationFlag::None;
}

struct DescentOutcome {
    std::vector<double> u;
    double quotient = 0.0;
    int iterations = 0;
    std::vector<std::pair<int, double>> trace;
    bool converged = false;
};

DescentOutcome run_descent(DiscreteOps& ops, std::vector<double> u, const SolverConfig& cfg) {
    if (cfg.max_iters < 100) throw OutOfRange("SolverConfig: max_iters >= 100 required");
    if (!(cfg.tol_rel > 0.0)) throw OutOfRange("SolverConfig: tol_rel > 0 required");
    const size_t n = u.size();
    std::vector<double> dr(n), ds(n), gradn(n), gradd(n), scratch(n), dir(n), trial(n), dr2(n),
        ds2(n);

    auto normalize = [&](std::vector<double>& v) {
        const double den = ops.denominator(v);
        if (!(den > 1e-300)) throw ZeroDenominator("minimize: profile denominator vanished");
        const double c = std::pow(den, -1.0 / ops.q);
        for (auto& x : v) x *= c;
    };
    for (auto& x : u) x = std::max(x, 0.0);
    normalize(u);

    if (ops.p != 2.0) {
        // Fix the degenerate-gradient regularization from the initial scale.
        ops.apply_dr(u, dr);
        ops.apply_ds(u, ds);
        double gmax = 0.0;
        for (size_t m = 0; m < n; ++m)
            gmax = std::max(gmax, dr[m] * dr[m] + ds[m] * ds[m]);
        ops.delta2 = std::max(1e-16 * gmax, 1e-300);
    }

    double num = ops.numerator(u, dr, ds);
    double den = ops.denominator(u);
    double quotient = num / std::pow(den, ops.p / ops.q);

    DescentOutcome out;
    out.trace.reserve(cfg.max_iters + 1);
    out.trace.emplace_back(0, quotient);

    double step = 0.05;
    int consecutive_fails = 0;
    double window_ref = quotient;
    bool converged = false;
    int it = 1;
    for (; it <= cfg.max_iters; ++it) {
        ops.numerator_gradient(u, dr, ds, gradn, scratch);
        ops.denominator_gradient(u, gradd);
        const double lam = ops.p * num / (ops.q * den);
        const double dscale = std::pow(den, ops.p / ops.q);
        double dirnorm = 0.0;
        for (size_t m = 0; m < n; ++m) {
            dir[m] = (gradn[m] - lam * gradd[m]) / (dscale * ops.omega[m]);
            dirnorm = std::max(dirnorm, std::abs(dir[m]));
        }
        const double umax = *std::max_element(u.begin(), u.end());
        if (dirnorm <= 0.0 || umax <= 0.0) {
            converged = true;
            break;
        }
        // Scale so that `step` moves the profile by step * umax at the peak.
        const double scale = umax / dirnorm;

        bool accepted = false;
        double s = step;
        for (int bt = 0; bt < 40; ++bt) {
            for (size_t m = 0; m < n; ++m) trial[m] = std::max(u[m] - s * scale * dir[m], 0.0);
            const double tnum = ops.numerator(trial, dr2, ds2);
            const double tden = ops.denominator(trial);
            if (tden > 1e-300) {
                const double tq = tnum / std::pow(tden, ops.p / ops.q);
                if (tq < quotient) {
                    u.swap(trial);
                    num = tnum;
                    den = tden;
                    quotient = tq;
                    step = std::min(s * 1.3, 1.0);
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if (accepted) {
            consecutive_fails = 0;
        } else {
            ++consecutive_fails;
        }

        out.trace.emplace_back(it, quotient);

        if (it % cfg.renormalize_every == 0) {
            normalize(u);
            num = ops.numerator(u, dr, ds);
            den = ops.denominator(u);
        }

        if (it % 50 == 0) {
            const double dec = (window_ref - quotient) / std::max(std::abs(quotient), 1e-300);
            if (dec < cfg.tol_rel) {
                converged = true;
                break;
            }
            window_ref = quotient;
        }

        if (consecutive_fails >= 50) {
            const size_t back = out.trace.size() >= 50 ? out.trace.size() - 50 : 0;
            const double dec = (out.trace[back].second - quotient) /
                               std::max(std::abs(quotient), 1e-300);
            if (dec < cfg.tol_rel) {
                converged = true;
                break;
            }
            throw Diverged("minimize: line search failed 50 times consecutively");
        }
    }

    out.u = std::move(u);
    out.quotient = quotient;
    out.iterations = std::min(it, cfg.max_iters);
    out.converged = converged;
    return out;
}

} // namespace

MinimizeResult minimize_quotient(const ParamSet& ps, const SolverConfig& cfg, ProfileGrid g) {
    if (!positivity(ps)) throw NotPositive("minimize_quotient: S_{a,b,gamma}(q) = 0 here");
    if (g.empty_values()) fill_init(g, InitProfile::GaussianBump, ps, cfg.seed);
    DiscreteOps ops = make_hs_ops(ps, g);
    auto outcome = run_descent(ops, g.values, cfg);
    MinimizeResult res;
    res.constant_estimate = outcome.quotient;
    g.values = std::move(outcome.u);
    res.concentration_flag = concentration_flag(ops, g.values);
    res.profile = std::move(g);
    res.iterations = outcome.iterations;
    res.trace = std::move(outcome.trace);
    res.converged = outcome.converged;
    return res;
}

MinimizeResult estimate_mazya(const ParamSet& ps, const SolverConfig& cfg, ProfileGrid g) {
    ParamSet cyl = ps;
    cyl.b = 0.0;
    cyl.gamma = 0.0;
    return minimize_quotient(cyl, cfg, std::move(g));
}

MinimizeResult minimize_bottom_jb(const ParamSet& ps, const SolverConfig& cfg, ProfileGrid g) {
    if (!detail::nearly(ps.p, 2.0)) throw WrongP("minimize_bottom_jb: requires p = 2");
    const double ha = ps.h_of(ps.a);
    if (!(ps.b < 2.0 * ha)) throw OutOfRange("minimize_bottom_jb: requires b < 2H_a");
    ParamSet bottom = ps;
    bottom.gamma = ps.b;
    if (!positivity(bottom)) throw NotPositive("minimize_bottom_jb: constant vanishes here");
    if (g.empty_values()) fill_init(g, InitProfile::GaussianBump, ps, cfg.seed);
    DiscreteOps ops = make_jb_ops(ps, g);
    auto outcome = run_descent(ops, g.values, cfg);
    MinimizeResult res;
    res.constant_estimate = outcome.quotient;
    g.values = std::move(outcome.u);
    res.concentration_flag = concentration_flag(ops, g.values);
    res.profile = std::move(g);
    res.iterations = outcome.iterations;
    res.trace = std::move(outcome.trace);
    res.converged = outcome.converged;
    return res;
}

MinimizeResult minimize_radial(const ParamSet& ps, const SolverConfig& cfg, int n_nodes,
                               double t_min, double t_max) {
    if (!(ps.p < static_cast<double>(ps.d)))
        throw OutOfRange("minimize_radial: requires p < d");
    const double ab = ps.a - ps.b;
    if (!(ab > -(static_cast<double>(ps.d) - ps.p)))
        throw OutOfRange("minimize_radial: requires a-b > -(d-p)");
    const double pst = ps.p_star();

    std::vector<double> t(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
        t[i] = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (n_nodes - 1));

    DiscreteOps ops;
    ops.nr = n_nodes;
    ops.ns = 1;
    ops.str = make_stencil(t);
    ops.sts = Stencil{{0.0}, {0.0}, {0.0}};
    ops.p = ps.p;
    ops.q = pst;

    const auto edges = dual_edges(t);
    const double ang = sphere_area(ps.d);
    auto fill = [&](double expo) {
        std::vector<double> w(n_nodes);
        for (int i = 0; i < n_nodes; ++i)
            w[i] = ang * power_integral(edges[i], edges[i + 1], expo);
        return w;
    };
    ops.w_num = fill(ab + ps.d - 1.0);
    ops.v_den = fill(ab * pst / ps.p + ps.d - 1.0);
    ops.omega = fill(static_cast<double>(ps.d) - 1.0);

    std::vector<double> u(n_nodes);
    const double nu = (ps.d - ps.p) / ps.p;
    const double pp = ps.p / (ps.p - 1.0);
    for (int i = 0; i < n_nodes; ++i) u[i] = std::pow(1.0 + std::pow(t[i], pp), -nu);

    auto outcome = run_descent(ops, std::move(u), cfg);
    MinimizeResult res;
    res.constant_estimate = outcome.quotient;
    res.iterations = outcome.iterations;
    res.trace = std::move(outcome.trace);
    res.converged = outcome.converged;
    res.radial_nodes = std::move(t);
    res.radial_values = std::move(outcome.u);
    return res;
}

double el_residual(const ParamSet& ps, const ProfileGrid& g) {
    DiscreteOps ops = make_hs_ops(ps, g);
    const size_t n = g.values.size();
    std::vector<double> dr(n), ds(n), gradn(n), gradd(n), scratch(n);
    const double num = ops.numerator(g.values, dr, ds);
    const double den = ops.denominator(g.values);
    ops.numerator_gradient(g.values, dr, ds, gradn, scratch);
    ops.denominator_gradient(g.values, gradd);
    const double lam = ops.p * num / (ops.q * den);
    double rnorm = 0.0, nnorm = 0.0;
    for (size_t m = 0; m < n; ++m) {
        const double res = (gradn[m] - lam * gradd[m]) / ops.omega[m];
        const double ref = gradn[m] / ops.omega[m];
        rnorm += ops.omega[m] * res * res;
        nnorm += ops.omega[m] * ref * ref;
    }
    return std::sqrt(rnorm / std::max(nnorm, 1e-300));
}

double solver_numerator(const ParamSet& ps, const ProfileGrid& g) {
    DiscreteOps ops = make_hs_ops(ps, g);
    std::vector<double> dr(g.values.size()), ds(g.values.size());
    return ops.numerator(g.values, dr, ds);
}

std::vector<double> solver_numerator_gradient(const ParamSet& ps, const ProfileGrid& g) {
    DiscreteOps ops = make_hs_ops(ps, g);
    const size_t n = g.values.size();
    std::vector<double> dr(n), ds(n), grad(n), scratch(n);
    ops.numerator(g.values, dr, ds);
    ops.numerator_gradient(g.values, dr, ds, grad, scratch);
    return grad;
}

std::string trace_to_csv(const std::vector<std::pair<int, double>>& trace) {
    std::ostringstream os;
    os << "iter,quotient\n";
    for (const auto& [it, q] : trace) os << it << ',' << fmt17(q) << '\n';
    return os.str();
}

} // namespace hslab

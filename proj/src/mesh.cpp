#include "hslab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hslab/io.hpp"

namespace hslab {

const char* to_string(Grading g) {
    return g == Grading::Uniform ? "Uniform" : "LogGraded";
}

Grading grading_from_string(const std::string& s) {
    if (s == "uniform" || s == "Uniform") return Grading::Uniform;
    if (s == "log" || s == "loggraded" || s == "LogGraded") return Grading::LogGraded;
    throw ParseError("unknown grading: " + s);
}

bool ProfileGrid::empty_values() const {
    for (double v : values)
        if (v != 0.0) return false;
    return true;
}

double ProfileGrid::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ProfileGrid::support_radius() const {
    double rad = 0.0;
    for (int i = 0; i < nr(); ++i)
        for (int j = 0; j < ns(); ++j)
            if (at(i, j) != 0.0)
                rad = std::max(rad, std::hypot(r_nodes[i], s_nodes[j]));
    return rad;
}

double sphere_area(int m) {
    // |S^{m-1}|; |S^0| = 2.
    return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

ProfileGrid build_grid(int nr, int ns, double r_max, Grading grading, int d, int k) {
    if (nr < 8 || ns < 8) throw BadResolution("build_grid: need nr, ns >= 8");
    if (!(r_max > 0.0)) throw BadResolution("build_grid: need R_max > 0");
    if (!(d > k && k >= 1)) throw BadResolution("build_grid: need d > k >= 1");
    ProfileGrid g;
    g.d = d;
    g.k = k;
    g.grading = grading;
    g.r_max = r_max;
    auto make_nodes = [&](int n) {
        std::vector<double> x(n);
        if (grading == Grading::Uniform) {
            for (int i = 0; i < n; ++i) x[i] = r_max * (i + 1) / n;
        } else {
            for (int i = 0; i < n; ++i) x[i] = r_max * std::pow(kGradingRatio, i + 1 - n);
        }
        return x;
    };
    g.r_nodes = make_nodes(nr);
    g.s_nodes = make_nodes(ns);
    g.values.assign(static_cast<size_t>(nr) * ns, 0.0);
    return g;
}

namespace {

// int_{lo}^{hi} x^e dx, closed form.
double power_integral(double lo, double hi, double e) {
    if (std::abs(e + 1.0) < 1e-13) return std::log(hi / lo);
    return (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
}

// int_{lo}^{hi} x^e (x-lo)/(hi-lo) dx, closed form.
double ramp_integral(double lo, double hi, double e) {
    return (power_integral(lo, hi, e + 1.0) - lo * power_integral(lo, hi, e)) / (hi - lo);
}

struct Edges {
    std::vector<double> x; // nr+1 edges, x[0] = 0
};

Edges cell_edges(const std::vector<double>& nodes) {
    Edges e;
    e.x.resize(nodes.size() + 1);
    e.x[0] = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) e.x[i + 1] = nodes[i];
    return e;
}

struct AxisTables {
    // Per cell: plain and ramp moments of x^e over [x_c, x_{c+1}].
    std::vector<double> m0, m1;
};

AxisTables axis_tables(const Edges& e, double expo) {
    AxisTables t;
    const size_t n = e.x.size() - 1;
    t.m0.resize(n);
    t.m1.resize(n);
    for (size_t c = 0; c < n; ++c) {
        t.m0[c] = power_integral(e.x[c], e.x[c + 1], expo);
        t.m1[c] = ramp_integral(e.x[c], e.x[c + 1], expo);
    }
    return t;
}

inline double zfactor(double rc, double sc, const WeightSpec& w) {
    if (w.z_exp == 0.0) return 1.0;
    return std::pow(rc * rc + sc * sc + w.z_sq_offset, 0.5 * w.z_exp);
}

// Bilinear-cell integral against precomputed axis moments.
inline double cell_bilinear(double f00, double f10, double f01, double f11, double ir0, double ir1,
                            double is0, double is1) {
    const double irl = ir0 - ir1, isl = is0 - is1;
    return f00 * irl * isl + f10 * ir1 * isl + f01 * irl * is1 + f11 * ir1 * is1;
}

double field_at(const ProfileGrid& g, const std::vector<double>& field, int i, int j) {
    // Constant extrapolation to the axes (index -1 clamps to 0).
    const int ii = std::max(i, 0), jj = std::max(j, 0);
    return field[static_cast<size_t>(ii) * g.s_nodes.size() + jj];
}

QuadratureResult integrate_impl(const ProfileGrid& g, const std::vector<double>& field,
                                const WeightSpec& w, double f_power) {
    const int d = g.d, k = g.k;
    if (!(d > k && k >= 1)) throw DivergentWeight("integrate: need d > k >= 1 on the grid");
    const double er = static_cast<double>(d - k - 1);
    const double es = static_cast<double>(k - 1) + w.y_exp;
    if (er <= -1.0)
        throw DivergentWeight("integrate: non-integrable r exponent at the axis");
    if (es <= -1.0)
        throw DivergentWeight("integrate: non-integrable s exponent at the axis (y_exp = " +
                              std::to_string(w.y_exp) + ")");

    const Edges re = cell_edges(g.r_nodes), se = cell_edges(g.s_nodes);
    const int nr = g.nr(), ns = g.ns();

    // Coarse tables plus split tables for one 2x2 refinement per cell.
    const AxisTables rt = axis_tables(re, er), st = axis_tables(se, es);
    auto split_edges = [](const Edges& e) {
        Edges s;
        s.x.resize(2 * (e.x.size() - 1) + 1);
        for (size_t c = 0; c + 1 < e.x.size(); ++c) {
            s.x[2 * c] = e.x[c];
            s.x[2 * c + 1] = 0.5 * (e.x[c] + e.x[c + 1]);
        }
        s.x.back() = e.x.back();
        return s;
    };
    const Edges re2 = split_edges(re), se2 = split_edges(se);
    const AxisTables rt2 = axis_tables(re2, er), st2 = axis_tables(se2, es);

    auto fpow = [f_power](double v) {
        if (f_power == 1.0) return std::abs(v);
        if (f_power == 2.0) return v * v;
        return std::pow(std::abs(v), f_power);
    };

    double coarse = 0.0, fine = 0.0;
    for (int ci = 0; ci < nr; ++ci) {
        const double rlo = re.x[ci], rhi = re.x[ci + 1];
        const double rc = 0.5 * (rlo + rhi);
        for (int cj = 0; cj < ns; ++cj) {
            const double slo = se.x[cj], shi = se.x[cj + 1];
            const double sc = 0.5 * (slo + shi);

            const double u00 = field_at(g, field, ci - 1, cj - 1);
            const double u10 = field_at(g, field, ci, cj - 1);
            const double u01 = field_at(g, field, ci - 1, cj);
            const double u11 = field_at(g, field, ci, cj);
            if (u00 == 0.0 && u10 == 0.0 && u01 == 0.0 && u11 == 0.0) continue;

            const double f00 = fpow(u00), f10 = fpow(u10), f01 = fpow(u01), f11 = fpow(u11);
            coarse += zfactor(rc, sc, w) *
                      cell_bilinear(f00, f10, f01, f11, rt.m0[ci], rt.m1[ci], st.m0[cj], st.m1[cj]);

            // One refinement level: corner values of the subcells come from
            // the bilinear reconstruction of u, then |.|^{f_power}.
            const double um0 = 0.5 * (u00 + u10), u0m = 0.5 * (u00 + u01);
            const double um1 = 0.5 * (u01 + u11), u1m = 0.5 * (u10 + u11);
            const double umm = 0.25 * (u00 + u10 + u01 + u11);
            const double fm0 = fpow(um0), f0m = fpow(u0m), fm1 = fpow(um1), f1m = fpow(u1m),
                         fmm = fpow(umm);
            // Subcell corner layout in (r,s):
            //   (lo,lo)(mid,lo)(hi,lo) / (lo,mid)(mid,mid)(hi,mid) / ...
            const double c00[4] = {f00, fm0, f0m, fmm};
            const double c10[4] = {fm0, f10, fmm, f1m};
            const double c01[4] = {f0m, fmm, f01, fm1};
            const double c11[4] = {fmm, f1m, fm1, f11};
            const double* sub[4] = {c00, c10, c01, c11};
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    const int ri = 2 * ci + si, sjj = 2 * cj + sj;
                    const double rlo2 = re2.x[ri], rhi2 = re2.x[ri + 1];
                    const double slo2 = se2.x[sjj], shi2 = se2.x[sjj + 1];
                    const double* cc = sub[si * 2 + sj];
                    fine += zfactor(0.5 * (rlo2 + rhi2), 0.5 * (slo2 + shi2), w) *
                            cell_bilinear(cc[0], cc[1], cc[2], cc[3], rt2.m0[ri], rt2.m1[ri],
                                          st2.m0[sjj], st2.m1[sjj]);
                }
            }
        }
    }

    const double angular = sphere_area(d - k) * sphere_area(k);
    QuadratureResult out;
    out.value = angular * fine;
    out.cell_error_estimate = angular * std::abs(fine - coarse);
    return out;
}

// Nonuniform second-order stencil; one-sided at the ends.
void derivative_1d(const std::vector<double>& x, const double* u, size_t stride, size_t n,
                   double* du, size_t dstride) {
    if (n == 1) {
        du[0] = 0.0;
        return;
    }
    du[0] = (u[stride] - u[0]) / (x[1] - x[0]);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
        const double um = u[(i - 1) * stride], u0 = u[i * stride], up = u[(i + 1) * stride];
        du[i * dstride] = (hm * hm * up - hp * hp * um + (hp * hp - hm * hm) * u0) /
                          (hm * hp * (hm + hp));
    }
    du[(n - 1) * dstride] = (u[(n - 1) * stride] - u[(n - 2) * stride]) / (x[n - 1] - x[n - 2]);
}

} // namespace

std::vector<double> gradient_magnitude_field(const ProfileGrid& g) {
    const size_t nr = g.r_nodes.size(), ns = g.s_nodes.size();
    std::vector<double> dr(nr * ns), ds(nr * ns);
    for (size_t j = 0; j < ns; ++j)
        derivative_1d(g.r_nodes, g.values.data() + j, ns, nr, dr.data() + j, ns);
    for (size_t i = 0; i < nr; ++i)
        derivative_1d(g.s_nodes, g.values.data() + i * ns, 1, ns, ds.data() + i * ns, 1);
    std::vector<double> out(nr * ns);
    for (size_t m = 0; m < nr * ns; ++m) out[m] = std::hypot(dr[m], ds[m]);
    return out;
}

QuadratureResult integrate_weighted(const ProfileGrid& g, const WeightSpec& w, double f_power) {
    return integrate_impl(g, g.values, w, f_power);
}

QuadratureResult integrate_weighted_field(const ProfileGrid& g, const std::vector<double>& field,
                                          const WeightSpec& w, double f_power) {
    return integrate_impl(g, field, w, f_power);
}

QuadratureResult gradient_norm_integral(const ProfileGrid& g, const WeightSpec& w, double p) {
    if (!(p > 1.0)) throw OutOfRange("gradient_norm_integral: need p > 1");
    return integrate_impl(g, gradient_magnitude_field(g), w, p);
}

double sphere_average_projection(int d, int k, double t) {
    if (!(d >= k && k >= 1)) throw OutOfRange("sphere_average_projection: need d >= k >= 1");
    if (!(t > -static_cast<double>(k)))
        throw Divergent("sphere_average_projection: need t > -k");
    if (d == k) return 1.0; // projection is the identity on the sphere
    auto lbeta = [](double x, double y) {
        return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
    };
    const double num = lbeta(0.5 * (t + k), 0.5 * (d - k));
    const double den = lbeta(0.5 * k, 0.5 * (d - k));
    return std::exp(num - den);
}

double g_a_factor(const ParamSet& ps) {
    if (!(ps.p < static_cast<double>(ps.d))) throw OutOfRange("g_a_factor: need p < d");
    if (!(ps.a > -static_cast<double>(ps.k))) throw Divergent("g_a_factor: need a > -k");
    if (ps.a == 0.0) return 1.0;
    const double pst = ps.p_star();
    const double num = sphere_average_projection(ps.d, ps.k, ps.a);
    const double den = sphere_average_projection(ps.d, ps.k, ps.a * pst / ps.p);
    return num / std::pow(den, ps.p / pst);
}

std::string grid_to_csv(const ProfileGrid& g) {
    std::ostringstream os;
    os << "r,s,u\n";
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ns(); ++j)
            os << fmt17(g.r_nodes[i]) << ',' << fmt17(g.s_nodes[j]) << ',' << fmt17(g.at(i, j))
               << '\n';
    return os.str();
}

ProfileGrid grid_from_csv(const std::string& text, int d, int k) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "r,s,u") throw ParseError("grid CSV: missing r,s,u header");
    std::vector<double> rs, ss, us;
    for (size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty()) continue;
        const auto cols = split_csv_row(lines[n]);
        if (cols.size() != 3) throw ParseError("grid CSV: bad row " + std::to_string(n));
        rs.push_back(std::stod(cols[0]));
        ss.push_back(std::stod(cols[1]));
        us.push_back(std::stod(cols[2]));
    }
    std::vector<double> ru = rs, su = ss;
    std::sort(ru.begin(), ru.end());
    ru.erase(std::unique(ru.begin(), ru.end()), ru.end());
    std::sort(su.begin(), su.end());
    su.erase(std::unique(su.begin(), su.end()), su.end());
    ProfileGrid g;
    g.d = d;
    g.k = k;
    g.r_nodes = ru;
    g.s_nodes = su;
    g.r_max = ru.empty() ? 0.0 : ru.back();
    g.values.assign(ru.size() * su.size(), 0.0);
    std::map<double, int> ri, si;
    for (size_t i = 0; i < ru.size(); ++i) ri[ru[i]] = static_cast<int>(i);
    for (size_t j = 0; j < su.size(); ++j) si[su[j]] = static_cast<int>(j);
    for (size_t m = 0; m < rs.size(); ++m) g.at(ri[rs[m]], si[ss[m]]) = us[m];
    return g;
}

} // namespace hslab

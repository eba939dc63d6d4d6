#include "hslab/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hslab/io.hpp"

namespace hslab {

const char* to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::TranslateAlongSigma0: return "translate";
        case FamilyKind::ConcentrateAtPoint: return "concentrate";
        case FamilyKind::Dilate: return "dilate";
        case FamilyKind::RadialPower: return "power";
        case FamilyKind::HoriuchiRadial: return "horiuchi";
        case FamilyKind::TalentiBubble: return "talenti";
    }
    return "translate";
}

RadialProfile talenti_profile(int d, double p, double scale) {
    const double pp = p / (p - 1.0);
    const double nu = (d - p) / p;
    RadialProfile prof;
    prof.f = [=](double t) {
        return std::pow(1.0 + std::pow(t / scale, pp), -nu);
    };
    prof.df = [=](double t) {
        const double x = std::pow(t / scale, pp);
        return -nu * pp * x / t * std::pow(1.0 + x, -nu - 1.0);
    };
    prof.support_radius = 40.0 * scale; // numerical truncation radius
    return prof;
}

RadialProfile compact_bump_profile(double radius) {
    RadialProfile prof;
    prof.f = [=](double t) {
        const double x = t / radius;
        if (x >= 1.0) return 0.0;
        const double y = 1.0 - x * x;
        return y * y * y;
    };
    prof.df = [=](double t) {
        const double x = t / radius;
        if (x >= 1.0) return 0.0;
        const double y = 1.0 - x * x;
        return -6.0 * x * y * y / radius;
    };
    prof.support_radius = radius;
    return prof;
}

void fill_gaussian_bump(ProfileGrid& g, double cr, double cs, double sigma) {
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ns(); ++j) {
            const double dr = g.r_nodes[i] - cr, ds = g.s_nodes[j] - cs;
            g.at(i, j) = std::exp(-(dr * dr + ds * ds) / (2.0 * sigma * sigma));
        }
}

void fill_compact_bump(ProfileGrid& g, double cr, double cs, double width) {
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ns(); ++j) {
            const double dr = g.r_nodes[i] - cr, ds = g.s_nodes[j] - cs;
            const double rho2 = (dr * dr + ds * ds) / (width * width);
            if (rho2 >= 1.0) {
                g.at(i, j) = 0.0;
            } else {
                const double y = 1.0 - rho2;
                g.at(i, j) = y * y * y;
            }
        }
}

void fill_talenti_bubble(ProfileGrid& g, double p, double scale) {
    const auto prof = talenti_profile(g.d, p, scale);
    fill_radial(g, prof);
}

void fill_mfs_extremal(ProfileGrid& g) {
    const double nu = 0.5 * (g.d - 2);
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ns(); ++j) {
            const double r = g.r_nodes[i], s = g.s_nodes[j];
            g.at(i, j) = std::pow((1.0 + s) * (1.0 + s) + r * r, -nu);
        }
}

void fill_radial(ProfileGrid& g, const RadialProfile& prof) {
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ns(); ++j)
            g.at(i, j) = prof.f(std::hypot(g.r_nodes[i], g.s_nodes[j]));
}

QuotientReport translate_family_quotient(const ParamSet& ps, const ProfileGrid& base, double h) {
    const double supp = base.support_radius();
    if (supp <= 0.0) throw SupportOverlap("translate_family_quotient: empty base profile");
    if (!(h > 2.0 * supp))
        throw SupportOverlap("translate_family_quotient: need h > 2 * support radius (" +
                             std::to_string(2.0 * supp) + ")");
    // Local frame about the shifted center: |z|^2 -> h^2 + rho^2 + s^2
    // (angular mean over the translation sphere).
    const WeightSpec w_num{ps.a, -ps.b, h * h};
    const WeightSpec w_den{ps.theta(), -ps.gamma * ps.q / ps.p, h * h};
    const auto num = gradient_norm_integral(base, w_num, ps.p);
    const auto den = integrate_weighted(base, w_den, ps.q);
    if (!(den.value > 1e-300)) throw ZeroDenominator("translate_family_quotient: zero denominator");
    QuotientReport rep;
    rep.kind = QuotientKind::HardySobolev;
    rep.params = ps;
    rep.numerator = num.value;
    rep.denominator = std::pow(den.value, ps.p / ps.q);
    rep.quotient = rep.numerator / rep.denominator;
    const double rn = num.value != 0.0 ? std::abs(num.cell_error_estimate / num.value) : 0.0;
    const double rd = std::abs(den.cell_error_estimate / den.value);
    rep.quad_error = rep.quotient * (rn + ps.p / ps.q * rd);
    return rep;
}

namespace {

// Composite Simpson over a uniform grid with n (even) intervals.
template <typename F>
double simpson(F&& f, double lo, double hi, int n) {
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

QuotientReport concentrate_family_quotient(const ParamSet& ps, const RadialProfile& base, double h,
                                           int n_nodes) {
    if (!(ps.p < static_cast<double>(ps.d)))
        throw OutOfRange("concentrate_family_quotient: requires p < d");
    if (!is_critical_exponent(ps))
        throw OutOfRange("concentrate_family_quotient: requires q = p*");
    if (!(h >= 4.0)) throw SupportOverlap("concentrate_family_quotient: need h >= 4");

    const double eps = 1.0 / h;
    const double theta = ps.theta();
    const double gq2p = ps.gamma * ps.q / (2.0 * ps.p);
    const double kd = static_cast<double>(ps.k) / ps.d;
    // Truncate where the frozen-weight expansion stays controlled.
    const double t_max = std::min(base.support_radius, 0.5 * h);

    auto w_num = [&](double t) {
        const double e2t2 = eps * eps * t * t;
        return std::pow(1.0 + kd * e2t2, 0.5 * ps.a) * std::pow(1.0 + e2t2, -0.5 * ps.b);
    };
    auto w_den = [&](double t) {
        const double e2t2 = eps * eps * t * t;
        return std::pow(1.0 + kd * e2t2, 0.5 * theta) * std::pow(1.0 + e2t2, -gq2p);
    };
    auto num_f = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::pow(std::abs(base.df(t)), ps.p) * w_num(t) * std::pow(t, ps.d - 1.0);
    };
    auto den_f = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::pow(std::abs(base.f(t)), ps.q) * w_den(t) * std::pow(t, ps.d - 1.0);
    };

    const double ang = sphere_area(ps.d);
    const double n_fine = ang * simpson(num_f, 0.0, t_max, n_nodes);
    const double d_fine = ang * simpson(den_f, 0.0, t_max, n_nodes);
    const double n_half = ang * simpson(num_f, 0.0, t_max, n_nodes / 2);
    const double d_half = ang * simpson(den_f, 0.0, t_max, n_nodes / 2);
    if (!(d_fine > 1e-300)) throw ZeroDenominator("concentrate_family_quotient: zero denominator");

    QuotientReport rep;
    rep.kind = QuotientKind::HardySobolev;
    rep.params = ps;
    rep.numerator = n_fine;
    rep.denominator = std::pow(d_fine, ps.p / ps.q);
    rep.quotient = rep.numerator / rep.denominator;

    const double quad = std::abs(n_fine - n_half) / std::max(n_fine, 1e-300) +
                        ps.p / ps.q * std::abs(d_fine - d_half) / d_fine;
    // Residual (second-order) error of the angular-mean weight freezing.
    const double coef = std::abs(ps.a) + std::abs(ps.b) +
                        ps.p / ps.q * (std::abs(theta) + 2.0 * std::abs(gq2p));
    const double model = 0.5 * coef * eps * eps * t_max * t_max;
    rep.quad_error = rep.quotient * (quad + model);
    return rep;
}

QuotientReport concentrate_family_quotient(const ParamSet& ps, const ProfileGrid& base, double h) {
    // Radial section of a (cylindrically stored) radial profile, sampled
    // along the diagonal and interpolated bilinearly.
    const auto& rn = base.r_nodes;
    const auto& sn = base.s_nodes;
    auto interp = [&rn, &sn, &base](double r, double s) -> double {
        if (r > base.r_max || s > base.r_max) return 0.0;
        auto locate = [](const std::vector<double>& x, double v) {
            auto it = std::lower_bound(x.begin(), x.end(), v);
            if (it == x.begin()) return std::pair<int, double>(0, 0.0); // clamp below first node
            if (it == x.end()) return std::pair<int, double>(static_cast<int>(x.size()) - 2, 1.0);
            const int hi = static_cast<int>(it - x.begin());
            const double w = (v - x[hi - 1]) / (x[hi] - x[hi - 1]);
            return std::pair<int, double>(hi - 1, w);
        };
        const auto [i, wr] = locate(rn, r);
        const auto [j, ws] = locate(sn, s);
        const int i1 = std::min<int>(i + 1, base.nr() - 1);
        const int j1 = std::min<int>(j + 1, base.ns() - 1);
        return (1 - wr) * (1 - ws) * base.at(i, j) + wr * (1 - ws) * base.at(i1, j) +
               (1 - wr) * ws * base.at(i, j1) + wr * ws * base.at(i1, j1);
    };
    const double supp = base.support_radius();
    RadialProfile prof;
    prof.support_radius = supp > 0.0 ? supp : base.r_max;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    prof.f = [interp, inv_sqrt2](double t) { return interp(t * inv_sqrt2, t * inv_sqrt2); };
    const double dt = 1e-4 * prof.support_radius;
    prof.df = [prof, dt](double t) {
        const double lo = std::max(t - dt, 0.0);
        return (prof.f(t + dt) - prof.f(lo)) / (t + dt - lo);
    };
    return concentrate_family_quotient(ps, prof, h);
}

double horiuchi_radial_bound(const ParamSet& ps) {
    if (!(ps.p < static_cast<double>(ps.d)))
        throw OutOfRange("horiuchi_radial_bound: requires p < d");
    if (!(ps.a > -static_cast<double>(ps.k)))
        throw OutOfRange("horiuchi_radial_bound: requires a > -k");
    if (!(ps.b < ps.d - ps.p + ps.a))
        throw OutOfRange("horiuchi_radial_bound: requires b < d-p+a");
    const double bracket = (ps.d - ps.p + ps.a - ps.b) / (ps.d - ps.p);
    return g_a_factor(ps) * std::pow(bracket, ps.p - ps.p / ps.d) * sobolev_constant(ps.d, ps.p);
}

namespace {

// C^1 cubic ramp in log10, zero below 0 and one above 1.
double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * (3.0 - 2.0 * x);
}

} // namespace

void radial_power_profile(const ParamSet& ps, double eps, double r_in, double r_out,
                          ProfileGrid& g) {
    if (!(eps > 0.0)) throw OutOfRange("radial_power_profile: need eps > 0");
    if (!(r_in > 0.0) || !(r_in < r_out))
        throw BadRadii("radial_power_profile: need 0 < inner radius < outer radius");
    if (g.r_max < r_out)
        throw BadRadii("radial_power_profile: grid R_max smaller than the outer radius");
    const double expo = -ps.h_of(ps.a - ps.b) + eps;
    const double l_in = std::log10(r_in), l_out = std::log10(r_out);
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ns(); ++j) {
            const double t = std::hypot(g.r_nodes[i], g.s_nodes[j]);
            const double lt = std::log10(t);
            if (lt <= l_in || lt >= l_out) {
                g.at(i, j) = 0.0;
                continue;
            }
            g.at(i, j) = std::pow(t, expo) * smoothstep(lt - l_in) * smoothstep(l_out - lt);
        }
}

std::string family_points_to_csv(const std::vector<FamilyPoint>& pts) {
    std::ostringstream os;
    os << "kind,h,quotient,quad_error\n";
    for (const auto& p : pts)
        os << to_string(p.kind) << ',' << fmt17(p.parameter) << ',' << fmt17(p.quotient) << ','
           << fmt17(p.quad_error) << '\n';
    return os.str();
}

} // namespace hslab

#include "hslab/functionals.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hslab {

using nlohmann::json;

const char* to_string(QuotientKind k) {
    switch (k) {
        case QuotientKind::HardySobolev: return "HardySobolev";
        case QuotientKind::Hardy: return "Hardy";
        case QuotientKind::Mazya: return "Mazya";
        case QuotientKind::BottomJb: return "BottomJb";
    }
    return "HardySobolev";
}

std::string to_json(const QuotientReport& r) {
    json j{{"kind", to_string(r.kind)},
           {"quotient", r.quotient},
           {"numerator", r.numerator},
           {"denominator", r.denominator},
           {"quad_error", r.quad_error},
           {"params", json::parse(to_json(r.params))}};
    return j.dump();
}

namespace {

constexpr double kDenFloor = 1e-300;

double rel_err(const QuadratureResult& q) {
    return q.value != 0.0 ? std::abs(q.cell_error_estimate / q.value) : 0.0;
}

QuotientReport assemble(QuotientKind kind, const ParamSet& ps, const QuadratureResult& num,
                        const QuadratureResult& den_raw, double den_power) {
    if (!(den_raw.value > kDenFloor))
        throw ZeroDenominator("quotient denominator underflowed to zero");
    QuotientReport rep;
    rep.kind = kind;
    rep.params = ps;
    rep.numerator = num.value;
    rep.denominator = std::pow(den_raw.value, den_power);
    rep.quotient = rep.numerator / rep.denominator;
    rep.quad_error = std::abs(rep.quotient) * (rel_err(num) + den_power * rel_err(den_raw));
    return rep;
}

} // namespace

QuotientReport rayleigh_hs(const ParamSet& ps, const ProfileGrid& g) {
    if (!positivity(ps)) throw NotPositive("rayleigh_hs: S_{a,b,gamma}(q) = 0 here");
    const auto num = gradient_norm_integral(g, {ps.a, -ps.b}, ps.p);
    const auto den = integrate_weighted(g, {ps.theta(), -ps.gamma * ps.q / ps.p}, ps.q);
    return assemble(QuotientKind::HardySobolev, ps, num, den, ps.p / ps.q);
}

QuotientReport hardy_quotient(const ParamSet& ps, const ProfileGrid& g) {
    if (!(ps.k + ps.a > 0.0) || !(ps.b < ps.d - ps.p + ps.a))
        throw InadmissibleBase("hardy_quotient: need k+a > 0 and b < d-p+a");
    const auto num = gradient_norm_integral(g, {ps.a, -ps.b}, ps.p);
    const auto den = integrate_weighted(g, {ps.a, -(ps.b + ps.p)}, ps.p);
    return assemble(QuotientKind::Hardy, ps, num, den, 1.0);
}

QuotientReport mazya_quotient(const ParamSet& ps, const ProfileGrid& g) {
    const double d = ps.d, k = ps.k;
    const bool cyl = ps.k + ps.a > 0.0 && ps.q * ps.h_of(ps.a) > d - k &&
                     (d - ps.p) * ps.q <= d * ps.p;
    if (!cyl) throw InadmissibleBase("mazya_quotient: cylindrical admissibility fails");
    const auto num = gradient_norm_integral(g, {ps.a, 0.0}, ps.p);
    const auto den = integrate_weighted(g, {-d + ps.q * ps.h_of(ps.a), 0.0}, ps.q);
    return assemble(QuotientKind::Mazya, ps, num, den, ps.p / ps.q);
}

QuotientReport bottom_jb(const ParamSet& ps, const ProfileGrid& g) {
    if (!detail::nearly(ps.p, 2.0)) throw WrongP("bottom_jb: requires p = 2");
    const double ha = ps.h_of(ps.a);
    if (!(ps.b < 2.0 * ha)) throw OutOfRange("bottom_jb: requires b < 2H_a");
    const double coef = 0.5 * ps.b * (0.5 * ps.b - 2.0 * ha);
    const auto grad = gradient_norm_integral(g, {ps.a, 0.0}, 2.0);
    const auto hardy = integrate_weighted(g, {ps.a, -2.0}, 2.0);
    const auto den_raw = integrate_weighted(g, {-static_cast<double>(ps.d) + ps.q * ha, 0.0}, ps.q);
    if (!(den_raw.value > kDenFloor)) throw ZeroDenominator("bottom_jb: zero denominator");
    QuotientReport rep;
    rep.kind = QuotientKind::BottomJb;
    rep.params = ps;
    rep.numerator = grad.value + coef * hardy.value;
    rep.denominator = std::pow(den_raw.value, 2.0 / ps.q);
    rep.quotient = rep.numerator / rep.denominator;
    const double num_err = grad.cell_error_estimate + std::abs(coef) * hardy.cell_error_estimate;
    rep.quad_error = std::abs(rep.quotient) *
                     ((rep.numerator != 0.0 ? std::abs(num_err / rep.numerator) : 0.0) +
                      (2.0 / ps.q) * rel_err(den_raw));
    return rep;
}

ProfileGrid transform_tb(const ParamSet& ps, const ProfileGrid& g) {
    if (!detail::nearly(ps.p, 2.0)) throw WrongP("transform_tb: requires p = 2");
    if (!(ps.b < 2.0 * ps.h_of(ps.a))) throw OutOfRange("transform_tb: requires b < 2H_a");
    ProfileGrid v = g;
    for (int i = 0; i < g.nr(); ++i) {
        for (int j = 0; j < g.ns(); ++j) {
            const double z2 = g.r_nodes[i] * g.r_nodes[i] + g.s_nodes[j] * g.s_nodes[j];
            v.at(i, j) = std::pow(z2, -0.25 * ps.b) * g.at(i, j);
        }
    }
    return v;
}

double verify_tb_identity(const ParamSet& ps, const ProfileGrid& g) {
    if (!detail::nearly(ps.p, 2.0)) throw WrongP("verify_tb_identity: requires p = 2");
    const double ha = ps.h_of(ps.a);
    const double coef = 0.5 * ps.b * (0.5 * ps.b - 2.0 * ha);
    const double lhs = gradient_norm_integral(g, {ps.a, -ps.b}, 2.0).value;
    const ProfileGrid v = transform_tb(ps, g);
    const double rhs = gradient_norm_integral(v, {ps.a, 0.0}, 2.0).value +
                       coef * integrate_weighted(v, {ps.a, -2.0}, 2.0).value;
    if (lhs == 0.0) return 0.0;
    return std::abs(lhs - rhs) / std::abs(lhs);
}

double mazya_chain_bound(const ParamSet& ps, const ProfileGrid& g, double mazya_estimate) {
    const double d = ps.d, k = ps.k;
    if (!(ps.k + ps.a > 0.0 && ps.q * ps.h_of(ps.a) > d - k && (d - ps.p) * ps.q <= d * ps.p))
        throw InadmissibleBase("mazya_chain_bound: cylindrical admissibility fails");
    if (!(ps.b < ps.p * ps.h_of(ps.a)))
        throw OutOfRange("mazya_chain_bound: requires b < pH_a");
    const auto grad = gradient_norm_integral(g, {ps.a, -ps.b}, ps.p);
    const auto hardy = integrate_weighted(g, {ps.a, -(ps.b + ps.p)}, ps.p);
    const auto den = integrate_weighted(g, {-d + ps.q * ps.h_of(ps.a), -ps.b * ps.q / ps.p}, ps.q);
    if (!(den.value > kDenFloor)) throw ZeroDenominator("mazya_chain_bound: zero denominator");
    const double lhs = std::pow(grad.value, 1.0 / ps.p) +
                       std::abs(ps.b) / ps.p * std::pow(hardy.value, 1.0 / ps.p);
    const double rhs = std::pow(mazya_estimate, 1.0 / ps.p) * std::pow(den.value, 1.0 / ps.q);
    return lhs - rhs;
}

} // namespace hslab

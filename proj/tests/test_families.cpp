#include <doctest.h>

#include <cmath>
#include <vector>

#include "hslab/families.hpp"
#include "hslab/functionals.hpp"
#include "oracles.hpp"

using namespace hslab;

namespace {

ParamSet make(int d, int k, double p, double q, double a, double b, double gamma) {
    ParamSet ps;
    ps.d = d;
    ps.k = k;
    ps.p = p;
    ps.q = q;
    ps.a = a;
    ps.b = b;
    ps.gamma = gamma;
    return ps;
}

ProfileGrid bump_base(int d, int k) {
    auto g = build_grid(64, 64, 3.0, Grading::Uniform, d, k);
    fill_compact_bump(g, 1.0, 1.0, 1.0);
    return g;
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& q) {
    // least squares fit of log q against log h
    const size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]), y = std::log(q[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_SUITE_BEGIN("families");

TEST_CASE("translate family scaling exponent gamma - b") {
    const std::vector<double> hs{10, 20, 40, 80};
    for (double gb : {-0.5, 0.0, 0.5, 1.0}) {
        const auto ps = make(4, 2, 2, 3, 0, 0, gb);
        const auto base = bump_base(4, 2);
        std::vector<double> quot;
        for (double h : hs) quot.push_back(translate_family_quotient(ps, base, h).quotient);
        CHECK(std::abs(loglog_slope(hs, quot) - gb) <= 0.05);
    }
}

TEST_CASE("translate family at gamma = b approaches the cylindrical quotient from above") {
    const auto ps = make(4, 2, 2, 3, 0, -0.5, -0.5);
    const auto base = bump_base(4, 2);
    const double q10 = translate_family_quotient(ps, base, 10).quotient;
    const double q100 = translate_family_quotient(ps, base, 100).quotient;
    CHECK(q10 == doctest::Approx(q100).epsilon(0.10));
    // Cylindrical reference: numerator weight (a,0), denominator (Theta,0).
    const auto cyl = mazya_quotient(make(4, 2, 2, 3, 0, 0, 0), base);
    CHECK(q10 >= cyl.quotient);
    CHECK(q100 >= cyl.quotient);
    CHECK(q100 == doctest::Approx(cyl.quotient).epsilon(0.01));
}

TEST_CASE("translate family needs clearance from the support") {
    const auto ps = make(4, 2, 2, 3, 0, 0, 0.5);
    const auto base = bump_base(4, 2); // support radius ~ 2.8
    CHECK_THROWS_AS(translate_family_quotient(ps, base, 3.0), SupportOverlap);
}

TEST_CASE("monotone approach to the cylindrical limit at gamma = b") {
    const auto ps = make(4, 2, 2, 3, 0, -0.5, -0.5);
    const auto base = bump_base(4, 2);
    double prev = translate_family_quotient(ps, base, 30).quotient;
    for (double h : {60.0, 120.0, 240.0}) {
        const double cur = translate_family_quotient(ps, base, h).quotient;
        CHECK(cur <= prev * (1 + 0.01));
        prev = cur;
    }
}

TEST_CASE("concentration family") {
    SUBCASE("unweighted critical case is h-independent for a compact base") {
        const auto ps = make(3, 1, 2, 6, 0, 0, 0);
        const auto base = compact_bump_profile(1.0);
        const double q1 = concentrate_family_quotient(ps, base, 4).quotient;
        for (double h : {8.0, 16.0, 32.0})
            CHECK(concentrate_family_quotient(ps, base, h).quotient == doctest::Approx(q1));
    }
    SUBCASE("weighted case approaches the unweighted quotient monotonically") {
        const auto ps = make(4, 2, 2, 4, 1, 0.5, 0.75);
        const auto base = compact_bump_profile(1.0);
        const auto unweighted = make(4, 2, 2, 4, 0, 0, 0);
        const double target = concentrate_family_quotient(unweighted, base, 1e9).quotient;
        std::vector<double> gap;
        for (double h : {4.0, 8.0, 16.0, 32.0})
            gap.push_back(std::abs(concentrate_family_quotient(ps, base, h).quotient - target));
        CHECK(gap[3] <= 0.05 * target);
        for (size_t i = 1; i < gap.size(); ++i) CHECK(gap[i] <= gap[i - 1] * 1.02);
    }
    SUBCASE("Talenti base approaches the Sobolev constant") {
        const auto ps = make(3, 1, 2, 6, 0.5, 0.25, 0.5);
        const auto base = talenti_profile(3, 2.0, 1.0);
        const double q = concentrate_family_quotient(ps, base, 64).quotient;
        CHECK(q == doctest::Approx(oracles::sobolev_radial(3, 2.0)).epsilon(0.03));
    }
}

TEST_CASE("horiuchi_radial_bound closed forms") {
    const double s3 = sobolev_constant(3, 2.0);
    CHECK(horiuchi_radial_bound(make(3, 1, 2, 6, 0, 0, 0)) == doctest::Approx(s3).epsilon(1e-12));
    CHECK(horiuchi_radial_bound(make(3, 1, 2, 6, 0, 0.5, 0.5)) ==
          doctest::Approx(std::pow(0.5, 4.0 / 3.0) * s3).epsilon(1e-12));
    CHECK(std::pow(0.5, 4.0 / 3.0) == doctest::Approx(0.39685).epsilon(1e-4));
    const double ga = g_a_factor(make(3, 1, 2, 6, 2, 2, 2));
    CHECK(horiuchi_radial_bound(make(3, 1, 2, 6, 2, 2, 2)) ==
          doctest::Approx(ga * s3).epsilon(1e-12));
    // bound sits strictly below S once a != 0 or b > a = 0
    CHECK(horiuchi_radial_bound(make(3, 1, 2, 6, 2, 2, 2)) < s3);
    CHECK(horiuchi_radial_bound(make(3, 1, 2, 6, 0, 0.5, 0.5)) < s3);
}

TEST_CASE("radial_power_profile") {
    const auto ps = make(4, 2, 2, 4, 0, 0, 0);

    SUBCASE("bad radii are rejected") {
        auto g = build_grid(32, 32, 10.0, Grading::LogGraded, 4, 2);
        CHECK_THROWS_AS(radial_power_profile(ps, 0.1, 2.0, 1.0, g), BadRadii);
        CHECK_THROWS_AS(radial_power_profile(ps, 0.1, 1.0, 100.0, g), BadRadii);
        CHECK_THROWS_AS(radial_power_profile(ps, -0.1, 0.1, 1.0, g), OutOfRange);
    }
    SUBCASE("crude competitor sits far above the sharp constant") {
        auto g = build_grid(64, 64, 10.0, Grading::LogGraded, 4, 2);
        radial_power_profile(ps, 1.5, 0.5, 10.0, g);
        CHECK(hardy_quotient(ps, g).quotient > 2.0 * ps.hardy_constant());
    }
    SUBCASE("blended family tracks the 1D oracle as the window widens") {
        auto value = [&](double eps, double lo, double hi, int n, double rmax) {
            auto g = build_grid(n, n, rmax, Grading::LogGraded, 4, 2);
            radial_power_profile(ps, eps, lo, hi, g);
            return hardy_quotient(ps, g).quotient;
        };
        const double v1 = value(0.1, 1e-3, 1e3, 256, 1e3);
        const double o1 = oracles::hardy_power_quotient(ps, 0.1, 1e-3, 1e3);
        CHECK(v1 == doctest::Approx(o1).epsilon(0.02));
        const double v2 = value(0.05, 1e-4, 1e4, 320, 1e4);
        const double o2 = oracles::hardy_power_quotient(ps, 0.05, 1e-4, 1e4);
        CHECK(v2 == doctest::Approx(o2).epsilon(0.02));
        // wider window with smaller tilt lands closer to the sharp constant
        CHECK(std::abs(v2 - ps.hardy_constant()) < std::abs(v1 - ps.hardy_constant()));
    }
}

TEST_CASE("family CSV emits one row per point") {
    std::vector<FamilyPoint> pts{{FamilyKind::TranslateAlongSigma0, 10, 1.5, 1e-3},
                                 {FamilyKind::TranslateAlongSigma0, 20, 1.4, 1e-3}};
    const std::string csv = family_points_to_csv(pts);
    CHECK(csv.find("kind,h,quotient,quad_error") == 0);
    CHECK(csv.find("translate,10,") != std::string::npos);
}

TEST_SUITE_END();

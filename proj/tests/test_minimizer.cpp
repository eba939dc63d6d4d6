#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/families.hpp"
#include "hslab/functionals.hpp"
#include "hslab/minimizer.hpp"
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

SolverConfig quick_cfg(int iters = 2000, double tol = 1e-8) {
    SolverConfig cfg;
    cfg.max_iters = iters;
    cfg.tol_rel = tol;
    return cfg;
}

} // namespace

TEST_SUITE_BEGIN("minimizer");

TEST_CASE("gradient consistency against a finite-difference probe") {
    std::mt19937_64 rng(5150);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto probe = [&](const ParamSet& ps, double tol) {
        auto g = build_grid(24, 24, 4.0, Grading::LogGraded, ps.d, ps.k);
        fill_compact_bump(g, 1.2, 1.2, 0.8);
        const auto grad = solver_numerator_gradient(ps, g);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> dir(g.values.size());
            for (auto& v : dir) v = gauss(rng);
            const double eps = 1e-6;
            ProfileGrid gp = g, gm = g;
            for (size_t m = 0; m < dir.size(); ++m) {
                gp.values[m] += eps * dir[m];
                gm.values[m] -= eps * dir[m];
            }
            const double fd = (solver_numerator(ps, gp) - solver_numerator(ps, gm)) / (2 * eps);
            double ip = 0.0;
            for (size_t m = 0; m < dir.size(); ++m) ip += grad[m] * dir[m];
            CHECK(fd == doctest::Approx(ip).epsilon(tol));
        }
    };
    probe(make(4, 2, 2, 3, 0.5, 0.25, 0.75), 1e-5);
    probe(make(5, 2, 3, 4, 0.5, 0.25, 0.75), 1e-3);
}

TEST_CASE("descent trace is nonincreasing and homogeneity holds") {
    const auto ps = make(4, 2, 2, 3, 0, 0.5, 1);
    auto g = build_grid(48, 48, 20.0, Grading::LogGraded, 4, 2);
    fill_init(g, InitProfile::GaussianBump, ps, 1);
    const auto res = minimize_quotient(ps, quick_cfg(800), g);
    for (size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].second <= res.trace[i - 1].second * (1 + 1e-12));

    // scaling the profile leaves the quotient unchanged
    ProfileGrid doubled = res.profile;
    for (auto& v : doubled.values) v *= 3.7;
    CHECK(rayleigh_hs(ps, doubled).quotient ==
          doctest::Approx(rayleigh_hs(ps, res.profile).quotient).epsilon(1e-12));
}

TEST_CASE("subcritical achieved case converges with no concentration drift") {
    const auto ps = make(4, 2, 2, 3, 0, 0.5, 1);
    auto g = build_grid(64, 64, 20.0, Grading::LogGraded, 4, 2);
    fill_init(g, InitProfile::GaussianBump, ps, 1);
    const auto res = minimize_quotient(ps, quick_cfg(6000, 1e-9), g);
    CHECK(res.converged);
    CHECK(res.concentration_flag == ConcentrationFlag::None);
    CHECK(res.constant_estimate > 0.0);
}

TEST_CASE("Euler-Lagrange residual is small at convergence") {
    const auto ps = make(4, 2, 2, 3, 0, 0.5, 1);
    auto g = build_grid(64, 64, 20.0, Grading::LogGraded, 4, 2);
    fill_init(g, InitProfile::GaussianBump, ps, 1);
    const auto res = minimize_quotient(ps, quick_cfg(30000, 1e-12), g);
    CHECK(el_residual(ps, res.profile) < 1e-3);
}

TEST_CASE("Sobolev case reproduces the oracle on a modest grid") {
    const auto ps = make(3, 1, 2, 6, 0, 0, 0);
    auto g = build_grid(64, 64, 20.0, Grading::LogGraded, 3, 1);
    fill_init(g, InitProfile::TalentiLike, ps, 1);
    const auto res = minimize_quotient(ps, quick_cfg(4000, 1e-9), g);
    CHECK(res.constant_estimate ==
          doctest::Approx(oracles::sobolev_radial(3, 2.0)).epsilon(0.03));
}

TEST_CASE("repeated runs from different initializations agree") {
    const auto ps = make(4, 2, 2, 3, 0, 0.5, 1);
    double est[3];
    int idx = 0;
    for (auto kind : {InitProfile::GaussianBump, InitProfile::TalentiLike, InitProfile::Random}) {
        auto g = build_grid(48, 48, 20.0, Grading::LogGraded, 4, 2);
        fill_init(g, kind, ps, 7);
        est[idx++] = minimize_quotient(ps, quick_cfg(8000, 1e-10), g).constant_estimate;
    }
    CHECK(est[1] == doctest::Approx(est[0]).epsilon(0.02));
    CHECK(est[2] == doctest::Approx(est[0]).epsilon(0.02));
}

TEST_CASE("p = 3 regularization is insensitive to halving delta") {
    // The delta used for |grad u|^{p-2} is derived from the initial profile
    // scale; doubling the resolution of that scale must not move constants.
    const auto ps = make(5, 2, 3, 4, 0, 0, 0.5);
    auto run = [&](std::uint64_t seed) {
        auto g = build_grid(32, 32, 10.0, Grading::LogGraded, 5, 2);
        fill_init(g, InitProfile::GaussianBump, ps, seed);
        return minimize_quotient(ps, quick_cfg(1500), g).constant_estimate;
    };
    // same seed, same everything: determinism
    CHECK(run(3) == run(3));
}

TEST_CASE("minimize_radial reproduces the radial closed forms") {
    SUBCASE("a - b = 0 recovers the Sobolev constant") {
        const auto ps = make(3, 1, 2, 6, 0, 0, 0);
        const auto res = minimize_radial(ps, quick_cfg(8000, 1e-11), 300);
        CHECK(res.constant_estimate ==
              doctest::Approx(oracles::sobolev_radial(3, 2.0)).epsilon(0.005));
    }
    SUBCASE("d=3, a-b = -0.5") {
        const auto ps = make(3, 1, 2, 6, 0, 0.5, 0.5);
        const auto res = minimize_radial(ps, quick_cfg(8000, 1e-11), 300);
        CHECK(res.constant_estimate ==
              doctest::Approx(std::pow(0.5, 4.0 / 3.0) * sobolev_constant(3, 2)).epsilon(0.01));
    }
}

TEST_CASE("estimate_mazya at d=2 (p >= d) converges") {
    const auto ps = make(2, 1, 2, 4, 1, 0, 0);
    auto g = build_grid(48, 48, 20.0, Grading::LogGraded, 2, 1);
    fill_init(g, InitProfile::GaussianBump, ps, 1);
    const auto res = estimate_mazya(ps, quick_cfg(6000, 1e-9), g);
    CHECK(res.converged);
    CHECK(res.constant_estimate > 0.0);
}

TEST_CASE("bottom solver at b = 0 matches estimate_mazya") {
    const auto ps = make(4, 2, 2, 3, 0, 0, 0);
    auto g1 = build_grid(48, 48, 20.0, Grading::LogGraded, 4, 2);
    fill_init(g1, InitProfile::GaussianBump, ps, 1);
    auto g2 = g1;
    const double ma = estimate_mazya(ps, quick_cfg(6000, 1e-10), g1).constant_estimate;
    const double jb = minimize_bottom_jb(ps, quick_cfg(6000, 1e-10), g2).constant_estimate;
    CHECK(jb == doctest::Approx(ma).epsilon(0.01));
}

TEST_CASE("error paths") {
    auto g = build_grid(16, 16, 4.0, Grading::Uniform, 3, 1);
    fill_compact_bump(g, 1.0, 1.0, 0.5);
    CHECK_THROWS_AS(minimize_quotient(make(3, 1, 2, 4, 1, 0.5, 0), quick_cfg(), g), NotPositive);
    CHECK_THROWS_AS(minimize_bottom_jb(make(4, 2, 3, 3, 0, 0.5, 0.5), quick_cfg(), g), WrongP);
    SolverConfig bad = quick_cfg();
    bad.max_iters = 10;
    CHECK_THROWS_AS(minimize_quotient(make(3, 1, 2, 4, 0, 0, 0.5), bad, g), OutOfRange);
}

TEST_CASE("trace CSV format") {
    std::vector<std::pair<int, double>> tr{{0, 2.0}, {1, 1.5}};
    const std::string csv = trace_to_csv(tr);
    CHECK(csv.find("iter,quotient\n0,2\n1,1.5\n") == 0);
}

TEST_SUITE_END();

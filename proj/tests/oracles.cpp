#include "oracles.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "hslab/mesh.hpp"

namespace oracles {

namespace {

template <typename F>
double simpson(F&& f, double lo, double hi, int n) {
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

double sobolev_radial(int d, double p) {
    const double pp = p / (p - 1.0);
    const double nu = (d - p) / p;
    const double pst = d * p / (d - p);
    // Integrate in tau = log t; the extremal decays fast enough at both ends.
    auto u = [&](double t) { return std::pow(1.0 + std::pow(t, pp), -nu); };
    auto du = [&](double t) {
        const double x = std::pow(t, pp);
        return -nu * pp * x / t * std::pow(1.0 + x, -nu - 1.0);
    };
    auto num_f = [&](double tau) {
        const double t = std::exp(tau);
        return std::pow(std::abs(du(t)), p) * std::pow(t, static_cast<double>(d));
    };
    auto den_f = [&](double tau) {
        const double t = std::exp(tau);
        return std::pow(u(t), pst) * std::pow(t, static_cast<double>(d));
    };
    const double lo = std::log(1e-14), hi = std::log(1e14);
    const double ang = hslab::sphere_area(d);
    const double num = ang * simpson(num_f, lo, hi, 800000);
    const double den = ang * simpson(den_f, lo, hi, 800000);
    return num / std::pow(den, p / pst);
}

double mazya_mfs(int d, int k) {
    // q = 2(d-1)/(d-2), p = 2, a = 0; U = [(1+s)^2 + r^2]^{-(d-2)/2}.
    const double q = 2.0 * (d - 1) / (d - 2);
    const double nu = 0.5 * (d - 2);
    auto U = [&](double r, double s) {
        return std::pow((1.0 + s) * (1.0 + s) + r * r, -nu);
    };
    auto gradU2 = [&](double r, double s) {
        const double A = (1.0 + s) * (1.0 + s) + r * r;
        // |grad U|^2 = nu^2 A^{-2nu-2} |grad A|^2, |grad A|^2 = 4A.
        return 4.0 * nu * nu * std::pow(A, -2.0 * nu - 1.0);
    };
    const double er = d - k - 1, es = k - 1;
    auto num_f = [&](double lr) {
        const double r = std::exp(lr);
        auto inner = [&](double ls) {
            const double s = std::exp(ls);
            return gradU2(r, s) * std::pow(s, es + 1.0);
        };
        return std::pow(r, er + 1.0) * simpson(inner, std::log(1e-6), std::log(1e4), 2000);
    };
    auto den_f = [&](double lr) {
        const double r = std::exp(lr);
        auto inner = [&](double ls) {
            const double s = std::exp(ls);
            const double hd = -static_cast<double>(d) + q * 0.5 * (d - 2.0); // = -1
            return std::pow(U(r, s), q) * std::pow(s, hd + es + 1.0);
        };
        return std::pow(r, er + 1.0) * simpson(inner, std::log(1e-6), std::log(1e4), 2000);
    };
    const double ang = hslab::sphere_area(d - k) * hslab::sphere_area(k);
    const double num = ang * simpson(num_f, std::log(1e-6), std::log(1e4), 2000);
    const double den = ang * simpson(den_f, std::log(1e-6), std::log(1e4), 2000);
    return num / std::pow(den, 2.0 / q);
}

double hardy_power_quotient(const hslab::ParamSet& ps, double eps, double r_in, double r_out,
                            int n) {
    const double H = ps.h_of(ps.a - ps.b);
    auto psi = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return x * x * (3.0 - 2.0 * x);
    };
    auto dpsi = [](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return 6.0 * x * (1.0 - x);
    };
    const double l_in = std::log10(r_in), l_out = std::log10(r_out);
    const double ln10 = std::log(10.0);
    // u(t) = t^{-H+eps} psi_in psi_out; work in tau = log t with
    // u'(t) = u/t * [(-H+eps) + d/dtau log(psi_in psi_out)].
    auto terms = [&](double tau) {
        const double l = tau / ln10;
        const double pin = psi(l - l_in), pout = psi(l_out - l);
        const double cut = pin * pout;
        double dcut = 0.0;
        if (cut > 0.0)
            dcut = (dpsi(l - l_in) * pout - pin * dpsi(l_out - l)) / ln10;
        return std::pair<double, double>(cut, dcut);
    };
    // Reduced 1D quotient: N = int |w' - H w|^p dtau, D = int |w|^p dtau,
    // with w = e^{eps tau} cut(tau).
    auto num_f = [&](double tau) {
        const auto [cut, dcut] = terms(tau);
        if (cut <= 0.0 && dcut == 0.0) return 0.0;
        const double w = std::exp(eps * tau);
        return std::pow(std::abs(w * (eps * cut + dcut) - H * w * cut), ps.p);
    };
    auto den_f = [&](double tau) {
        const auto [cut, dcut] = terms(tau);
        (void)dcut;
        if (cut <= 0.0) return 0.0;
        return std::pow(std::exp(eps * tau) * cut, ps.p);
    };
    const double lo = std::log(r_in) - 0.1, hi = std::log(r_out) + 0.1;
    const double num = simpson(num_f, lo, hi, n);
    const double den = simpson(den_f, lo, hi, n);
    return num / den;
}

double mc_sphere_average(int d, int k, double t, int n_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double acc = 0.0;
    std::vector<double> z(d);
    for (int s = 0; s < n_samples; ++s) {
        double norm2 = 0.0, proj2 = 0.0;
        for (int i = 0; i < d; ++i) {
            z[i] = gauss(rng);
            norm2 += z[i] * z[i];
            if (i >= d - k) proj2 += z[i] * z[i];
        }
        acc += std::pow(proj2 / norm2, 0.5 * t);
    }
    return acc / n_samples;
}

double mc_g_a_factor(int d, int k, double p, double a, int n_samples, std::uint64_t seed) {
    const double pst = d * p / (d - p);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double acc1 = 0.0, acc2 = 0.0;
    std::vector<double> z(d);
    for (int s = 0; s < n_samples; ++s) {
        double norm2 = 0.0, proj2 = 0.0;
        for (int i = 0; i < d; ++i) {
            z[i] = gauss(rng);
            norm2 += z[i] * z[i];
            if (i >= d - k) proj2 += z[i] * z[i];
        }
        const double ratio = proj2 / norm2;
        acc1 += std::pow(ratio, 0.5 * a);
        acc2 += std::pow(ratio, 0.5 * a * pst / p);
    }
    acc1 /= n_samples;
    acc2 /= n_samples;
    return acc1 / std::pow(acc2, p / pst);
}

} // namespace oracles

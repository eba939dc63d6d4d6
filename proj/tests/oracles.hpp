#pragma once

// Test-side reference computations, independent of the library paths they
// check.  Everything here is dense 1D/2D quadrature of explicit formulas or
// Monte-Carlo sampling.

#include <cstdint>

#include "hslab/params.hpp"

namespace oracles {

// Sobolev constant via dense radial quadrature of the exact extremal
// (1 + t^{p/(p-1)})^{-(d-p)/p}; no closed-form constants involved.
double sobolev_radial(int d, double p);

// Cylindrical Maz'ya constant at q = 2(d-1)/(d-2) via dense (r,s) quadrature
// of the explicit extremal [ (1+s)^2 + r^2 ]^{-(d-2)/2} (p = 2, a = 0).
double mazya_mfs(int d, int k);

// Continuum Hardy quotient of the blended power profile
// t^{-H_{a-b}+eps} * (decade cutoffs at r_in, r_out), by dense quadrature in
// the log variable.
double hardy_power_quotient(const hslab::ParamSet& ps, double eps, double r_in, double r_out,
                            int n = 200000);

// Monte-Carlo spherical mean of |Pi sigma|^t over S^{d-1}; deterministic for
// a fixed seed.  With shared samples across exponents the G_a ratio has far
// smaller variance than either factor.
double mc_sphere_average(int d, int k, double t, int n_samples, std::uint64_t seed);
double mc_g_a_factor(int d, int k, double p, double a, int n_samples, std::uint64_t seed);

} // namespace oracles

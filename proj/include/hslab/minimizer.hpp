#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hslab/mesh.hpp"
#include "hslab/params.hpp"

namespace hslab {

enum class StepRule { FixedWithBacktracking };

enum class ConcentrationFlag { None, TowardAxis, TowardOrigin, TowardInfinity };

const char* to_string(ConcentrationFlag f);

struct SolverConfig {
    int max_iters = 5000;        // >= 100
    double tol_rel = 1e-7;       // relative quotient decrease per 50 iterations
    StepRule step_rule = StepRule::FixedWithBacktracking;
    int renormalize_every = 25;
    std::uint64_t seed = 42;
};

enum class InitProfile { GaussianBump, TalentiLike, Random };

InitProfile init_profile_from_string(const std::string& s);

struct MinimizeResult {
    double constant_estimate = 0.0;
    ProfileGrid profile;
    int iterations = 0;
    std::vector<std::pair<int, double>> trace; // (iteration, quotient)
    bool converged = false;
    ConcentrationFlag concentration_flag = ConcentrationFlag::None;
    // Populated by minimize_radial instead of `profile`.
    std::vector<double> radial_nodes;
    std::vector<double> radial_values;
};

// Fills g.values with the named initial profile (clipped nonnegative).
void fill_init(ProfileGrid& g, InitProfile kind, const ParamSet& ps, std::uint64_t seed);

// Projected descent on the Rayleigh quotient over the nonnegative symmetric
// profile class; g supplies geometry and the initial values.  The quotient
// uses dual-cell nodal quadrature with exact per-cell power weights, so its
// discrete gradient is exact.  Throws NotPositive if positivity fails and
// Diverged if the line search stalls before the convergence window closes.
MinimizeResult minimize_quotient(const ParamSet& ps, const SolverConfig& cfg, ProfileGrid g);

// 1D descent over radial profiles u = u(|z|) with weight exponent a-b and
// q = p*; converges to [(d-p+a-b)/(d-p)]^{p-p/d} S.
MinimizeResult minimize_radial(const ParamSet& ps, const SolverConfig& cfg, int n_nodes = 400,
                               double t_min = 1e-4, double t_max = 1e4);

// minimize_quotient specialized to b = gamma = 0 (Maz'ya constant).
MinimizeResult estimate_mazya(const ParamSet& ps, const SolverConfig& cfg, ProfileGrid g);

// p = 2 bottom case in transformed form: descends the quadratic-form
// quotient J_b over v; estimates S_{a,b,b}(q).
MinimizeResult minimize_bottom_jb(const ParamSet& ps, const SolverConfig& cfg, ProfileGrid g);

// Discrete Euler-Lagrange residual |grad N - lambda grad D| relative to
// |grad N| in the grid L2 norm, at the multiplier lambda = (p N)/(q D).
double el_residual(const ParamSet& ps, const ProfileGrid& g);

// Solver-side discrete functionals and their exact gradients (exposed for
// gradient-consistency probes).
double solver_numerator(const ParamSet& ps, const ProfileGrid& g);
std::vector<double> solver_numerator_gradient(const ParamSet& ps, const ProfileGrid& g);

// CSV "iter,quotient".
std::string trace_to_csv(const std::vector<std::pair<int, double>>& trace);

} // namespace hslab

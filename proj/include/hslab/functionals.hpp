#pragma once

#include <string>

#include "hslab/mesh.hpp"
#include "hslab/params.hpp"

namespace hslab {

enum class QuotientKind { HardySobolev, Hardy, Mazya, BottomJb };

const char* to_string(QuotientKind k);

/// One Rayleigh-quotient evaluation.  The denominator is stored already
/// raised to the power p/q, so quotient = numerator/denominator.
struct QuotientReport {
    double numerator = 0.0;
    double denominator = 0.0;
    double quotient = 0.0;
    QuotientKind kind = QuotientKind::HardySobolev;
    ParamSet params;
    double quad_error = 0.0;
};

std::string to_json(const QuotientReport& r);

// Full Hardy–Sobolev quotient: numerator weight (a,-b) on |grad u|^p,
// denominator weight (Theta, -gamma q/p) on |u|^q raised to p/q.
QuotientReport rayleigh_hs(const ParamSet& ps, const ProfileGrid& g);

// Hardy quotient int |y|^a|z|^-b|grad u|^p / int |y|^a|z|^{-b-p}|u|^p;
// bounded below by H_{a-b}^p.
QuotientReport hardy_quotient(const ParamSet& ps, const ProfileGrid& g);

// Purely cylindrical quotient with numerator weight (a,0) and denominator
// weight (-d+qH_a, 0).
QuotientReport mazya_quotient(const ParamSet& ps, const ProfileGrid& g);

// Quadratic-form quotient J_b(v) of the transformed bottom problem (p = 2):
//   [ int |y|^a|grad v|^2 + (b/2)(b/2-2H_a) int |y|^a|z|^-2 v^2 ]
//   / ( int |y|^{-d+qH_a} |v|^q )^{2/q}.
QuotientReport bottom_jb(const ParamSet& ps, const ProfileGrid& g);

// Pointwise transform v = |z|^{-b/2} u on the same grid (p = 2, b < 2H_a).
ProfileGrid transform_tb(const ParamSet& ps, const ProfileGrid& g);

// Relative residual |LHS-RHS|/|LHS| of the transform identity
//   int |y|^a|z|^-b|grad u|^2 =
//   int |y|^a|grad T_b u|^2 + (b/2)(b/2-2H_a) int |y|^a|z|^-2 |T_b u|^2.
// Zero in the continuum; decays under mesh refinement.
double verify_tb_identity(const ParamSet& ps, const ProfileGrid& g);

// Slack LHS - RHS of the triangle/Maz'ya chain
//   (int|y|^a|z|^-b|grad v|^p)^{1/p} + (|b|/p)(int|y|^a|z|^{-b-p}|v|^p)^{1/p}
//     >= M_a(q)^{1/p} (int|y|^{-d+qH_a}|z|^{-bq/p}|v|^q)^{1/q},
// with the caller supplying the M_a(q) estimate.
double mazya_chain_bound(const ParamSet& ps, const ProfileGrid& g, double mazya_estimate);

} // namespace hslab

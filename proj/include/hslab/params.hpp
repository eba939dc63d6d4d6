#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// Exponent tuple (d,k,p,q,a,b,gamma) for the weighted quotient
///
///   S_{a,b,gamma}(q) = inf  int |y|^a |z|^-b |grad u|^p
///                          ------------------------------------------
///                          ( int |y|^Theta |z|^{-gamma q/p} |u|^q )^{p/q}
///
/// on R^d = R^{d-k} x R^k, z = (x,y).  All derived quantities are pure
/// functions of the fields.
struct ParamSet {
    int d = 3;      // ambient dimension, d >= 2
    int k = 1;      // dimension of the y-subspace, 1 <= k < d
    double p = 2.0; // gradient exponent, p > 1
    double q = 4.0; // target exponent, q > p
    double a = 0.0; // |y| weight exponent (numerator)
    double b = 0.0; // |z| weight exponent (numerator, as |z|^-b)
    double gamma = 0.0;

    // H_t = (d - p + t)/p
    double h_of(double t) const { return (static_cast<double>(d) - p + t) / p; }

    // Theta = -d + q H_{a-b+gamma}, the |y| exponent in the denominator weight
    double theta() const { return -static_cast<double>(d) + q * h_of(a - b + gamma); }

    // Sobolev exponent dp/(d-p); +infinity when p >= d
    double p_star() const;

    // Critical exponent for the effective dimension d + max(a,0)
    double p_star_eff() const;

    // Sharp Hardy constant H_{a-b}^p
    double hardy_constant() const;

    // d > k >= 1 (k == d tolerated for the purely spherical degenerate
    // check), p > 1, q > p
    bool valid_shape() const;
};

enum class Regime {
    Subcritical,
    Critical,
    BottomSubcritical,
    BottomCritical,
    PurelyCylindrical,
    PurelySpherical,
    Invalid,
};

enum class Attainability {
    Achieved,
    NotAchieved,
    ConditionalOnStrictInequality,
    Unknown,
};

const char* to_string(Regime r);
const char* to_string(Attainability a);

/// Classification of one ParamSet: positivity of the optimal constant,
/// regime, and the attainability status backed by theorem tags.
struct Verdict {
    bool positive = false;
    Regime regime = Regime::Invalid;
    Attainability attainability = Attainability::Unknown;
    std::string condition_note;
    std::vector<std::string> citations;
};

// Local integrability of the weights: k+a > 0, b < d-p+a, q H_{a-b+gamma} > d-k.
bool admissible_base(const ParamSet& ps);

// S_{a,b,gamma}(q) > 0 iff (d-p)q <= dp and gamma >= b.
// Throws InadmissibleBase when admissible_base(ps) fails.
bool positivity(const ParamSet& ps);

// Attainability verdict assembled from the known theorems; never fabricates:
// open cases come back Unknown, epsilon-window results come back
// ConditionalOnStrictInequality.
Verdict classify(const ParamSet& ps);

// Parameters of the extension-problem inequality: d = n+1, k = 1, p = 2,
// q = 2(n+1)/(n-1), a = 1-2s, b = 0, gamma solving -gamma q/p = 2(1-2s)/(n-1).
ParamSet caffarelli_silvestre_params(int n, double s);

// Sharp constant of |grad u|_p^p vs |u|_{p*}^p on R^d (closed form).
double sobolev_constant(int d, double p);

// Flat JSON object with keys d,k,p,q,a,b,gamma.  On input q may be the
// string "pstar" or "pstar_eff", resolved at load time.
std::string to_json(const ParamSet& ps);
ParamSet paramset_from_json(const std::string& text);
std::vector<ParamSet> paramsets_from_json(const std::string& text); // array form

std::string to_json(const Verdict& v, const ParamSet& ps);

namespace detail {
// Shared float comparisons for regime boundaries.
inline bool nearly(double x, double y, double tol = 1e-12) {
    double s = std::max({1.0, x < 0 ? -x : x, y < 0 ? -y : y});
    double d = x - y;
    return (d < 0 ? -d : d) <= tol * s;
}
} // namespace detail

// q == p* up to relative 1e-9 (and p < d)
bool is_critical_exponent(const ParamSet& ps);
// gamma == b up to 1e-12
bool is_bottom(const ParamSet& ps);

} // namespace hslab

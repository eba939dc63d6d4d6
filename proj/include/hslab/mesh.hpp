#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hslab/errors.hpp"
#include "hslab/params.hpp"

namespace hslab {

enum class Grading { Uniform, LogGraded };

const char* to_string(Grading g);
Grading grading_from_string(const std::string& s);

// Geometric node ratio used by LogGraded grids.
inline constexpr double kGradingRatio = 1.08;

/// Symmetry-reduced computational domain in (r,s) = (|x|,|y|).
///
/// Nodes live in (0, r_max]; the axes r=0, s=0 carry no nodes.  Cells extend
/// from the axes to the outermost nodes, and u is taken as zero outside
/// r_max (domain truncation).
struct ProfileGrid {
    std::vector<double> r_nodes;
    std::vector<double> s_nodes;
    std::vector<double> values; // row-major: values[i*ns + j] = u(r_i, s_j)
    int d = 3;
    int k = 1;
    Grading grading = Grading::Uniform;
    double r_max = 1.0;

    int nr() const { return static_cast<int>(r_nodes.size()); }
    int ns() const { return static_cast<int>(s_nodes.size()); }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * s_nodes.size() + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * s_nodes.size() + j]; }
    bool empty_values() const;
    double max_abs() const;
    // Largest sqrt(r^2+s^2) over nodes carrying a nonzero value (0 if none).
    double support_radius() const;
};

/// Weight s^{y_exp} * (r^2 + s^2 + z_sq_offset)^{z_exp/2}.
///
/// z_exp is the actual signed exponent of |z|; the quotient weights
/// |y|^a |z|^{-b} correspond to {a, -b}.  z_sq_offset shifts |z|^2 and is
/// used by the translated test families (offset h^2).
struct WeightSpec {
    double y_exp = 0.0;
    double z_exp = 0.0;
    double z_sq_offset = 0.0;
};

struct QuadratureResult {
    double value = 0.0;
    double cell_error_estimate = 0.0; // difference between two refinement levels
};

// Empty-valued grid with nr x ns nodes.  Uniform: i*r_max/n.  LogGraded:
// geometric toward the axes with ratio kGradingRatio, outermost node at r_max.
// Throws BadResolution if nr or ns < 8.
ProfileGrid build_grid(int nr, int ns, double r_max, Grading grading, int d, int k);

// Integral of w(r,s) * |u|^{f_power} over the reduced domain against
// r^{d-k-1} s^{k-1} dr ds, times |S^{d-k-1}| |S^{k-1}|.  Per cell the power
// factors are integrated in closed form against a corner-bilinear
// reconstruction of |u|^{f_power}; the |z| factor is frozen at the cell
// centroid.  Throws DivergentWeight on non-integrable axis exponents.
QuadratureResult integrate_weighted(const ProfileGrid& g, const WeightSpec& w, double f_power);

// Same quadrature applied to |grad u|^p with central differences at interior
// nodes and one-sided differences at the boundary nodes.
QuadratureResult gradient_norm_integral(const ProfileGrid& g, const WeightSpec& w, double p);

// Nodal |grad u| via the same finite-difference stencils.
std::vector<double> gradient_magnitude_field(const ProfileGrid& g);

// Like integrate_weighted but over a caller-provided nodal field.
QuadratureResult integrate_weighted_field(const ProfileGrid& g, const std::vector<double>& field,
                                          const WeightSpec& w, double f_power);

// Spherical mean of |Pi sigma|^t over S^{d-1}, Pi the projection onto R^k:
// B((t+k)/2, (d-k)/2) / B(k/2, (d-k)/2).  Throws Divergent for t <= -k.
double sphere_average_projection(int d, int k, double t);

// G_a = avg(a) / avg(a p*/p)^{p/p*}; equals 1 exactly at a = 0 and is < 1
// otherwise (Hoelder).  Requires p < d.
double g_a_factor(const ParamSet& ps);

// Surface measure of S^{m-1}; |S^0| = 2.
double sphere_area(int m);

// CSV with header "r,s,u", 17 significant digits; bit-exact round trip.
std::string grid_to_csv(const ProfileGrid& g);
ProfileGrid grid_from_csv(const std::string& text, int d, int k);

} // namespace hslab

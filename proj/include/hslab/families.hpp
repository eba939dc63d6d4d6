#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hslab/functionals.hpp"
#include "hslab/mesh.hpp"
#include "hslab/params.hpp"

namespace hslab {

enum class FamilyKind {
    TranslateAlongSigma0,
    ConcentrateAtPoint,
    Dilate,
    RadialPower,
    HoriuchiRadial,
    TalentiBubble,
};

const char* to_string(FamilyKind k);

/// Analytic radial profile with derivative, used by the concentration family
/// and by profile initializers.
struct RadialProfile {
    std::function<double(double)> f;
    std::function<double(double)> df;
    double support_radius = 1.0;
};

RadialProfile talenti_profile(int d, double p, double scale = 1.0);
RadialProfile compact_bump_profile(double radius);

// Grid fillers for common test profiles.
void fill_gaussian_bump(ProfileGrid& g, double cr, double cs, double sigma);
void fill_compact_bump(ProfileGrid& g, double cr, double cs, double width);
void fill_talenti_bubble(ProfileGrid& g, double p, double scale);
// Explicit extremal of the cylindrical problem at q = 2(d-1)/(d-2):
// u = [ (1+s)^2 + r^2 ]^{-(d-2)/2}.
void fill_mfs_extremal(ProfileGrid& g);
void fill_radial(ProfileGrid& g, const RadialProfile& prof);

// Quotient of u_h(z) = u(z - h z0), z0 = (x0,0) on the singular set.  The
// translated function is cylindrically symmetric about the shifted center;
// the |z| weight becomes sqrt(h^2 + rho^2 + s^2) (angular mean) on the local
// grid.  Scales like h^{gamma-b} times the purely cylindrical quotient of
// the base profile.  Throws SupportOverlap for h <= 2 * support radius.
QuotientReport translate_family_quotient(const ParamSet& ps, const ProfileGrid& base, double h);

// Quotient of u_h(z) = u((z - z0) h), z0 = (0,y0) off the singular set,
// q = p*.  Evaluated on a 1D radial grid with the weights expanded about
// |y| = |z| = 1 to second (angular-mean) order; the remaining model error is
// bounded analytically and folded into quad_error.
QuotientReport concentrate_family_quotient(const ParamSet& ps, const RadialProfile& base, double h,
                                           int n_nodes = 2048);
QuotientReport concentrate_family_quotient(const ParamSet& ps, const ProfileGrid& base, double h);

// Closed-form radial-class upper bound for S_{a,b,b}(p*):
//   G_a * [ (d-p+a-b)/(d-p) ]^{p - p/d} * S.
double horiuchi_radial_bound(const ParamSet& ps);

// Near-extremal Hardy family |z|^{-H_{a-b}+eps} with C^1 cubic blending to
// zero over one decade at each end of [r_in, r_out].  Populates g.
void radial_power_profile(const ParamSet& ps, double eps, double r_in, double r_out,
                          ProfileGrid& g);

struct FamilyPoint {
    FamilyKind kind;
    double parameter = 0.0; // h or eps
    double quotient = 0.0;
    double quad_error = 0.0;
};

// CSV rows "kind,h,quotient,quad_error".
std::string family_points_to_csv(const std::vector<FamilyPoint>& pts);

} // namespace hslab

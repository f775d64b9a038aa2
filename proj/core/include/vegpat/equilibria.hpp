#ifndef VEGPAT_EQUILIBRIA_HPP
#define VEGPAT_EQUILIBRIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "vegpat/model.hpp"

namespace vegpat {

/// Monic quartic F(b) = b^4 + C3 b^3 + C2 b^2 + C1 b + C0 whose positive
/// roots are the biomass components of the positive equilibria.
struct QuarticF {
    double C0 = 0.0, C1 = 0.0, C2 = 0.0, C3 = 0.0;

    double eval(double b) const;
    double deriv(double b) const;
    double second_deriv(double b) const;
};

QuarticF quartic_coeffs(const ModelParams& p);

/// Boundary curves of the parameter regions in the (theta2, R) plane.
double f1_curve(const ModelParams& p, double theta2);
double f2_curve(const ModelParams& p, double theta2);
double f3_curve(const ModelParams& p, double theta2);

enum class Region { I, II, III, IV, Other };

struct ParamRegion {
    Region region = Region::Other;
    double f1 = 0.0, f2 = 0.0, f3 = 0.0;
};

/// Requires mu > rho (the region geometry is defined under that assumption).
ParamRegion classify_param_region(const ModelParams& p);

enum class EquilibriumKind { BareSoil, Positive };

struct Equilibrium {
    double w = 0.0;
    double b = 0.0;
    EquilibriumKind kind = EquilibriumKind::Positive;
    std::string label;       // E0, E1*, E21*, E22*, E31*, E32*, E33*
    int fprime_sign = 0;     // sign of F'(b*) at the root
    bool near_double = false; // |F'| ~ 0: fold boundary, multiplicity flag
};

Equilibrium bare_soil(const ModelParams& p);

/// All positive equilibria, sorted ascending in b, labeled by count.
std::vector<Equilibrium> find_positive_equilibria(const ModelParams& p);

/// Real roots of a polynomial (lowest-degree coefficient first is NOT used;
/// coefficients are highest first: c[0] x^n + ... + c[n]). Deterministic
/// derivative-cascade isolation + bisection; doubles as the test oracle.
std::vector<double> poly_real_roots(const std::vector<double>& coeffs,
                                    double lo, double hi, double tol = 1e-12);

struct DescartesCase {
    int positive_roots = 0;
    std::string case_id;  // sign pattern of (C2, C1, C0) plus refinements
};

/// Positive-root count from the sign-pattern case table. Throws when a
/// coefficient is within 1e-12 of zero (sign ambiguous at a case boundary).
DescartesCase descartes_case(const QuarticF& q);

struct SaddleNodePoint {
    double R = 0.0;
    double b = 0.0;
};

/// Fold parameter values in the given R bracket: simultaneous roots of
/// F(b;R) = 0, F'(b;R) = 0. Transcritical crossings (root through b = 0)
/// are not folds and are excluded.
std::vector<SaddleNodePoint> find_saddle_node_R(ModelParams p, double R_lo, double R_hi);

}  // namespace vegpat

#endif

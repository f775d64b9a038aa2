#include "vegpat/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace vegpat {

double QuarticF::eval(double b) const {
    return (((b + C3) * b + C2) * b + C1) * b + C0;
}
double QuarticF::deriv(double b) const {
    return ((4.0 * b + 3.0 * C3) * b + 2.0 * C2) * b + C1;
}
double QuarticF::second_deriv(double b) const {
    return (12.0 * b + 6.0 * C3) * b + 2.0 * C2;
}

QuarticF quartic_coeffs(const ModelParams& p) {
    p.validate();
    const double R = p.R, a = p.a, d = p.delta, rho = p.rho, mu = p.mu;
    const double t1 = p.theta1, t2 = p.theta2;
    const double den = rho * d * d * t1;
    QuarticF q;
    q.C0 = (mu * a * R - R * R * rho * t2 - R * a * rho) / den;
    q.C1 = (rho * (R * t2 * a - R * t1 * a + a * a - R * d) + mu * R * d) / den;
    q.C2 = (R * d * t2 - R * d * t1 + 2.0 * a * d + t1 * a * a) / (d * d * t1);
    q.C3 = (2.0 * a * t1 + d) / (d * t1);
    return q;
}

double f1_curve(const ModelParams& p, double theta2) {
    return (2.0 * p.a * p.delta + p.theta1 * p.a * p.a) / (p.delta * (p.theta1 - theta2));
}
double f2_curve(const ModelParams& p, double theta2) {
    return p.rho * p.a * p.a /
           (p.rho * p.theta1 * p.a + p.rho * p.delta - p.rho * theta2 * p.a - p.mu * p.delta);
}
double f3_curve(const ModelParams& p, double theta2) {
    return p.a * (p.mu - p.rho) / (p.rho * theta2);
}

ParamRegion classify_param_region(const ModelParams& p) {
    if (!p.mu_exceeds_rho())
        throw std::domain_error("classify_param_region: requires mu > rho");
    ParamRegion out;
    out.f1 = f1_curve(p, p.theta2);
    out.f2 = f2_curve(p, p.theta2);
    out.f3 = f3_curve(p, p.theta2);
    const double R = p.R, t2 = p.theta2, t1 = p.theta1;
    // f1 leaves the first quadrant when theta2 >= theta1
    const bool f1_valid = t2 < t1;
    if (f1_valid && R < std::min(out.f1, out.f3))
        out.region = Region::I;
    else if (!f1_valid && R < out.f3)
        out.region = Region::I;
    else if ((f1_valid && out.f3 < R && R < out.f1) || (t2 > t1 && R > out.f3))
        out.region = Region::II;
    else if (f1_valid && out.f1 < R && R < out.f3)
        out.region = Region::III;
    else if (f1_valid && R > std::max(out.f1, out.f3))
        out.region = Region::IV;
    else
        out.region = Region::Other;
    return out;
}

Equilibrium bare_soil(const ModelParams& p) {
    Equilibrium e;
    e.w = p.R / p.a;
    e.b = 0.0;
    e.kind = EquilibriumKind::BareSoil;
    e.label = "E0";
    return e;
}

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (double ci : c) v = v * x + ci;
    return v;
}

std::vector<double> poly_deriv(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<double> d;
    d.reserve(n);
    for (int i = 0; i < n; ++i) d.push_back(c[i] * (n - i));
    return d;
}

double bisect(const std::vector<double>& c, double lo, double hi, double tol) {
    double flo = poly_eval(c, lo);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(c, mid);
        if ((flo <= 0) == (fm <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> poly_real_roots(const std::vector<double>& coeffs,
                                    double lo, double hi, double tol) {
    if (coeffs.size() <= 1) return {};
    if (coeffs.size() == 2) {
        const double r = -coeffs[1] / coeffs[0];
        if (r > lo && r < hi) return {r};
        return {};
    }
    // Critical points partition [lo, hi] into monotone pieces.
    const auto crit = poly_real_roots(poly_deriv(coeffs), lo, hi, tol);
    std::vector<double> pts = {lo};
    pts.insert(pts.end(), crit.begin(), crit.end());
    pts.push_back(hi);
    std::vector<double> roots;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double fa = poly_eval(coeffs, pts[i]);
        const double fb = poly_eval(coeffs, pts[i + 1]);
        if (fa == 0.0 && i == 0) roots.push_back(pts[i]);
        if ((fa <= 0) != (fb <= 0))
            roots.push_back(bisect(coeffs, pts[i], pts[i + 1], tol));
    }
    return roots;
}

std::vector<Equilibrium> find_positive_equilibria(const ModelParams& p) {
    const QuarticF q = quartic_coeffs(p);
    // Cauchy bound on root magnitude
    const double bound = 1.0 + std::max({std::abs(q.C0), std::abs(q.C1),
                                         std::abs(q.C2), std::abs(q.C3)});
    auto roots = poly_real_roots({1.0, q.C3, q.C2, q.C1, q.C0}, 1e-14, bound);
    std::sort(roots.begin(), roots.end());

    std::vector<Equilibrium> out;
    const int n = static_cast<int>(roots.size());
    for (int i = 0; i < n; ++i) {
        Equilibrium e;
        e.b = roots[i];
        e.w = p.R / (p.a + p.delta * e.b);
        e.kind = EquilibriumKind::Positive;
        const double fp = q.deriv(e.b);
        e.fprime_sign = (fp > 0) - (fp < 0);
        e.near_double = std::abs(fp) < 1e-8;
        if (n == 1)
            e.label = "E1*";
        else if (n == 2)
            e.label = "E2" + std::to_string(i + 1) + "*";
        else
            e.label = "E3" + std::to_string(i + 1) + "*";
        out.push_back(e);
    }
    return out;
}

DescartesCase descartes_case(const QuarticF& q) {
    if (!(q.C3 > 0)) throw std::domain_error("descartes_case: requires C3 > 0");
    for (double c : {q.C2, q.C1, q.C0})
        if (std::abs(c) < 1e-12)
            throw std::domain_error("descartes_case: coefficient within 1e-12 of zero, sign ambiguous");

    auto sgn = [](double x) { return x > 0 ? '+' : '-'; };
    DescartesCase dc;
    dc.case_id = {sgn(q.C2), sgn(q.C1), sgn(q.C0)};

    // Count sign alternations of F along 0, positive critical points, +inf.
    // Critical points of F are the positive roots of the cubic F'.
    const double bound = 1.0 + std::max({std::abs(q.C0), std::abs(q.C1),
                                         std::abs(q.C2), std::abs(q.C3)});
    const auto crit = poly_real_roots({4.0, 3.0 * q.C3, 2.0 * q.C2, q.C1}, 0.0, bound);
    std::vector<double> vals = {q.C0};  // F(0)
    for (double b : crit) vals.push_back(q.eval(b));
    vals.push_back(1.0);  // sign of F at +inf
    int count = 0;
    for (size_t i = 0; i + 1 < vals.size(); ++i)
        if ((vals[i] <= 0) != (vals[i + 1] <= 0)) ++count;
    dc.positive_roots = count;

    // Record the refinement values used by the case table when C2 < 0.
    if (q.C2 < 0 && q.C1 > 0) {
        const double bbar = (-6.0 * q.C3 + std::sqrt(36.0 * q.C3 * q.C3 - 96.0 * q.C2)) / 24.0;
        dc.case_id += q.deriv(bbar) > 0 ? "/F'+": "/F'-";
    }
    return dc;
}

std::vector<SaddleNodePoint> find_saddle_node_R(ModelParams p, double R_lo, double R_hi) {
    const int n_scan = 2000;
    auto count_at = [&p](double R) {
        p.R = R;
        int n = 0;
        // Count roots bounded away from 0 so the transcritical crossing
        // (a root through b = 0) does not register as a fold.
        for (const auto& e : find_positive_equilibria(p))
            if (e.b > 1e-6) ++n;
        return n;
    };

    std::vector<SaddleNodePoint> folds;
    int prev = count_at(R_lo);
    double Rprev = R_lo;
    for (int i = 1; i <= n_scan; ++i) {
        const double R = R_lo + (R_hi - R_lo) * i / n_scan;
        const int cur = count_at(R);
        if (std::abs(cur - prev) == 2) {
            // bisect the count change
            double lo = Rprev, hi = R;
            int clo = prev;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (count_at(mid) == clo) lo = mid; else hi = mid;
            }
            const double R_fold = 0.5 * (lo + hi);
            // double root: the colliding pair on the richer side
            p.R = (clo > count_at(hi)) ? lo : hi;
            auto eqs = find_positive_equilibria(p);
            double b_fold = 0.0, best = 1e300;
            const QuarticF qf = quartic_coeffs(p);
            for (const auto& e : eqs) {
                const double fp = std::abs(qf.deriv(e.b));
                if (fp < best && e.b > 1e-6) { best = fp; b_fold = e.b; }
            }
            // damped Newton polish on (F, F') in (b, R)
            double b = b_fold, R2 = R_fold;
            for (int it = 0; it < 60; ++it) {
                p.R = R2;
                const QuarticF q = quartic_coeffs(p);
                const double F = q.eval(b), Fb = q.deriv(b), Fbb = q.second_deriv(b);
                const double den = p.rho * p.delta * p.delta * p.theta1;
                const double dC0 = (p.mu * p.a - 2.0 * R2 * p.rho * p.theta2 - p.a * p.rho) / den;
                const double dC1 = (p.rho * (p.theta2 * p.a - p.theta1 * p.a - p.delta) + p.mu * p.delta) / den;
                const double dC2 = (p.delta * p.theta2 - p.delta * p.theta1) / (p.delta * p.delta * p.theta1);
                const double FR = dC2 * b * b + dC1 * b + dC0;
                const double FbR = 2.0 * dC2 * b + dC1;
                const double det = Fb * FbR - FR * Fbb;
                if (std::abs(det) < 1e-300) break;
                double db = (F * FbR - FR * Fb) / det * -1.0;
                double dR = (Fb * Fb - F * Fbb) / det * -1.0;
                // guard against wild steps near the scan resolution
                const double scale = std::max(1.0, std::max(std::abs(db), std::abs(dR)) / 0.5);
                b += db / scale;
                R2 += dR / scale;
                if (std::abs(F) < 1e-12 && std::abs(Fb) < 1e-12) break;
            }
            p.R = R2;
            const QuarticF q = quartic_coeffs(p);
            if (std::abs(q.eval(b)) < 1e-9 && std::abs(q.deriv(b)) < 1e-9 && b > 1e-6)
                folds.push_back({R2, b});
            else
                folds.push_back({R_fold, b_fold});  // bisection already at 1e-12 in R
        }
        prev = cur;
        Rprev = R;
    }
    return folds;
}

}  // namespace vegpat

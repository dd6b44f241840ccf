#include "tphom/materials.hpp"

#include <cmath>
#include <numbers>

#include "tphom/errors.hpp"

namespace tphom {

double Profile::operator()(const Vec3& y) const {
    switch (kind) {
        case Kind::Constant: return a;
        case Kind::Affine: return a + b * y[axis];
        case Kind::Sine: return a + b * std::sin(2.0 * std::numbers::pi * y[axis]);
    }
    return a;
}

double Profile::lower_bound() const {
    switch (kind) {
        case Kind::Constant: return a;
        case Kind::Affine: return std::min(a, a + b);
        case Kind::Sine: return a - std::abs(b);
    }
    return a;
}

void PhaseParameters::validate() const {
    for (int m = 0; m < 2; ++m) {
        const Phase& p = phase[m];
        std::string tag = "phase " + std::to_string(m + 1) + ": ";
        if (!(p.mu > 0)) throw MaterialError(tag + "shear modulus mu must be positive");
        if (!(p.lambda > 0)) throw MaterialError(tag + "Lame lambda must be positive");
        if (!(p.kappa > 0)) throw MaterialError(tag + "permeability kappa must be positive");
        if (!(p.conductivity > 0)) throw MaterialError(tag + "conductivity must be positive");
        if (!(p.capacity > 0)) throw MaterialError(tag + "heat capacity c must be positive");
        if (!(p.phi > 0)) throw MaterialError(tag + "storage phi must be positive");
        if (p.beta < 0 || p.gamma < 0 || p.alpha < 0) throw MaterialError(tag + "beta, gamma, alpha must be nonnegative");
        if (!(p.phi * p.capacity > p.alpha * p.alpha))
            throw WellPosednessError(tag + "storage form not positive: phi*c must exceed alpha^2");
    }
    if (insulated) {
        if (zeta.lower_bound() < 0 || omega.lower_bound() < 0)
            throw MaterialError("interface coefficients zeta, omega must be nonnegative");
    } else {
        if (!(zeta.lower_bound() > 0)) throw MaterialError("zeta must be bounded below by a positive constant");
        if (!(omega.lower_bound() > 0)) throw MaterialError("omega must be bounded below by a positive constant");
    }
}

double SourceSpec::shape(const Vec3& x, double t) const {
    double s = 1.0;
    if (space == Space::Sine) {
        const double pi = std::numbers::pi;
        s = std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
    }
    if (time == Time::Linear) s *= t;
    return s;
}

MacroLoads zero_macro_loads() {
    MacroLoads l;
    l.f = [](const Vec3&, double) { return Vec3::Zero().eval(); };
    for (int m = 0; m < 2; ++m) l.g[m] = l.h[m] = [](const Vec3&, double) { return 0.0; };
    return l;
}

MicroLoads zero_micro_loads() {
    MicroLoads l;
    for (int m = 0; m < 2; ++m) {
        l.f[m] = [](const Vec3&, double) { return Vec3::Zero().eval(); };
        l.g[m] = l.h[m] = [](const Vec3&, double) { return 0.0; };
    }
    return l;
}

MicroLoads micro_loads(const Sources& s) {
    MicroLoads l;
    for (int m = 0; m < 2; ++m) {
        SourceSpec f = s.f[m], g = s.g[m], h = s.h[m];
        l.f[m] = [f](const Vec3& x, double t) { return (f.value * f.shape(x, t)).eval(); };
        l.g[m] = [g](const Vec3& x, double t) { return g.value[0] * g.shape(x, t); };
        l.h[m] = [h](const Vec3& x, double t) { return h.value[0] * h.shape(x, t); };
    }
    return l;
}

MacroLoads macro_loads(const Sources& s, const std::array<double, 2>& vol) {
    MacroLoads l;
    auto f1 = s.f[0], f2 = s.f[1];
    l.f = [f1, f2, vol](const Vec3& x, double t) {
        return (vol[0] * f1.value * f1.shape(x, t) + vol[1] * f2.value * f2.shape(x, t)).eval();
    };
    for (int m = 0; m < 2; ++m) {
        SourceSpec g = s.g[m], h = s.h[m];
        double v = vol[m];
        l.g[m] = [g, v](const Vec3& x, double t) { return v * g.value[0] * g.shape(x, t); };
        l.h[m] = [h, v](const Vec3& x, double t) { return v * h.value[0] * h.shape(x, t); };
    }
    return l;
}

}  // namespace tphom

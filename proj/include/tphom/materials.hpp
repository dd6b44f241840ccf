#pragma once

#include <array>
#include <functional>
#include <string>

#include "tphom/tensor.hpp"

namespace tphom {

struct Phase {
    double lambda = 1.0;        // Pa
    double mu = 1.0;            // Pa
    double beta = 0.0;          // Biot-Willis coefficient
    double gamma = 0.0;         // thermal dilation, Pa/K
    double alpha = 0.0;         // pressure-temperature storage coupling
    double phi = 1.0;           // storage coefficient, 1/Pa
    double kappa = 1.0;         // permeability k_f/mu_f
    double conductivity = 1.0;  // heat conductivity
    double capacity = 1.0;      // heat capacity

    Tensor4 stiffness() const { return Tensor4::isotropic(lambda, mu); }
};

// Scalar profile on the unit cell: a, a + b*y_axis, or a + b*sin(2 pi y_axis).
struct Profile {
    enum class Kind { Constant, Affine, Sine };
    Kind kind = Kind::Constant;
    double a = 1.0;
    double b = 0.0;
    int axis = 0;

    static Profile constant(double v) { return {Kind::Constant, v, 0.0, 0}; }
    double operator()(const Vec3& y) const;
    double lower_bound() const;
};

struct PhaseParameters {
    std::array<Phase, 2> phase;
    Profile zeta = Profile::constant(1.0);
    Profile omega = Profile::constant(1.0);
    bool insulated = false;  // permits zeta, omega = 0

    // Throws MaterialError / WellPosednessError naming the violated condition.
    void validate() const;
};

// Source value times a spatial profile times a time profile.
struct SourceSpec {
    enum class Space { Constant, Sine };  // Sine: sin(pi x) sin(pi y) sin(pi z)
    enum class Time { Constant, Linear };  // Linear: t
    Vec3 value = Vec3::Zero();             // scalar sources use value[0]
    Space space = Space::Constant;
    Time time = Time::Constant;

    double shape(const Vec3& x, double t) const;
    bool is_zero() const { return value.isZero(0.0); }
};

struct Sources {
    std::array<SourceSpec, 2> f, g, h;
};

using ScalarField = std::function<double(const Vec3&, double)>;
using VectorField = std::function<Vec3(const Vec3&, double)>;

// Right-hand sides of the homogenized system.
struct MacroLoads {
    VectorField f;                   // f*
    std::array<ScalarField, 2> g;    // g_m*
    std::array<ScalarField, 2> h;    // h_m*
};

// Per-phase right-hand sides of the micro system.
struct MicroLoads {
    std::array<VectorField, 2> f;
    std::array<ScalarField, 2> g;
    std::array<ScalarField, 2> h;
};

MacroLoads zero_macro_loads();
MicroLoads zero_micro_loads();
MicroLoads micro_loads(const Sources& s);
// Volume-weighted loads: f* = |Y1| f1 + |Y2| f2, g_m* = |Y_m| g_m, h_m* = |Y_m| h_m.
MacroLoads macro_loads(const Sources& s, const std::array<double, 2>& volumes);

}  // namespace tphom

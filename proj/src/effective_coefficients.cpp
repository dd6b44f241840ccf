#include "tphom/effective.hpp"

#include <cmath>

#include "tphom/errors.hpp"
#include "tphom/fem.hpp"

namespace tphom {

namespace {

// Integral over cell c of grad f (row = component, col = derivative) for a periodic vector field.
Mat3 cell_gradient_integral(const UnitCellMesh& cell, const Vec& f, int c) {
    const auto& R = q1::reference();
    auto nodes = cell.cell_nodes(c);
    Mat3 g = Mat3::Zero();
    for (int a = 0; a < 8; ++a)
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) g(r, s) += f[3 * nodes[a] + r] * R.grad_int[a][s];
    return g * cell.h * cell.h;
}

Vec3 phase_gradient_integral(const UnitCellMesh& cell, const PhaseSpace& sp, const Vec& f, int c) {
    const auto& R = q1::reference();
    auto nodes = cell.cell_nodes(c);
    Vec3 g = Vec3::Zero();
    for (int a = 0; a < 8; ++a)
        for (int s = 0; s < 3; ++s) g[s] += f[sp.node_dof[nodes[a]]] * R.grad_int[a][s];
    return g * cell.h * cell.h;
}

// Integral of (delta_ij + d_j f^i) over phase m for a corrector family f^i.
Mat3 phase_average(const UnitCellMesh& cell, const PhaseSpace& sp, const std::array<Vec, 3>& f) {
    Mat3 M = Mat3::Zero();
    if (sp.ndofs == 0) return M;
    const double vol = cell.h * cell.h * cell.h;
    for (int c = 0; c < cell.num_cells(); ++c) {
        if (cell.labels[c] != sp.phase) continue;
        for (int i = 0; i < 3; ++i) {
            Vec3 g = phase_gradient_integral(cell, sp, f[i], c);
            for (int j = 0; j < 3; ++j) M(i, j) += (i == j ? vol : 0.0) + g[j];
        }
    }
    return M;
}

// Gate relative to the phase volume, the natural size of these averages.
Mat3 checked_symmetric(const Mat3& M, const char* what, double volume) {
    double scale = std::max(M.cwiseAbs().maxCoeff(), volume);
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw AssemblyError(std::string(what) + " asymmetry beyond tolerance");
    return 0.5 * (M + M.transpose());
}

}  // namespace

Mat3 EffectiveCoefficients::hom_stress(const Mat3& e) const { return Tensor4::from_voigt(A_hom).contract(e); }

double interface_integral(const UnitCellMesh& cell, const Profile& p) {
    const auto& R = q1::face_rule();
    double total = 0.0;
    for (const auto& f : cell.interface_faces) {
        const int t0 = (f.axis + 1) % 3, t1 = (f.axis + 2) % 3;
        for (int q = 0; q < R.npts; ++q) {
            Vec3 y;
            y[f.axis] = f.pos[f.axis] * cell.h;
            y[t0] = (f.pos[t0] + R.pts[q][0]) * cell.h;
            y[t1] = (f.pos[t1] + R.pts[q][1]) * cell.h;
            total += R.w[q] * cell.h * cell.h * p(y);
        }
    }
    return total;
}

Mat6 homogenized_elasticity(const UnitCellMesh& cell, const PhaseParameters& params, const std::array<Vec, 6>& w,
                            Mat6* energy_form) {
    std::array<Tensor4, 2> C = {params.phase[0].stiffness(), params.phase[1].stiffness()};
    const double vol = cell.h * cell.h * cell.h;
    Mat6 A = Mat6::Zero();
    for (int c = 0; c < cell.num_cells(); ++c) {
        const Tensor4& Cc = C[cell.labels[c] - 1];
        for (int b = 0; b < 6; ++b) {
            const int k = kVoigtPairs[b][0], h = kVoigtPairs[b][1];
            Mat3 G = cell_gradient_integral(cell, w[b], c);
            Mat3 e = unit_strain(k, h) * vol + 0.5 * (G + G.transpose());
            Mat3 s = Cc.contract(e);
            for (int a = 0; a < 6; ++a) A(a, b) += s(kVoigtPairs[a][0], kVoigtPairs[a][1]);
        }
    }
    double scale = A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw AssemblyError("homogenized elasticity lacks major symmetry beyond tolerance");

    if (energy_form) {
        std::array<Mat24, 2> Ke = {local_elastic(cell.h, C[0]), local_elastic(cell.h, C[1])};
        Mat6 E = Mat6::Zero();
        Eigen::Matrix<double, 24, 6> loc;
        for (int c = 0; c < cell.num_cells(); ++c) {
            auto nodes = cell.cell_nodes(c);
            for (int b = 0; b < 6; ++b) {
                const int k = kVoigtPairs[b][0], l = kVoigtPairs[b][1];
                for (int a = 0; a < 8; ++a) {
                    double y[3] = {q1::corner(a, 0) * cell.h, q1::corner(a, 1) * cell.h, q1::corner(a, 2) * cell.h};
                    for (int i = 0; i < 3; ++i) {
                        double d = 0.0;
                        // symmetrized affine field with strain E^{kl}
                        if (i == l) d += 0.5 * y[k];
                        if (i == k) d += 0.5 * y[l];
                        loc(3 * a + i, b) = w[b][3 * nodes[a] + i] + d;
                    }
                }
            }
            E += loc.transpose() * Ke[cell.labels[c] - 1] * loc;
        }
        *energy_form = E;
    }
    return 0.5 * (A + A.transpose());
}

std::array<Mat3, 2> coupling_matrices(const UnitCellMesh& cell, const std::array<Vec, 6>& w) {
    std::array<Mat3, 2> Cm = {Mat3::Zero(), Mat3::Zero()};
    const double vol = cell.h * cell.h * cell.h;
    for (int c = 0; c < cell.num_cells(); ++c) {
        int m = cell.labels[c] - 1;
        for (int b = 0; b < 6; ++b) {
            const int i = kVoigtPairs[b][0], j = kVoigtPairs[b][1];
            double div = cell_gradient_integral(cell, w[b], c).trace();
            double v = (i == j ? vol : 0.0) + div;
            Cm[m](i, j) += v;
            if (i != j) Cm[m](j, i) += v;
        }
    }
    return Cm;
}

void biot_and_dilation_matrices(const UnitCellMesh& cell, const PhaseParameters& params, const CellCorrectors& cc,
                                EffectiveCoefficients& out) {
    for (int m = 0; m < 2; ++m) {
        // The (i, d_j pi^i) averages are symmetric by the cell weak form; symmetrized after the gate.
        Mat3 P = checked_symmetric(phase_average(cell, cc.space[m], cc.pi[m]), "micro-pressure average", cell.phase_volume[m]);
        Mat3 T = checked_symmetric(phase_average(cell, cc.space[m], cc.theta[m]), "micro-temperature average", cell.phase_volume[m]);
        out.B[m] = params.phase[m].beta * P;
        out.D[m] = params.phase[m].gamma * T;
    }
}

void transport_tensors(const UnitCellMesh& cell, const PhaseParameters& params, const CellCorrectors& cc,
                       EffectiveCoefficients& out) {
    for (int m = 0; m < 2; ++m) {
        // K_ij = kappa int (delta_ij + d_i pi^j): transpose of the (i, d_j pi^i) average
        Mat3 P = checked_symmetric(phase_average(cell, cc.space[m], cc.pi[m]), "permeability tensor", cell.phase_volume[m]).transpose();
        Mat3 T = checked_symmetric(phase_average(cell, cc.space[m], cc.theta[m]), "conductivity tensor", cell.phase_volume[m]).transpose();
        out.K[m] = params.phase[m].kappa * P;
        out.L[m] = params.phase[m].conductivity * T;
    }
}

void starred_scalars(const UnitCellMesh& cell, const PhaseParameters& params, const Sources& src,
                     EffectiveCoefficients& out) {
    for (int m = 0; m < 2; ++m) {
        const double v = cell.phase_volume[m];
        const Phase& p = params.phase[m];
        out.phi_star[m] = v * p.phi;
        out.alpha_star[m] = v * p.alpha;
        out.c_star[m] = v * p.capacity;
        out.gamma_star[m] = v * p.gamma;
        out.g_star[m] = v * src.g[m].value[0];
        out.h_star[m] = v * src.h[m].value[0];
        out.beta[m] = p.beta;
        out.gamma[m] = p.gamma;
        out.volume[m] = v;
    }
    out.f_star = cell.phase_volume[0] * src.f[0].value + cell.phase_volume[1] * src.f[1].value;
    out.zeta_star = interface_integral(cell, params.zeta);
    out.omega_star = interface_integral(cell, params.omega);
    out.interface_area = cell.interface_area;
}

EffectiveCoefficients compute_effective_coefficients(const CellCorrectors& cc, const PhaseParameters& params,
                                                     const Sources& sources) {
    const UnitCellMesh& cell = *cc.cell;
    EffectiveCoefficients out;
    out.resolution = cell.n;
    out.interface_reading = cc.interface_reading;
    out.A_hom = homogenized_elasticity(cell, params, cc.w, &out.A_energy);
    double scale = out.A_hom.cwiseAbs().maxCoeff();
    out.energy_form_mismatch = (out.A_hom - out.A_energy).cwiseAbs().maxCoeff() / scale;
    if (out.energy_form_mismatch > 1e-8)
        throw AssemblyError("energy-form and flux-form homogenized elasticity disagree (" +
                            std::to_string(out.energy_form_mismatch) + ")");
    out.C = coupling_matrices(cell, cc.w);
    biot_and_dilation_matrices(cell, params, cc, out);
    transport_tensors(cell, params, cc, out);
    starred_scalars(cell, params, sources, out);
    return out;
}

Mat6 voigt_bound(const UnitCellMesh& cell, const PhaseParameters& params) {
    return cell.phase_volume[0] * params.phase[0].stiffness().to_voigt() +
           cell.phase_volume[1] * params.phase[1].stiffness().to_voigt();
}

Mat6 reuss_bound(const UnitCellMesh& cell, const PhaseParameters& params) {
    // Harmonic mean in Mandel form, mapped back to raw Voigt entries.
    Mat6 W = Mat6::Identity();
    for (int a = 3; a < 6; ++a) W(a, a) = std::sqrt(2.0);
    Mat6 S = Mat6::Zero();
    for (int m = 0; m < 2; ++m) {
        if (cell.phase_volume[m] == 0) continue;
        Mat6 M = W * params.phase[m].stiffness().to_voigt() * W;
        S += cell.phase_volume[m] * M.inverse();
    }
    Mat6 Wi = W.inverse();
    return Wi * S.inverse() * Wi;
}

}  // namespace tphom

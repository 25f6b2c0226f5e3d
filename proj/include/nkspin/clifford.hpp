#pragma once
// Complex Clifford module of Cl(6) on C^8, the algebraic Killing spinor, the
// identification Lambda^0 + Lambda^1 + Lambda^6 = S_{1/2} through kappa, and
// the spinor-valued 1-forms S_{1/2} (x) T with the contraction Pi.
//
// Clifford relation: gamma(x)^2 = -|x|^2. A spinor-valued vector
// sum_i alpha^(i) (x) e_i is stored as 48 entries, alpha^(i) at 8i..8i+7.
//
// Orientation note: with vol = e^1...e^6 = omega^3/6 and psi- = *psi+, the
// invariant Killing spinor with Killing number +1/2 is the -4 eigenvector of
// psi-· (not +4). The spinor dictionary below is stated in this orientation.

#include "su3_model.hpp"

#include <array>

namespace nkspin {

using Spinor = Eigen::Matrix<cplx, 8, 1>;
using SpinorOp = Eigen::Matrix<cplx, 8, 8>;

inline const std::array<SpinorOp, 6>& gammas() {
    static const std::array<SpinorOp, 6> g = [] {
        using M2 = Eigen::Matrix<cplx, 2, 2>;
        const cplx I(0, 1);
        M2 s1, s2, s3, id;
        s1 << 0, 1, 1, 0;
        s2 << 0, -I, I, 0;
        s3 << 1, 0, 0, -1;
        id.setIdentity();
        auto k3 = [](const M2& a, const M2& b, const M2& c) {
            SpinorOp r;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l)
                            for (int m = 0; m < 2; ++m)
                                for (int n = 0; n < 2; ++n)
                                    r(4 * i + 2 * k + m, 4 * j + 2 * l + n) = a(i, j) * b(k, l) * c(m, n);
            return r;
        };
        std::array<SpinorOp, 6> r{k3(s1, id, id), k3(s2, id, id), k3(s3, s1, id),
                                  k3(s3, s2, id), k3(s3, s3, s1), k3(s3, s3, s2)};
        for (auto& x : r) x *= I;
        return r;
    }();
    return g;
}

inline SpinorOp gamma(const Vec6& x) {
    SpinorOp r = SpinorOp::Zero();
    for (int i = 0; i < kDim; ++i) r += x[i] * gammas()[i];
    return r;
}

// e^{i1}^...^e^{ip} (i1 < ... < ip) -> gamma(e_i1)...gamma(e_ip), extended linearly.
inline SpinorOp gamma_form(const Form& a) {
    SpinorOp r = SpinorOp::Zero();
    for (unsigned I = 0; I < kForms; ++I) {
        if (a[I] == 0.0) continue;
        SpinorOp P = SpinorOp::Identity();
        for (int i = 0; i < kDim; ++i)
            if (I >> i & 1u) P = P * gammas()[i];
        r += a[I] * P;
    }
    return r;
}

// Spin lift of a skew endomorphism: 1/4 sum_ij g(B e_i, e_j) gamma_i gamma_j.
inline SpinorOp spin_lift(const Mat6& B) {
    SpinorOp r = SpinorOp::Zero();
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            if (B(j, i) != 0.0) r += 0.25 * B(j, i) * gammas()[i] * gammas()[j];
    return r;
}

inline SpinorOp vol_action() { return gamma_form(model().vol); }

// Eigenvalue of psi-· on kappa in the model orientation.
constexpr double kKappaPsiMinusEigenvalue = -4.0;

struct KillingModel {
    Spinor kappa;
    int eigenspace_dim = 0;
    std::array<double, 8> psi_minus_spectrum{};
};

// Fix the phase of a spinor: the first component of (nearly) maximal modulus
// becomes real positive.
inline Spinor fix_phase(const Spinor& s) {
    double mx = s.cwiseAbs().maxCoeff();
    for (int i = 0; i < 8; ++i)
        if (std::abs(s[i]) > mx * (1.0 - 1e-9)) return s * std::polar(1.0, -std::arg(s[i]));
    return s;
}

inline KillingModel find_killing_spinor(double eigenvalue = kKappaPsiMinusEigenvalue) {
    SpinorOp P = gamma_form(model().psi_minus);
    Eigen::SelfAdjointEigenSolver<SpinorOp> es(P);
    KillingModel k;
    int found = -1;
    for (int i = 0; i < 8; ++i) {
        k.psi_minus_spectrum[i] = es.eigenvalues()[i];
        if (std::abs(es.eigenvalues()[i] - eigenvalue) < 1e-9) {
            ++k.eigenspace_dim;
            if (found < 0) found = i;
        }
    }
    if (found < 0) throw std::logic_error("psi- has no eigenvector with the requested eigenvalue");
    k.kappa = fix_phase(es.eigenvectors().col(found).normalized());
    return k;
}

inline const Spinor& kappa() {
    static const Spinor k = find_killing_spinor().kappa;
    return k;
}

// Columns kappa, gamma(e_1)kappa, ..., gamma(e_6)kappa, vol·kappa: a unitary basis.
inline const SpinorOp& spinor_frame() {
    static const SpinorOp B = [] {
        SpinorOp r;
        r.col(0) = kappa();
        for (int k = 0; k < 6; ++k) r.col(1 + k) = gammas()[k] * kappa();
        r.col(7) = vol_action() * kappa();
        return r;
    }();
    return B;
}

inline Spinor spinor_from_forms(double f0, const Vec6& a1, double f6) {
    return (cplx(f0) * SpinorOp::Identity() + gamma(a1) + cplx(f6) * vol_action()) * kappa();
}

struct SpinorForms {
    double f0 = 0.0;
    Vec6 a1 = Vec6::Zero();
    double f6 = 0.0;
    double imag_residual = 0.0;  // distance from the real image
};

inline SpinorForms spinor_to_forms(const Spinor& s, double tol = 1e-9) {
    Spinor c = spinor_frame().adjoint() * s;
    SpinorForms r;
    r.f0 = c[0].real();
    for (int k = 0; k < 6; ++k) r.a1[k] = c[1 + k].real();
    r.f6 = c[7].real();
    r.imag_residual = c.imag().cwiseAbs().maxCoeff();
    if (r.imag_residual > tol * (1.0 + s.norm()))
        throw std::domain_error("spinor_to_forms: spinor lies outside the real image (residual " +
                                std::to_string(r.imag_residual) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// S_{1/2} (x) T.

using SpinorVector = Eigen::Matrix<cplx, 48, 1>;

inline const CMat& pi_matrix() {
    static const CMat P = [] {
        CMat r(8, 48);
        for (int i = 0; i < 6; ++i) r.middleCols(8 * i, 8) = gammas()[i];
        return r;
    }();
    return P;
}

inline Spinor pi_map(const SpinorVector& v) { return pi_matrix() * v; }

// Orthogonal projector onto ker Pi (Pi Pi^* = 6 Id).
inline CMat s32_projector() {
    return eye(48) - pi_matrix().adjoint() * pi_matrix() / 6.0;
}

inline SpinorVector s32_project(const SpinorVector& v) { return s32_projector() * v; }

// Embedding zeta -> -(1/6) sum_k gamma(e_k) zeta (x) e_k; a right inverse of Pi
// (gamma(e_k)^* = -gamma(e_k), so this is Pi^*/6).
inline CMat spinor_embedding() { return pi_matrix().adjoint() / 6.0; }

struct SpinorSymbols {
    Vec6 alpha0 = Vec6::Zero(), alpha6 = Vec6::Zero();
    Mat6 alpha1 = Mat6::Zero();  // alpha1(i, k) = k-th component of alpha_1^(i)
    Form w = Form::Zero();
    Mat6 H = Mat6::Zero(), h = Mat6::Zero(), S = Mat6::Zero();
    double trace_H = 0.0;
    Form phi = Form::Zero(), sigma = Form::Zero();
    double imag_residual = 0.0;
};

// Assemble w, H, h, S, phi, sigma from the per-leg 1-form parts.
inline void derive_symbols(SpinorSymbols& s) {
    // T(k,i) = alpha_1^(i)_k is the 2-tensor sum_i alpha_1^(i) (x) e_i.
    Mat6 T = s.alpha1.transpose();
    Mat6 wt = 0.5 * (T - T.transpose());
    s.w = Form::Zero();
    for (int k = 0; k < 6; ++k)
        for (int l = k + 1; l < 6; ++l) s.w[(1u << k) | (1u << l)] = wt(k, l);
    s.H = 0.5 * (T + T.transpose());
    SymSplit sp = sym_split(s.H);
    s.trace_H = sp.trace_part;
    s.h = sp.h + (sp.trace_part / 6.0) * Mat6::Identity();
    s.S = sp.s;
    s.phi = phi_of_h(s.h);
    s.sigma = induced(s.S, model().psi_plus);
}

inline SpinorSymbols extract_symbols(const SpinorVector& v, double tol = 1e-9) {
    SpinorSymbols s;
    for (int i = 0; i < 6; ++i) {
        Spinor leg = v.segment<8>(8 * i);
        Spinor c = spinor_frame().adjoint() * leg;
        s.imag_residual = std::max(s.imag_residual, c.imag().cwiseAbs().maxCoeff());
        s.alpha0[i] = c[0].real();
        for (int k = 0; k < 6; ++k) s.alpha1(i, k) = c[1 + k].real();
        s.alpha6[i] = c[7].real();
    }
    if (s.imag_residual > tol * (1.0 + v.norm()))
        throw std::domain_error("extract_symbols: leg outside the real image (residual " +
                                std::to_string(s.imag_residual) + ")");
    derive_symbols(s);
    return s;
}

inline SpinorVector assemble_spinor_vector(const Vec6& alpha0, const Mat6& alpha1, const Vec6& alpha6) {
    SpinorVector v;
    for (int i = 0; i < 6; ++i)
        v.segment<8>(8 * i) = spinor_from_forms(alpha0[i], alpha1.row(i).transpose(), alpha6[i]);
    return v;
}

struct S32Conditions {
    double trace_residual = 0.0;      // g(e_i, alpha_1^(i))
    double omega_residual = 0.0;      // omega(e_i, alpha_1^(i))
    Vec6 vector_residual = Vec6::Zero();  // alpha0^(i) e_i + alpha6^(i) J e_i + A_{e_i} alpha_1^(i)
    bool trace_free = false, no_omega_part = false, vector_condition = false;
    bool all() const { return trace_free && no_omega_part && vector_condition; }
};

inline S32Conditions s32_membership_conditions(const SpinorSymbols& s, double tol = 1e-9) {
    const auto& m = model();
    S32Conditions c;
    for (int i = 0; i < 6; ++i) {
        Vec6 a1 = s.alpha1.row(i).transpose();
        c.trace_residual += a1[i];
        c.omega_residual += eval2(m.omega, unit_vec(i), a1);
        c.vector_residual += s.alpha0[i] * unit_vec(i) + s.alpha6[i] * (m.J * unit_vec(i)) + a_frame()[i] * a1;
    }
    double scale = 1.0 + s.alpha1.norm() + s.alpha0.norm() + s.alpha6.norm();
    c.trace_free = std::abs(c.trace_residual) <= tol * scale;
    c.no_omega_part = std::abs(c.omega_residual) <= tol * scale;
    c.vector_condition = c.vector_residual.norm() <= tol * scale;
    return c;
}

}  // namespace nkspin

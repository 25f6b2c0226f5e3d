#pragma once
// The fixed SU(3)-structure on R^6 and its algebra: J, omega, psi+-, the
// torsion endomorphisms A_X, irreducible splittings of 2-forms, 3-forms and
// symmetric endomorphisms, and the endomorphism actions used by the operator
// identities.
//
// Conventions. Je_1 = e_2, Je_3 = e_4, Je_5 = e_6 (0-based in code). A 2-form
// b corresponds to the skew endomorphism B with b(X,Y) = g(BX,Y). A 2-tensor
// alpha (x) beta corresponds to the endomorphism beta alpha^T. Endomorphisms
// are vectorized row-major: M(k,i) sits at index 6k+i.

#include "exterior.hpp"
#include "linalg.hpp"


namespace nkspin {

struct Su3Model {
    Mat6 J;
    Form omega, psi_plus, psi_minus, vol;
};

inline Su3Model build_model() {
    Su3Model m;
    m.J.setZero();
    for (int k = 0; k < 3; ++k) {
        m.J(2 * k + 1, 2 * k) = 1.0;
        m.J(2 * k, 2 * k + 1) = -1.0;
    }
    m.omega = basis_form({0, 1}) + basis_form({2, 3}) + basis_form({4, 5});
    m.psi_plus = basis_form({0, 2, 4}) - basis_form({0, 3, 5}) - basis_form({1, 2, 5}) -
                 basis_form({1, 3, 4});
    m.psi_minus = basis_form({0, 2, 5}) + basis_form({0, 3, 4}) + basis_form({1, 2, 4}) -
                  basis_form({1, 3, 5});
    m.vol = basis_form({0, 1, 2, 3, 4, 5});
    return m;
}

inline const Su3Model& model() {
    static const Su3Model m = build_model();
    return m;
}

// a(X, Y, Z) for a 3-form a.
inline double eval3(const Form& a, const Vec6& X, const Vec6& Y, const Vec6& Z) {
    return contract(Z, contract(Y, contract(X, a)))[0];
}
inline double eval2(const Form& a, const Vec6& X, const Vec6& Y) {
    return contract(Y, contract(X, a))[0];
}

// Endomorphism of the decomposable 2-form X ^ Y: Z -> g(X,Z)Y - g(Y,Z)X.
inline Mat6 wedge_endo(const Vec6& X, const Vec6& Y) {
    return Y * X.transpose() - X * Y.transpose();
}

inline Mat6 endo_of_2form(const Form& b) {
    Mat6 B = Mat6::Zero();
    for (int i = 0; i < kDim; ++i)
        for (int j = i + 1; j < kDim; ++j) {
            double v = b[(1u << i) | (1u << j)];
            B(j, i) = v;
            B(i, j) = -v;
        }
    return B;
}

// 2-form of the skew part of B.
inline Form two_form_of_endo(const Mat6& B) {
    Form b = Form::Zero();
    for (int i = 0; i < kDim; ++i)
        for (int j = i + 1; j < kDim; ++j) b[(1u << i) | (1u << j)] = 0.5 * (B(j, i) - B(i, j));
    return b;
}

namespace detail {
inline Mat6 a_endo_raw(const Vec6& x) {
    const auto& m = model();
    Mat6 M;
    for (int j = 0; j < kDim; ++j)
        for (int k = 0; k < kDim; ++k)
            M(k, j) = -eval3(m.psi_plus, x, unit_vec(j), m.J * unit_vec(k));
    return M;
}

// Sign of A fixed by requiring A_{A_X Y} = X^Y - JX^JY and A_{X*} psi+ = -2 X^omega
// on the frame vectors. Returns +1 or -1; throws if neither sign works.
inline double a_sign() {
    static const double s = [] {
        const auto& m = model();
        for (double sg : {1.0, -1.0}) {
            double err = 0.0;
            for (int i = 0; i < kDim; ++i) {
                Vec6 x = unit_vec(i);
                Mat6 Ax = sg * a_endo_raw(x);
                err = std::max(err, (induced(Ax, m.psi_plus) + 2.0 * wedge(one_form(x), m.omega))
                                        .cwiseAbs()
                                        .maxCoeff());
                for (int j = 0; j < kDim; ++j) {
                    Vec6 y = unit_vec(j);
                    Mat6 lhs = sg * a_endo_raw(Ax * y);
                    Mat6 rhs = wedge_endo(x, y) - wedge_endo(m.J * x, m.J * y);
                    err = std::max(err, (lhs - rhs).cwiseAbs().maxCoeff());
                }
            }
            if (err < 1e-12) return sg;
        }
        throw std::logic_error("A-tensor calibration failed for both signs");
    }();
    return s;
}
}  // namespace detail

// A_X, with g(A_X Y, Z) = -psi+(X, Y, JZ) up to the calibrated sign.
inline Mat6 a_endo(const Vec6& x) { return detail::a_sign() * detail::a_endo_raw(x); }

inline const std::array<Mat6, 6>& a_frame() {
    static const std::array<Mat6, 6> a = [] {
        std::array<Mat6, 6> r;
        for (int i = 0; i < kDim; ++i) r[i] = a_endo(unit_vec(i));
        return r;
    }();
    return a;
}

// A_Z A_X Y together with its closed form; both are returned for comparison.
struct AzAx {
    Vec6 direct, closed_form;
};
inline AzAx a_z_a_x(const Vec6& z, const Vec6& x, const Vec6& y) {
    const Mat6& J = model().J;
    AzAx r;
    r.direct = a_endo(z) * (a_endo(x) * y);
    r.closed_form = -x.dot(z) * y + y.dot(z) * x + (J * x).dot(z) * (J * y) - (J * y).dot(z) * (J * x);
    return r;
}

// ---------------------------------------------------------------------------
// Vectorized endomorphisms.

inline Eigen::Matrix<double, 36, 1> vec_r(const Mat6& M) {
    Eigen::Matrix<double, 36, 1> v;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i) v[6 * k + i] = M(k, i);
    return v;
}
template <class V>
Mat6 unvec_r(const V& v) {
    Mat6 M;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i) M(k, i) = v[6 * k + i];
    return M;
}

// B acting on endomorphisms by the derivation M -> BM - MB.
inline RMat endo_action_matrix(const Mat6& B) {
    RMat I = RMat::Identity(6, 6);
    return rkron(B, I) - rkron(I, B.transpose());
}

// The twisted action of A_X on 2-tensors (A alpha (x) beta - alpha (x) A beta),
// written on endomorphisms: M -> -(A M + M A).
inline RMat tilde_action_matrix(const Mat6& A) {
    RMat I = RMat::Identity(6, 6);
    return -(rkron(A, I) + rkron(I, A.transpose()));
}

// Twisted action on a 2-tensor stored as T(a,b) = coefficient of e_a (x) e_b.
inline Mat6 tilde_action(const Vec6& x, const Mat6& T) {
    Mat6 A = a_endo(x);
    return A * T - T * A.transpose();
}

// Right multiplication M -> M C on row-major vectors.
inline RMat right_mult_matrix(const Mat6& C) {
    return rkron(RMat::Identity(6, 6), C.transpose());
}
inline RMat left_mult_matrix(const Mat6& C) { return rkron(C, RMat::Identity(6, 6)); }

// 64x36 map M -> M_* u.
inline RMat star_on_matrix(const Form& u) {
    RMat S(kForms, 36);
    for (int k = 0; k < 36; ++k) {
        Eigen::Matrix<double, 36, 1> e = Eigen::Matrix<double, 36, 1>::Zero();
        e[k] = 1.0;
        S.col(k) = induced(unvec_r(e), u);
    }
    return S;
}

// 36x64 map from forms to endomorphisms (only the 2-form part contributes).
inline RMat endo_of_2form_matrix() {
    RMat F = RMat::Zero(36, kForms);
    for (int I = 0; I < kForms; ++I) {
        if (degree_of(I) != 2) continue;
        Form e = Form::Zero();
        e[I] = 1.0;
        F.col(I) = vec_r(endo_of_2form(e));
    }
    return F;
}

// 64x36 map from endomorphisms to the 2-form of their skew part.
inline RMat two_form_of_endo_matrix() {
    RMat F(kForms, 36);
    for (int k = 0; k < 36; ++k) {
        Eigen::Matrix<double, 36, 1> e = Eigen::Matrix<double, 36, 1>::Zero();
        e[k] = 1.0;
        F.col(k) = two_form_of_endo(unvec_r(e));
    }
    return F;
}

// 64x6 embedding of vectors as 1-forms, and its transpose as extraction.
inline RMat one_form_embedding() {
    RMat V = RMat::Zero(kForms, 6);
    for (int i = 0; i < 6; ++i) V(1u << i, i) = 1.0;
    return V;
}

// ---------------------------------------------------------------------------
// Sub-bundle bases (orthonormal columns).

struct Su3Bases {
    RMat lambda11_0;   // 64 x 8: primitive (1,1)-forms
    RMat lambda20;     // 64 x 6: image of y -> y ⌟ psi+ (orthonormalized)
    RMat lambda3_12;   // 64 x 12: primitive (2,1)+(1,2)-forms
    RMat sym_plus0;    // 36 x 8: symmetric, commuting with J, trace-free
    RMat sym_minus;    // 36 x 12: symmetric, anticommuting with J
    RMat sym0;         // 36 x 20: symmetric trace-free
};

inline Su3Bases build_bases() {
    const auto& m = model();
    Su3Bases b;
    RMat P2 = degree_basis(2);
    RMat C(kForms, 6);
    for (int i = 0; i < 6; ++i) C.col(i) = contract(unit_vec(i), m.psi_plus);
    b.lambda20 = orthonormal_span(C);
    // complement of the omega line and of the contraction image inside degree 2
    RMat cons(1 + 6, 15);
    cons.row(0) = m.omega.transpose() * P2;
    cons.bottomRows(6) = C.transpose() * P2;
    b.lambda11_0 = P2 * real_kernel(cons);

    RMat T = RMat::Zero(36, 36);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) T(6 * i + j, 6 * j + i) = 1.0;
    RMat Id36 = RMat::Identity(36, 36);
    RMat tr = vec_r(Mat6::Identity()).transpose();
    RMat comm = endo_action_matrix(m.J);
    RMat anti = rkron(m.J, RMat::Identity(6, 6)) + rkron(RMat::Identity(6, 6), m.J.transpose());
    {
        RMat S(36 + 36 + 1, 36);
        S << Id36 - T, comm, tr;
        b.sym_plus0 = real_kernel(S);
    }
    {
        RMat S(72, 36);
        S << Id36 - T, anti;
        b.sym_minus = real_kernel(S);
    }
    {
        RMat S(37, 36);
        S << Id36 - T, tr;
        b.sym0 = real_kernel(S);
    }
    b.lambda3_12 = orthonormal_span(RMat(star_on_matrix(m.psi_plus) * b.sym_minus));
    return b;
}

inline const Su3Bases& bases() {
    static const Su3Bases b = build_bases();
    return b;
}

// ---------------------------------------------------------------------------
// Splittings.

struct Lambda2Split {
    double lambda = 0.0;
    Vec6 y = Vec6::Zero();
    Form eta0 = Form::Zero();
    double reassembly_residual = 0.0;
};

inline Lambda2Split split_lambda2(const Form& a) {
    require_degree(a, 2, "split_lambda2");
    const auto& m = model();
    Lambda2Split s;
    s.lambda = inner(a, m.omega) / inner(m.omega, m.omega);
    RMat C(kForms, 6);
    for (int i = 0; i < 6; ++i) C.col(i) = contract(unit_vec(i), m.psi_plus);
    // the contraction map is a multiple (sqrt 2) of an isometry, so least squares is exact
    s.y = (C.transpose() * C).ldlt().solve(C.transpose() * a);
    Form ypart = contract(s.y, m.psi_plus);
    s.eta0 = a - s.lambda * m.omega - ypart;
    s.reassembly_residual =
        (s.lambda * m.omega + ypart + s.eta0 - a).cwiseAbs().maxCoeff();
    return s;
}

struct Lambda3Split {
    Vec6 alpha = Vec6::Zero();
    double a_plus = 0.0, a_minus = 0.0;
    Mat6 s = Mat6::Zero();
    double reassembly_residual = 0.0;
    // norms of the three non-(2,1)+(1,2) components
    double norm_alpha_part = 0.0, norm_plus_part = 0.0, norm_minus_part = 0.0;
};

inline Lambda3Split split_lambda3(const Form& a) {
    require_degree(a, 3, "split_lambda3");
    const auto& m = model();
    Lambda3Split r;
    RMat W(kForms, 6);
    for (int i = 0; i < 6; ++i) W.col(i) = wedge(one_form(unit_vec(i)), m.omega);
    r.alpha = (W.transpose() * W).ldlt().solve(W.transpose() * a);
    r.a_plus = inner(a, m.psi_plus) / inner(m.psi_plus, m.psi_plus);
    r.a_minus = inner(a, m.psi_minus) / inner(m.psi_minus, m.psi_minus);
    const RMat& Bm = bases().sym_minus;
    RMat Sp = star_on_matrix(m.psi_plus) * Bm;
    Eigen::VectorXd c = (Sp.transpose() * Sp).ldlt().solve(Sp.transpose() * a);
    r.s = unvec_r(Bm * c);
    Form ap = wedge(one_form(r.alpha), m.omega);
    Form sp = induced(r.s, m.psi_plus);
    r.norm_alpha_part = ap.norm();
    r.norm_plus_part = std::abs(r.a_plus) * m.psi_plus.norm();
    r.norm_minus_part = std::abs(r.a_minus) * m.psi_minus.norm();
    r.reassembly_residual =
        (ap + r.a_plus * m.psi_plus + r.a_minus * m.psi_minus + sp - a).cwiseAbs().maxCoeff();
    return r;
}

struct SymSplit {
    Mat6 h = Mat6::Zero();
    double trace_part = 0.0;
    Mat6 s = Mat6::Zero();
};

inline SymSplit sym_split(const Mat6& H) {
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("sym_split: input is not symmetric");
    const Mat6& J = model().J;
    SymSplit r;
    Mat6 plus = 0.5 * (H - J * H * J);
    r.s = 0.5 * (H + J * H * J);
    r.trace_part = plus.trace();
    r.h = plus - (r.trace_part / 6.0) * Mat6::Identity();
    return r;
}

// phi(X,Y) = g(J h X, Y) and its inverse on primitive (1,1)-forms.
inline Form phi_of_h(const Mat6& h) { return two_form_of_endo(model().J * h); }
inline Mat6 h_of_phi(const Form& phi) { return -model().J * endo_of_2form(phi); }

// Classification predicates.
inline bool is_symmetric(const Mat6& M, double tol = 1e-12) {
    return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol;
}
inline bool is_skew(const Mat6& M, double tol = 1e-12) {
    return (M + M.transpose()).cwiseAbs().maxCoeff() <= tol;
}
inline bool commutes_with_J(const Mat6& M, double tol = 1e-12) {
    const Mat6& J = model().J;
    return (M * J - J * M).cwiseAbs().maxCoeff() <= tol;
}
inline bool anticommutes_with_J(const Mat6& M, double tol = 1e-12) {
    const Mat6& J = model().J;
    return (M * J + J * M).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace nkspin

#pragma once
// S^3 x S^3 = SU(2) x SU(2) in a global left-invariant orthonormal frame:
// structure constants, Levi-Civita and Hermitian connection matrices,
// curvature tensors, and the matrix-coefficient representations used for
// Fourier-mode sections.
//
// Generators E_1..E_6 of su(2)+su(2) satisfy [E_1,E_2] = 2E_3 (cyclic) in
// each factor. A frame is a matrix P whose columns are the frame vectors in
// the E-basis. Connection matrices: conn[i](k,j) = g(nabla_{e_i} e_j, e_k).
// Curvature: R(i,j,k,l) = g(R(e_i,e_j)e_k, e_l).

#include "su3_model.hpp"

#include <array>
#include <functional>
#include <string>

namespace nkspin {

struct Tensor3 {
    std::array<double, 216> d{};
    double& operator()(int i, int j, int k) { return d[(i * 6 + j) * 6 + k]; }
    double operator()(int i, int j, int k) const { return d[(i * 6 + j) * 6 + k]; }
};

struct Tensor4 {
    std::array<double, 1296> d{};
    double& operator()(int i, int j, int k, int l) { return d[((i * 6 + j) * 6 + k) * 6 + l]; }
    double operator()(int i, int j, int k, int l) const { return d[((i * 6 + j) * 6 + k) * 6 + l]; }
    // The endomorphism R(e_i, e_j) as a matrix: M(l,k) = R(i,j,k,l).
    Mat6 endo(int i, int j) const {
        Mat6 M;
        for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l) M(l, k) = (*this)(i, j, k, l);
        return M;
    }
};

enum class MetricKind { nearly_kahler, round_product };

inline std::string metric_name(MetricKind k) {
    return k == MetricKind::nearly_kahler ? "nearly_kahler" : "round_product";
}

struct FrameGeometry {
    MetricKind kind = MetricKind::round_product;
    Mat6 metric_E = Mat6::Identity();  // Gram matrix of the metric in the E-basis
    Mat6 P = Mat6::Identity();         // frame vectors in the E-basis
    Tensor3 c;                         // c(i,j,k) = g([e_i,e_j], e_k)
    Tensor3 Gamma;                     // Gamma(i,j,k) = g(nabla_{e_i} e_j, e_k)
    std::array<Mat6, 6> conn{};        // Levi-Civita
    std::array<Mat6, 6> conn_bar{};    // Hermitian (nearly Kahler only; equals conn otherwise)
    std::array<Mat6, 6> A{};           // J(nabla_{e_i} J) computed from the connection
    Tensor4 R, Rbar;
    double ricci_scale = 1.0;          // factor applied to the metric to reach Ric = 5g
    double phase_angle = 0.0;          // rotation of the (e5,e6)-plane aligning nabla omega with psi+
    bool nearly_kahler() const { return kind == MetricKind::nearly_kahler; }
};

inline Tensor3 group_structure_constants() {
    Tensor3 c;
    for (int off : {0, 3})
        for (auto [a, b, d] : {std::array<int, 3>{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}) {
            c(off + a, off + b, off + d) = 2.0;
            c(off + b, off + a, off + d) = -2.0;
        }
    return c;
}

inline Tensor3 frame_structure_constants(const Mat6& P) {
    Tensor3 cE = group_structure_constants();
    Mat6 Pinv = P.inverse();
    Tensor3 c;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Vec6 br = Vec6::Zero();  // [e_i, e_j] in the E-basis
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b) {
                    double pij = P(a, i) * P(b, j);
                    if (pij == 0.0) continue;
                    for (int d = 0; d < 6; ++d) br[d] += pij * cE(a, b, d);
                }
            Vec6 f = Pinv * br;
            for (int k = 0; k < 6; ++k) c(i, j, k) = f[k];
        }
    return c;
}

// Koszul formula for a left-invariant orthonormal frame.
inline Tensor3 levi_civita(const Tensor3& c) {
    Tensor3 G;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) G(i, j, k) = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
    return G;
}

inline std::array<Mat6, 6> connection_matrices(const Tensor3& G) {
    std::array<Mat6, 6> m;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) m[i](k, j) = G(i, j, k);
    return m;
}

inline Tensor4 curvature(const std::array<Mat6, 6>& conn, const Tensor3& c) {
    Tensor4 R;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Mat6 M = conn[i] * conn[j] - conn[j] * conn[i];
            for (int k = 0; k < 6; ++k) M -= c(i, j, k) * conn[k];
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) R(i, j, k, l) = M(l, k);
        }
    return R;
}

inline Mat6 ricci(const Tensor4& R) {
    Mat6 Ric = Mat6::Zero();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) Ric(j, k) += R(i, j, k, i);
    return Ric;
}

inline double scalar_curvature(const Tensor4& R) { return ricci(R).trace(); }

// (nabla_{e_i} omega)(e_j, e_k) for omega = g(J.,.) constant in the frame.
inline Tensor3 nabla_omega(const std::array<Mat6, 6>& conn) {
    const Mat6& J = model().J;
    Mat6 W = J.transpose();  // omega(a,b) = a^T W b
    Tensor3 N;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                N(i, j, k) = -conn[i].col(j).dot(W.col(k)) - W.row(j).dot(conn[i].col(k));
    return N;
}

namespace detail {

// The 3-symmetric presentation SU(2)^3 / diag SU(2): the tangent space is
// m = {(X,Y,Z) : X+Y+Z = 0}, identified with su(2)+su(2) through (X-Z, Y-Z).
// The metric is the restricted negative Killing form (up to scale) and J is
// (2 sigma + Id)/sqrt(3), sigma the cyclic permutation of the three factors.
inline void three_symmetric_structure(Mat6& G, Mat6& JE) {
    using M3 = Eigen::Matrix3d;
    M3 I = M3::Identity(), Z = M3::Zero();
    G << (2.0 / 3.0) * I, (-1.0 / 3.0) * I, (-1.0 / 3.0) * I, (2.0 / 3.0) * I;
    Eigen::Matrix<double, 9, 6> T;
    T << (2.0 / 3.0) * I, (-1.0 / 3.0) * I, (-1.0 / 3.0) * I, (2.0 / 3.0) * I, (-1.0 / 3.0) * I,
        (-1.0 / 3.0) * I;
    Eigen::Matrix<double, 9, 9> Jm;
    Jm << I, 2 * I, Z, Z, I, 2 * I, 2 * I, Z, I;
    Jm /= std::sqrt(3.0);
    Eigen::Matrix<double, 6, 9> B;
    B << I, Z, -I, Z, I, -I;
    JE = B * Jm * T;
}

inline Mat6 adapted_frame(const Mat6& G, const Mat6& JE) {
    auto ip = [&](const Vec6& a, const Vec6& b) { return a.dot(G * b); };
    std::vector<Vec6> vs;
    for (int c = 0; c < 6 && vs.size() < 6; ++c) {
        Vec6 v = unit_vec(c);
        for (const auto& w : vs) v -= ip(v, w) * w;
        double n = std::sqrt(ip(v, v));
        if (n < 1e-6) continue;
        v /= n;
        vs.push_back(v);
        vs.push_back(JE * v);
    }
    Mat6 P;
    for (int i = 0; i < 6; ++i) P.col(i) = vs[i];
    return P;
}

}  // namespace detail

inline void finish_geometry(FrameGeometry& g) {
    g.c = frame_structure_constants(g.P);
    g.Gamma = levi_civita(g.c);
    g.conn = connection_matrices(g.Gamma);
    g.R = curvature(g.conn, g.c);
    if (g.nearly_kahler()) {
        const Mat6& J = model().J;
        for (int i = 0; i < 6; ++i) {
            g.A[i] = J * (g.conn[i] * J - J * g.conn[i]);
            g.conn_bar[i] = g.conn[i] - 0.5 * g.A[i];
        }
        g.Rbar = curvature(g.conn_bar, g.c);
    } else {
        for (int i = 0; i < 6; ++i) {
            g.A[i].setZero();
            g.conn_bar[i] = g.conn[i];
        }
        g.Rbar = g.R;
    }
}

inline FrameGeometry build_nk_geometry() {
    FrameGeometry g;
    g.kind = MetricKind::nearly_kahler;
    Mat6 G, JE;
    detail::three_symmetric_structure(G, JE);
    if ((JE * JE + Mat6::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
        (JE.transpose() * G * JE - G).cwiseAbs().maxCoeff() > 1e-12)
        throw std::logic_error("nearly Kahler construction: J is not an orthogonal complex structure");
    Mat6 P = detail::adapted_frame(G, JE);
    // Ricci calibration: scaling the metric by s leaves Ric unchanged as a
    // (0,2)-tensor, so in the rescaled orthonormal frame it is divided by s.
    double total = 1.0;
    for (int it = 0; it < 2; ++it) {
        Tensor3 c = frame_structure_constants(P);
        Mat6 Ric = ricci(curvature(connection_matrices(levi_civita(c)), c));
        double lam = Ric(0, 0) / 5.0;
        if (!(lam > 0)) throw std::logic_error("nearly Kahler calibration: Ricci not positive");
        P /= std::sqrt(lam);
        G *= lam;
        total *= lam;
    }
    // Phase: nabla omega = Re(e^{i theta} Omega); rotate (e5,e6) by -theta.
    {
        Tensor3 c = frame_structure_constants(P);
        Tensor3 N = nabla_omega(connection_matrices(levi_civita(c)));
        double a = N(0, 2, 4), b = N(0, 2, 5);
        double theta = std::atan2(-b, a);
        double phi = -theta;
        Mat6 Rot = Mat6::Identity();
        Rot(4, 4) = std::cos(phi);
        Rot(5, 4) = std::sin(phi);
        Rot(4, 5) = -std::sin(phi);
        Rot(5, 5) = std::cos(phi);
        P = P * Rot;
        g.phase_angle = phi;
    }
    g.metric_E = G;
    g.P = P;
    g.ricci_scale = total;
    finish_geometry(g);
    return g;
}

inline FrameGeometry build_round_geometry() {
    FrameGeometry g;
    g.kind = MetricKind::round_product;
    g.metric_E = Mat6::Identity();
    g.P = Mat6::Identity();
    finish_geometry(g);
    return g;
}

inline const FrameGeometry& geometry(MetricKind k) {
    static const FrameGeometry nk = build_nk_geometry();
    static const FrameGeometry rd = build_round_geometry();
    return k == MetricKind::nearly_kahler ? nk : rd;
}

// ---------------------------------------------------------------------------
// Curvature identities.

// Right-hand side of the comparison between the Levi-Civita and Hermitian curvature.
inline Tensor4 curvature_difference_model() {
    const Mat6& J = model().J;
    Tensor4 D;
    for (int w = 0; w < 6; ++w)
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y)
                for (int z = 0; z < 6; ++z) {
                    auto g = [](int a, int b) { return a == b ? 1.0 : 0.0; };
                    auto gJ = [&](int a, int b) { return J(b, a); };  // g(e_a, J e_b)
                    double v = g(y, w) * g(x, z) - g(x, y) * g(z, w) - 3.0 * gJ(y, w) * gJ(z, x) +
                               3.0 * gJ(y, x) * gJ(z, w) + 2.0 * gJ(x, w) * gJ(z, y);
                    // terms g(JX,Z) = g(Z,JX) etc.
                    D(w, x, y, z) = -0.25 * v;
                }
    return D;
}

// max |R - (Rbar + difference)| over all index quadruples.
inline double curvature_comparison_residual(const FrameGeometry& g) {
    Tensor4 D = curvature_difference_model();
    double r = 0.0;
    for (int n = 0; n < 1296; ++n) r = std::max(r, std::abs(g.R.d[n] - g.Rbar.d[n] - D.d[n]));
    return r;
}

// max over X,Y,Z frame vectors of the Hermitian Bianchi defect identity.
inline double hermitian_bianchi_residual(const FrameGeometry& g) {
    const Mat6& J = model().J;
    double r = 0.0;
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            for (int z = 0; z < 6; ++z) {
                Vec6 X = unit_vec(x), Y = unit_vec(y), Z = unit_vec(z);
                Vec6 lhs = g.Rbar.endo(x, y) * Z + g.Rbar.endo(y, z) * X + g.Rbar.endo(z, x) * Y;
                Vec6 rhs = 2.0 * ((J * X).dot(Y) * (J * Z) + (J * Y).dot(Z) * (J * X) + (J * Z).dot(X) * (J * Y));
                r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
            }
    return r;
}

inline double levi_civita_bianchi_residual(const FrameGeometry& g) {
    double r = 0.0;
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            for (int z = 0; z < 6; ++z) {
                Vec6 v = g.R.endo(x, y) * unit_vec(z) + g.R.endo(y, z) * unit_vec(x) +
                         g.R.endo(z, x) * unit_vec(y);
                r = std::max(r, v.cwiseAbs().maxCoeff());
            }
    return r;
}

// q(R) = 1/4 sum R_ijkl rho(e_i^e_j) rho(e_k^e_l) for a representation rho of so(6).
inline CMat curvature_endomorphism(const Tensor4& R, const std::function<CMat(const Mat6&)>& rho) {
    std::array<std::array<CMat, 6>, 6> L;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) L[i][j] = rho(wedge_endo(unit_vec(i), unit_vec(j)));
    const Eigen::Index n = L[0][1].rows();
    CMat q = CMat::Zero(n, n);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) {
                    double v = R(i, j, k, l);
                    if (std::abs(v) > 1e-15) q += 0.25 * v * (L[i][j] * L[k][l]);
                }
    return q;
}

// ---------------------------------------------------------------------------
// Matrix-coefficient representations of SU(2) x SU(2).

struct Mode {
    double j1 = 0.0, j2 = 0.0;
    int dim() const { return int(std::lround(2 * j1 + 1)) * int(std::lround(2 * j2 + 1)); }
    bool invariant() const { return j1 == 0.0 && j2 == 0.0; }
    std::string label() const;
    bool operator==(const Mode& o) const { return j1 == o.j1 && j2 == o.j2; }
};

inline std::string half_label(double j) {
    long twice = std::lround(2 * j);
    return twice % 2 ? std::to_string(twice) + "/2" : std::to_string(twice / 2);
}

inline std::string Mode::label() const {
    if (invariant()) return "invariant";
    return "(" + half_label(j1) + "," + half_label(j2) + ")";
}

// -2i J_a for spin j, so that [E_1,E_2] = 2E_3 is represented.
inline std::array<CMat, 3> spin_rep(double j) {
    int d = int(std::lround(2 * j + 1));
    CMat Jz = CMat::Zero(d, d), Jp = CMat::Zero(d, d);
    for (int k = 0; k < d; ++k) Jz(k, k) = j - k;
    for (int k = 1; k < d; ++k) {
        double m = j - k;
        Jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    CMat Jx = (Jp + Jp.adjoint()) / 2.0;
    CMat Jy = (Jp - Jp.adjoint()) / cplx(0, 2);
    const cplx m2i(0, -2);
    return {m2i * Jx, m2i * Jy, m2i * Jz};
}

inline std::array<CMat, 6> group_rep(const Mode& m) {
    auto a = spin_rep(m.j1), b = spin_rep(m.j2);
    const Eigen::Index d1 = a[0].rows(), d2 = b[0].rows();
    std::array<CMat, 6> r;
    for (int k = 0; k < 3; ++k) {
        r[k] = kron(a[k], eye(d2));
        r[3 + k] = kron(eye(d1), b[k]);
    }
    return r;
}

// d pi(e_i) for the frame vectors.
inline std::array<CMat, 6> frame_rep(const FrameGeometry& g, const Mode& m) {
    auto E = group_rep(m);
    std::array<CMat, 6> r;
    for (int i = 0; i < 6; ++i) {
        r[i] = CMat::Zero(E[0].rows(), E[0].cols());
        for (int a = 0; a < 6; ++a)
            if (g.P(a, i) != 0.0) r[i] += g.P(a, i) * E[a];
    }
    return r;
}

}  // namespace nkspin

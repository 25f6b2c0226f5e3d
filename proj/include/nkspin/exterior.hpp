#pragma once
// Exterior algebra of the oriented Euclidean R^6.
//
// A form is a dense vector of 64 coefficients indexed by bitmask: bit i set
// means e^i is a factor, factors ordered increasingly. The multi-index basis
// is orthonormal for the Gram-determinant inner product, so the pairing of
// forms is the Euclidean dot product of coefficient vectors.

#include <Eigen/Dense>

#include <bit>
#include <initializer_list>
#include <stdexcept>

namespace nkspin {

constexpr int kDim = 6;
constexpr int kForms = 64;
constexpr unsigned kFull = 63;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Form = Eigen::Matrix<double, kForms, 1>;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline int degree_of(unsigned mask) { return std::popcount(mask); }

// Sign of e^I ^ e^J relative to e^{I|J}; zero if I and J overlap.
inline int wedge_sign(unsigned I, unsigned J) {
    if (I & J) return 0;
    int swaps = 0;
    for (int i = 0; i < kDim; ++i)
        if (I >> i & 1u) swaps += std::popcount(J & ((1u << i) - 1u));
    return swaps % 2 ? -1 : 1;
}

inline Form zero_form() { return Form::Zero(); }

inline Form scalar_form(double s) {
    Form f = Form::Zero();
    f[0] = s;
    return f;
}

inline Form wedge(const Form& a, const Form& b) {
    Form c = Form::Zero();
    for (unsigned I = 0; I < kForms; ++I) {
        if (a[I] == 0.0) continue;
        for (unsigned J = 0; J < kForms; ++J) {
            if (b[J] == 0.0) continue;
            int s = wedge_sign(I, J);
            if (s) c[I | J] += s * a[I] * b[J];
        }
    }
    return c;
}

// Basis monomial e^{i1} ^ ... ^ e^{ik} (0-based indices, any order).
inline Form basis_form(std::initializer_list<int> idx) {
    Form f = scalar_form(1.0);
    for (int i : idx) {
        Form e = Form::Zero();
        e[1u << i] = 1.0;
        f = wedge(f, e);
    }
    return f;
}

inline Form one_form(const Vec6& x) {
    Form f = Form::Zero();
    for (int i = 0; i < kDim; ++i) f[1u << i] = x[i];
    return f;
}

inline Vec6 one_form_part(const Form& a) {
    Vec6 x;
    for (int i = 0; i < kDim; ++i) x[i] = a[1u << i];
    return x;
}

inline Form degree_part(const Form& a, int p) {
    Form f = Form::Zero();
    for (unsigned I = 0; I < kForms; ++I)
        if (degree_of(I) == p) f[I] = a[I];
    return f;
}

// Interior product x ⌟ a (antiderivation of degree -1).
inline Form contract(const Vec6& x, const Form& a) {
    Form c = Form::Zero();
    for (unsigned I = 0; I < kForms; ++I) {
        if (a[I] == 0.0) continue;
        for (int i = 0; i < kDim; ++i) {
            if (!(I >> i & 1u)) continue;
            int s = std::popcount(I & ((1u << i) - 1u)) % 2 ? -1 : 1;
            c[I & ~(1u << i)] += s * x[i] * a[I];
        }
    }
    return c;
}

inline Vec6 unit_vec(int i) {
    Vec6 e = Vec6::Zero();
    e[i] = 1.0;
    return e;
}

// Hodge star for the orientation e^1 ^ ... ^ e^6: a ^ *b = <a,b> vol.
inline Form hodge(const Form& a) {
    Form c = Form::Zero();
    for (unsigned I = 0; I < kForms; ++I)
        if (a[I] != 0.0) c[kFull ^ I] += wedge_sign(I, kFull ^ I) * a[I];
    return c;
}

inline double inner(const Form& a, const Form& b) { return a.dot(b); }

// Induced derivation action B_* u = -sum_i B^T(e_i) ^ (e_i ⌟ u).
inline Form induced(const Mat6& B, const Form& a) {
    Form c = Form::Zero();
    for (int i = 0; i < kDim; ++i) {
        Vec6 col = B.transpose().col(i);
        c -= wedge(one_form(col), contract(unit_vec(i), a));
    }
    return c;
}

// 64x64 matrix of a linear map on forms.
template <class F>
RMat form_map_matrix(F&& f) {
    RMat M(kForms, kForms);
    for (int I = 0; I < kForms; ++I) {
        Form e = Form::Zero();
        e[I] = 1.0;
        M.col(I) = f(e);
    }
    return M;
}

inline RMat wedge_left_matrix(const Form& a) {
    return form_map_matrix([&](const Form& u) { return wedge(a, u); });
}
inline RMat wedge_right_matrix(const Form& a) {
    return form_map_matrix([&](const Form& u) { return wedge(u, a); });
}
inline RMat contract_matrix(const Vec6& x) {
    return form_map_matrix([&](const Form& u) { return contract(x, u); });
}
inline RMat hodge_matrix() { return form_map_matrix([](const Form& u) { return hodge(u); }); }
inline RMat induced_matrix(const Mat6& B) {
    return form_map_matrix([&](const Form& u) { return induced(B, u); });
}

// Columns: orthonormal basis of the degree-p forms inside the 64-space.
inline RMat degree_basis(int p) {
    int n = 0;
    for (unsigned I = 0; I < kForms; ++I) n += degree_of(I) == p;
    RMat P = RMat::Zero(kForms, n);
    int c = 0;
    for (unsigned I = 0; I < kForms; ++I)
        if (degree_of(I) == p) P(I, c++) = 1.0;
    return P;
}

inline void require_degree(const Form& a, int p, const char* what) {
    double off = (a - degree_part(a, p)).cwiseAbs().maxCoeff();
    if (off > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()))
        throw std::invalid_argument(std::string(what) + ": form has components outside degree " +
                                    std::to_string(p));
}

}  // namespace nkspin

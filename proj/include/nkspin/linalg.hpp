#pragma once
// Dense linear-algebra helpers: Kronecker products, SVD rank decisions,
// kernels with spectral-gap certificates, and subspace angles.

#include "exterior.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nkspin {

constexpr double kRankTol = 1e-8;

template <class A, class B>
CMat kron(const A& a, const B& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                cplx(a(i, j)) * b.template cast<cplx>();
    return r;
}

inline RMat rkron(const RMat& a, const RMat& b) {
    RMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

inline CMat eye(Eigen::Index n) { return CMat::Identity(n, n); }

struct Kernel {
    CMat basis;                 // orthonormal columns
    std::vector<double> sv;     // singular values, descending
    int rank = 0;
    double spectral_gap = std::numeric_limits<double>::infinity();
    double sigma_max = 0.0;
    double smallest_nonzero = 0.0;  // smallest singular value counted as nonzero
    double largest_zero = 0.0;      // largest singular value counted as zero
    int dim() const { return static_cast<int>(basis.cols()); }
};

// Kernel of M with the rule: singular values below tol * sigma_max are zero.
// The singular values of a wide matrix are padded with zeros up to the column
// count so that the kernel dimension is cols - rank.
inline Kernel kernel(const CMat& M, double tol = kRankTol) {
    Kernel k;
    const Eigen::Index n = M.cols();
    if (n == 0) return k;
    if (M.rows() == 0) {
        k.basis = eye(n);
        k.sv.assign(n, 0.0);
        return k;
    }
    Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    k.sv.assign(n, 0.0);
    for (Eigen::Index i = 0; i < s.size(); ++i) k.sv[i] = s[i];
    k.sigma_max = k.sv.empty() ? 0.0 : k.sv[0];
    const double cut = tol * std::max(k.sigma_max, 1e-300);
    int r = 0;
    while (r < n && k.sv[r] > cut) ++r;
    k.rank = r;
    k.basis = svd.matrixV().rightCols(n - r);
    k.smallest_nonzero = r > 0 ? k.sv[r - 1] : 0.0;
    k.largest_zero = r < n ? k.sv[r] : 0.0;
    if (r == 0) {
        k.spectral_gap = 0.0;
    } else if (r < n) {
        const double floor = std::numeric_limits<double>::epsilon() * k.sigma_max;
        k.spectral_gap = k.smallest_nonzero / std::max(k.largest_zero, floor);
    }
    return k;
}

inline Kernel kernel(const RMat& M, double tol = kRankTol) {
    return kernel(CMat(M.cast<cplx>()), tol);
}

inline CMat vstack(std::initializer_list<CMat> blocks) {
    Eigen::Index rows = 0, cols = -1;
    for (const auto& b : blocks) {
        rows += b.rows();
        if (cols < 0) cols = b.cols();
        if (b.cols() != cols) throw std::invalid_argument("vstack: column mismatch");
    }
    CMat r(rows, std::max<Eigen::Index>(cols, 0));
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        r.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return r;
}

inline CMat vstack(const std::vector<CMat>& blocks) {
    Eigen::Index rows = 0, cols = blocks.empty() ? 0 : blocks[0].cols();
    for (const auto& b : blocks) rows += b.rows();
    CMat r(rows, cols);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        r.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return r;
}

// Orthonormal basis of the column span (rank decided as in kernel()).
inline CMat orthonormal_span(const CMat& M, double tol = kRankTol) {
    if (M.cols() == 0) return CMat(M.rows(), 0);
    Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return CMat(M.rows(), 0);
    int r = 0;
    while (r < s.size() && s[r] > tol * s[0]) ++r;
    return svd.matrixU().leftCols(r);
}

inline RMat orthonormal_span(const RMat& M, double tol = kRankTol) {
    if (M.cols() == 0) return RMat(M.rows(), 0);
    Eigen::BDCSVD<RMat> svd(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return RMat(M.rows(), 0);
    int r = 0;
    while (r < s.size() && s[r] > tol * s[0]) ++r;
    return svd.matrixU().leftCols(r);
}

// Real null space of a real matrix.
inline RMat real_kernel(const RMat& M, double tol = kRankTol) {
    const Eigen::Index n = M.cols();
    if (M.rows() == 0) return RMat::Identity(n, n);
    Eigen::BDCSVD<RMat> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    int r = 0;
    while (r < s.size() && s[r] > tol * std::max(smax, 1e-300)) ++r;
    return svd.matrixV().rightCols(n - r);
}

// Principal angles (radians, ascending) between the column spans of A and B.
inline std::vector<double> subspace_angles(const CMat& A, const CMat& B) {
    CMat qa = orthonormal_span(A), qb = orthonormal_span(B);
    if (qa.cols() == 0 || qb.cols() == 0) return {};
    Eigen::JacobiSVD<CMat> svd(qa.adjoint() * qb);
    std::vector<double> out;
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back(std::acos(std::clamp(s[i], 0.0, 1.0)));
    // acos loses accuracy near zero angle; use the sine form for the small ones.
    CMat proj = qb - qa * (qa.adjoint() * qb);
    Eigen::JacobiSVD<CMat> svd2(proj);
    const auto& s2 = svd2.singularValues();
    std::vector<double> sines(s2.data(), s2.data() + s2.size());
    std::sort(sines.begin(), sines.end());
    std::sort(out.begin(), out.end());
    for (size_t i = 0; i < out.size() && i < sines.size(); ++i)
        if (out[i] < 0.5) out[i] = std::asin(std::clamp(sines[i], 0.0, 1.0));
    return out;
}

inline double max_abs(const CMat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const RMat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace nkspin

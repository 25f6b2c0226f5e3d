#pragma once
// Infinitesimal deformations of the Killing spinor on nearly Kahler S^3 x S^3:
// the Laplace eigenspace E(lambda) on co-closed primitive (1,1)-forms, the
// Killing spinor space K+, the deformation space computed directly as a kernel,
// and the chain phi -> (sigma, beta, Psi) relating the two.

#include <random>

#include "rarita.hpp"

namespace nkspin {

constexpr double kDeformationEigenvalue = 12.0;

// Pointwise maps used by the deformation chain.
namespace deformation_maps {

// M -> sum_i gamma(M e_i) kappa (x) e_i, 48 x 36 on row-major endomorphisms.
inline const CMat& psi_of_endo() {
    static const CMat L = [] {
        CMat r = CMat::Zero(48, 36);
        const Spinor& k = kappa();
        for (int i = 0; i < 6; ++i)
            for (int kk = 0; kk < 6; ++kk) r.block(8 * i, 6 * kk + i, 8, 1) = gammas()[kk] * k;
        return r;
    }();
    return L;
}

// phi -> h = -J B_phi, 36 x 64.
inline const RMat& h_of_two_form() {
    static const RMat H = left_mult_matrix(-model().J) * endo_of_2form_matrix();
    return H;
}

// 3-form -> S in Sym^- with S^* psi+ equal to its (2,1)+(1,2)_0 part, 36 x 64.
inline const RMat& s_of_three_form() {
    static const RMat S = [] {
        const RMat& Bm = bases().sym_minus;
        RMat Sp = star_on_matrix(model().psi_plus) * Bm;
        return RMat(Bm * Sp.completeOrthogonalDecomposition().pseudoInverse());
    }();
    return S;
}

// Orthogonal projector of 3-forms (64 x 64) onto the (2,1)+(1,2)_0 part.
inline const RMat& lambda3_12_projector() {
    static const RMat Q = [] {
        const RMat& B = bases().lambda3_12;
        return RMat(B * B.transpose());
    }();
    return Q;
}

}  // namespace deformation_maps

// ---------------------------------------------------------------------------

struct EigenReport {
    double eigenvalue = 0.0;
    Mode mode;
    int multiplicity = 0;
    CMat eigenvectors;              // columns in the forms section space
    std::vector<double> matched;    // matched eigenvalues
    double closest = std::numeric_limits<double>::quiet_NaN();  // closest eigenvalue of the restriction
    std::vector<double> spectrum;   // full spectrum of Delta on the constrained space
    int constrained_dim = 0;
    double invariance_residual = 0.0;  // |Delta Z - Z (Z^* Delta Z)|
    double constraint_residual = 0.0;  // max over eigenvectors of |delta phi| and |phi - pr phi|
    int flagged = 0;                   // matched but rejected by the constraint check
};

// Co-closed primitive (1,1) sections: orthonormal columns.
inline CMat coclosed_primitive11(const SectionSpace& fs, const CMat& delta) {
    CMat N = fs.fib(bases().lambda11_0);
    Kernel k = kernel(CMat(delta * N));
    return N * k.basis;
}

inline EigenReport eigenspace_E(const FrameGeometry& g, double lambda, const Mode& m = {}, double tol = 1e-6) {
    if (!g.nearly_kahler()) throw std::invalid_argument("eigenspace_E: needs the nearly Kahler geometry");
    SectionSpace fs = make_space(g, Fiber::forms, m);
    CMat delta = codifferential(fs), lap = hodge_laplacian(fs);
    CMat Z = coclosed_primitive11(fs, delta);
    EigenReport r;
    r.eigenvalue = lambda;
    r.mode = m;
    r.constrained_dim = int(Z.cols());
    r.eigenvectors = CMat(fs.dim(), 0);
    if (Z.cols() == 0) return r;
    CMat LZ = lap * Z;
    CMat Hz = Z.adjoint() * LZ;
    r.invariance_residual = max_abs(CMat(LZ - Z * Hz));
    Hz = 0.5 * (Hz + Hz.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(Hz);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    CMat P11 = fs.fib(RMat(bases().lambda11_0 * bases().lambda11_0.transpose()));
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
        double mu = es.eigenvalues()[a];
        r.spectrum.push_back(mu);
        if (std::abs(mu - lambda) < best) {
            best = std::abs(mu - lambda);
            r.closest = mu;
        }
        if (std::abs(mu - lambda) >= tol * scale) continue;
        CVec v = Z * es.eigenvectors().col(a);
        double cr = std::max((delta * v).cwiseAbs().maxCoeff(), (v - P11 * v).cwiseAbs().maxCoeff());
        if (cr > 1e-9) {
            ++r.flagged;
            continue;
        }
        r.constraint_residual = std::max(r.constraint_residual, cr);
        r.matched.push_back(mu);
        r.eigenvectors.conservativeResize(Eigen::NoChange, r.eigenvectors.cols() + 1);
        r.eigenvectors.col(r.eigenvectors.cols() - 1) = v;
    }
    r.multiplicity = int(r.eigenvectors.cols());
    return r;
}

struct KillingSpinorSpace {
    Mode mode;
    Kernel kernel;
    double dirac_residual = 0.0;  // |D k + 3 k| over the basis
    int dim() const { return kernel.dim(); }
};

inline KillingSpinorSpace killing_spinor_space(const FrameGeometry& g, const Mode& m = {}, double c = 0.5) {
    SectionSpace ss = make_space(g, Fiber::spinor, m);
    KillingSpinorSpace k;
    k.mode = m;
    k.kernel = kernel(killing_operator(ss, c));
    if (k.dim() > 0) {
        CMat D = dirac(ss);
        k.dirac_residual = max_abs(CMat(D * k.kernel.basis + 6.0 * c * k.kernel.basis));
    }
    return k;
}

// ---------------------------------------------------------------------------

struct KillingDeformation {
    Mode mode;
    CVec phi, sigma, beta, psi;  // forms, forms, endo, spinor-vector sections
    double trace_residual = 0.0;     // tr beta
    double symmetry_residual = 0.0;  // beta - beta^T
    double divergence_residual = 0.0;  // delta beta
    double dirac_residual = 0.0;     // D_TM Psi - 3 Psi
    double chain_residual = 0.0;     // delta sigma + 8 phi
    double split_residual = 0.0;     // d phi outside (2,1)+(1,2)_0
    bool pass(double tol) const {
        return std::max({trace_residual, symmetry_residual, divergence_residual, dirac_residual, chain_residual,
                         split_residual}) < tol;
    }
};

struct DeformationOps {
    SectionSpace fs, es, st;
    CMat d, delta, lap, dE, dtm;
    CMat H, S, L, Q;  // section versions of the pointwise maps

    DeformationOps(const FrameGeometry& g, const Mode& m)
        : fs(make_space(g, Fiber::forms, m)), es(make_space(g, Fiber::endo, m)),
          st(make_space(g, Fiber::spinor_vector, m)) {
        d = exterior_d(fs);
        delta = codifferential(fs);
        lap = d * delta + delta * d;
        dE = endo_divergence(es);
        dtm = dirac(st);
        H = fs.fib(deformation_maps::h_of_two_form());
        S = fs.fib(deformation_maps::s_of_three_form());
        L = fs.fib(deformation_maps::psi_of_endo());
        Q = fs.fib(deformation_maps::lambda3_12_projector());
    }
    // beta(phi) = h(phi) + S(sigma), sigma = -2/3 d phi, as one matrix on forms.
    CMat beta_map() const { return H + S * (-(2.0 / 3.0) * d); }
};

inline KillingDeformation deformation_from_eigenform(const DeformationOps& ops, const CVec& phi, double tol = 1e-8) {
    KillingDeformation k;
    k.mode = ops.fs.mode;
    k.phi = phi;
    const double n = phi.norm();
    const double sc = 1.0 + n;
    CVec lr = ops.lap * phi - kDeformationEigenvalue * phi;
    double pre = std::max((ops.delta * phi).cwiseAbs().maxCoeff(),
                          (phi - ops.fs.fib(RMat(bases().lambda11_0 * bases().lambda11_0.transpose())) * phi)
                              .cwiseAbs()
                              .maxCoeff());
    if (n > 0.0 && (lr.cwiseAbs().maxCoeff() > tol * sc || pre > tol * sc))
        throw std::domain_error("deformation_from_eigenform: input is not a co-closed primitive (1,1) eigenform "
                                "for 12 (eigen residual " + std::to_string(lr.cwiseAbs().maxCoeff()) +
                                ", constraint residual " + std::to_string(pre) + ")");
    k.sigma = -(2.0 / 3.0) * (ops.d * phi);
    k.beta = ops.beta_map() * phi;
    k.psi = ops.L * k.beta;
    const int rd = ops.es.rep_dim;
    for (int r = 0; r < rd; ++r) {
        CVec b = k.beta.segment(36 * r, 36);
        cplx tr = 0.0;
        for (int i = 0; i < 6; ++i) {
            tr += b[7 * i];
            for (int j = 0; j < 6; ++j)
                k.symmetry_residual = std::max(k.symmetry_residual, std::abs(b[6 * i + j] - b[6 * j + i]) / sc);
        }
        k.trace_residual = std::max(k.trace_residual, std::abs(tr) / sc);
    }
    auto mx = [&](const CVec& x) { return x.size() ? x.cwiseAbs().maxCoeff() / sc : 0.0; };
    k.divergence_residual = mx(ops.dE * k.beta);
    k.dirac_residual = mx(CVec(ops.dtm * k.psi - 3.0 * k.psi));
    k.chain_residual = mx(CVec(ops.delta * k.sigma + 8.0 * phi));
    CVec dphi = ops.d * phi;
    k.split_residual = mx(CVec(dphi - ops.Q * dphi));
    return k;
}

inline KillingDeformation deformation_from_eigenform(const FrameGeometry& g, const Mode& m, const CVec& phi,
                                                     double tol = 1e-8) {
    return deformation_from_eigenform(DeformationOps(g, m), phi, tol);
}

// ---------------------------------------------------------------------------

struct DeformationSpaceReport {
    Mode mode;
    int dim_E12 = 0;
    int dim_Kplus = 0;
    int dim_beta = 0;            // symmetric trace-free beta with delta beta = 0, D_TM Psi = 3 Psi
    int dim_deformations = 0;    // dim_beta + dim_Kplus
    double beta_gap = 0.0;
    double kplus_gap = 0.0;
    double eigenvalue_mismatch = 0.0;  // max |mu - 12| over matched eigenvalues
    double closest_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    double chain_residual = 0.0;       // max over E(12) of all chain and Definition residuals
    double intertwining_residual = 0.0;  // (D_TM - 3) L beta(phi) - 1/3 L h((Delta - 12) phi)
    double split_residual = 0.0;         // d phi outside (2,1)+(1,2)_0 on co-closed primitive (1,1)
    double converse_gap = 0.0;  // min over random non-eigenforms of |delta sigma + 8 phi| / |phi|
    double invariance_residual = 0.0;
    double dirac_kplus_residual = 0.0;
    bool pass = false;
    EigenReport eigen;
};

inline DeformationSpaceReport deformation_space_report(const FrameGeometry& g, const Mode& m = {},
                                                       double chain_tol = 1e-8, double eig_tol = 1e-6,
                                                       std::uint64_t seed = 7) {
    if (!g.nearly_kahler()) throw std::invalid_argument("deformation_space_report: needs the nearly Kahler geometry");
    DeformationOps ops(g, m);
    DeformationSpaceReport r;
    r.mode = m;
    r.eigen = eigenspace_E(g, kDeformationEigenvalue, m, eig_tol);
    r.dim_E12 = r.eigen.multiplicity;
    r.closest_eigenvalue = r.eigen.closest;
    r.invariance_residual = r.eigen.invariance_residual;
    for (double mu : r.eigen.matched)
        r.eigenvalue_mismatch = std::max(r.eigenvalue_mismatch, std::abs(mu - kDeformationEigenvalue));

    KillingSpinorSpace kp = killing_spinor_space(g, m);
    r.dim_Kplus = kp.dim();
    r.kplus_gap = kp.kernel.spectral_gap;
    r.dirac_kplus_residual = kp.dirac_residual;

    // Left side computed directly: beta in Sym_0 sections with delta beta = 0 and (D_TM - 3) Psi = 0.
    CMat B0 = ops.es.fib(bases().sym0);
    CMat A = vstack({CMat(ops.dE * B0), CMat((ops.dtm - 3.0 * ops.st.identity()) * ops.L * B0)});
    Kernel kb = kernel(A);
    r.dim_beta = kb.dim();
    r.beta_gap = kb.spectral_gap;
    r.dim_deformations = r.dim_beta + r.dim_Kplus;

    for (Eigen::Index a = 0; a < r.eigen.eigenvectors.cols(); ++a) {
        KillingDeformation k = deformation_from_eigenform(ops, r.eigen.eigenvectors.col(a), chain_tol);
        r.chain_residual = std::max({r.chain_residual, k.trace_residual, k.symmetry_residual, k.divergence_residual,
                                     k.dirac_residual, k.chain_residual, k.split_residual});
    }

    // Identities on the whole co-closed primitive (1,1) space, eigenform or not.
    CMat Z = coclosed_primitive11(ops.fs, ops.delta);
    if (Z.cols() > 0) {
        CMat lhs = (ops.dtm - 3.0 * ops.st.identity()) * ops.L * ops.beta_map() * Z;
        CMat rhs = (1.0 / 3.0) * ops.L * ops.H * (ops.lap - kDeformationEigenvalue * ops.fs.identity()) * Z;
        r.intertwining_residual = max_abs(CMat(lhs - rhs));
        CMat dZ = ops.d * Z;
        r.split_residual = max_abs(CMat(dZ - ops.Q * dZ));

        // Random co-closed primitive (1,1) sections off E(12): the chain must fail there.
        CMat Zoff = Z;
        if (r.eigen.eigenvectors.cols() > 0)
            Zoff -= r.eigen.eigenvectors * (r.eigen.eigenvectors.adjoint() * Z);
        std::mt19937_64 eng(seed);
        std::normal_distribution<double> nd;
        r.converse_gap = std::numeric_limits<double>::infinity();
        if (Zoff.norm() > 1e-8) {
            for (int t = 0; t < 8; ++t) {
                CVec c(Z.cols());
                for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cplx(nd(eng), nd(eng));
                CVec phi = Zoff * c;
                if (phi.norm() < 1e-8) continue;
                phi /= phi.norm();
                CVec sig = -(2.0 / 3.0) * (ops.d * phi);
                r.converse_gap = std::min(r.converse_gap, (ops.delta * sig + 8.0 * phi).norm());
            }
        }
    } else {
        r.converse_gap = std::numeric_limits<double>::infinity();
    }

    r.pass = r.dim_deformations == r.dim_E12 + r.dim_Kplus && r.chain_residual < chain_tol &&
             r.intertwining_residual < chain_tol && r.split_residual < chain_tol &&
             r.eigenvalue_mismatch < eig_tol && r.eigen.flagged == 0;
    return r;
}

}  // namespace nkspin

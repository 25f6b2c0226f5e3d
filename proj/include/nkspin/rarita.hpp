#pragma once
// Rarita-Schwinger fields on S^3 x S^3: kernels of D_TM restricted to S_{3/2}
// on invariant and mode sections, the correspondence with harmonic 3-forms,
// the reduction systems satisfied by the symbols of a field, and the
// positivity estimate for the round product metric.

#include "opcalc.hpp"

namespace nkspin {

struct RaritaKernel {
    MetricKind metric = MetricKind::nearly_kahler;
    Mode mode;
    Kernel kernel;             // ker D_TM ∩ ker Pi
    Kernel kernel_with_twistor;  // additionally ker P^*
    CMat basis;                // columns: kernel vectors (aligned, see below)
    bool ill_conditioned = false;
    std::string basis_provenance;
};

// Factor volume forms e.g. theta^1^theta^2^theta^3 of the first SU(2), in the frame.
inline std::array<Form, 2> factor_volume_forms(const FrameGeometry& g) {
    std::array<Form, 6> th;
    for (int a = 0; a < 6; ++a) th[a] = one_form(g.P.row(a).transpose());
    return {wedge(wedge(th[0], th[1]), th[2]), wedge(wedge(th[3], th[4]), th[5])};
}

struct InvariantHarmonic3 {
    HarmonicForms harmonic;
    std::array<Form, 2> projected_volumes;  // harmonic projections of the factor volumes
};

inline InvariantHarmonic3 invariant_harmonic_3forms(const FrameGeometry& g) {
    SectionSpace fs = make_space(g, Fiber::forms);
    InvariantHarmonic3 h;
    h.harmonic = harmonic_forms(fs, 3);
    auto vols = factor_volume_forms(g);
    for (int a = 0; a < 2; ++a) {
        CVec v = vols[a].cast<cplx>();
        CVec p = h.harmonic.basis * (h.harmonic.basis.adjoint() * v);
        h.projected_volumes[a] = p.real();
    }
    return h;
}

// Section sum_i gamma(S e_i) kappa (x) e_i for S symmetric anticommuting with J.
inline SpinorVector section_from_sym_minus(const Mat6& S) {
    return assemble_spinor_vector(Vec6::Zero(), S.transpose(), Vec6::Zero());
}

struct RaritaSolution {
    SpinorVector section = SpinorVector::Zero();
    SpinorSymbols symbols;
    Form source_form = Form::Zero();
};

// Harmonic 3-form -> Rarita-Schwinger field. Throws if sigma is not harmonic
// or has components outside the primitive (2,1)+(1,2) part.
inline RaritaSolution rs_from_harmonic_3form(const FrameGeometry& g, const Form& sigma, double tol = 1e-9) {
    require_degree(sigma, 3, "rs_from_harmonic_3form");
    RaritaSolution sol;
    sol.source_form = sigma;
    double n = sigma.norm();
    if (n == 0.0) {
        sol.symbols = extract_symbols(sol.section);
        return sol;
    }
    SectionSpace fs = make_space(g, Fiber::forms);
    double lap = (hodge_laplacian(fs) * sigma.cast<cplx>()).cwiseAbs().maxCoeff();
    if (lap > tol * (1.0 + n))
        throw std::domain_error("rs_from_harmonic_3form: form is not harmonic (|Delta sigma| = " +
                                std::to_string(lap) + ")");
    Lambda3Split sp = split_lambda3(sigma);
    double off = std::max({sp.norm_alpha_part, sp.norm_plus_part, sp.norm_minus_part});
    if (off > tol * (1.0 + n))
        throw std::domain_error("rs_from_harmonic_3form: components outside (2,1)+(1,2)_0: alpha^omega " +
                                std::to_string(sp.norm_alpha_part) + ", psi+ " + std::to_string(sp.norm_plus_part) +
                                ", psi- " + std::to_string(sp.norm_minus_part));
    sol.section = section_from_sym_minus(sp.s);
    sol.symbols = extract_symbols(sol.section);
    return sol;
}

inline RaritaKernel solve_rarita(const FrameGeometry& g, const Mode& m = {}, double tol = kRankTol) {
    SectionSpace st = make_space(g, Fiber::spinor_vector, m);
    SectionSpace ss = make_space(g, Fiber::spinor, m);
    CMat D = dirac(st), Pi = section_pi(st);
    CMat Pstar = twistor_operator(ss, st).adjoint();
    RaritaKernel r;
    r.metric = g.kind;
    r.mode = m;
    r.kernel = kernel(vstack({D, Pi}), tol);
    r.kernel_with_twistor = kernel(vstack({D, Pi, Pstar}), tol);
    r.ill_conditioned = r.kernel.dim() > 0 && r.kernel.spectral_gap < 10.0;
    r.basis = r.kernel.basis;
    r.basis_provenance = "svd";
    if (m.invariant() && g.nearly_kahler() && r.kernel.dim() > 0) {
        // rotate to the fields of the harmonic projections of the factor volumes
        auto h = invariant_harmonic_3forms(g);
        CMat Q = r.kernel.basis;
        CMat T(st.dim(), 2);
        for (int a = 0; a < 2; ++a) T.col(a) = rs_from_harmonic_3form(g, h.projected_volumes[a]).section;
        CMat proj = Q * (Q.adjoint() * T);
        CMat B(st.dim(), 0);
        for (int a = 0; a < proj.cols() && B.cols() < Q.cols(); ++a) {
            CVec v = proj.col(a);
            for (Eigen::Index c = 0; c < B.cols(); ++c) v -= B.col(c) * B.col(c).dot(v);
            double nv = v.norm();
            if (nv < 1e-8) continue;
            B.conservativeResize(Eigen::NoChange, B.cols() + 1);
            B.col(B.cols() - 1) = v / nv;
        }
        if (B.cols() == Q.cols()) {
            r.basis = B;
            r.basis_provenance = "aligned_to_factor_volumes";
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Reduction systems on an invariant section of S_{1/2} (x) T.

struct ReductionReport {
    std::vector<Residual> residuals;
    bool pass() const {
        for (const auto& r : residuals)
            if (!r.pass) return false;
        return true;
    }
};

inline ReductionReport reduction_system_check(const FrameGeometry& g, const SpinorVector& v, double tol = 1e-9) {
    SpinorSymbols s = extract_symbols(v);
    S32Conditions c = s32_membership_conditions(s, tol);
    SectionSpace fs = make_space(g, Fiber::forms), es = make_space(g, Fiber::endo);
    CMat d = exterior_d(fs), delta = codifferential(fs), dE = endo_divergence(es), lap = hodge_laplacian(fs);
    CMat hod = hodge_matrix().cast<cplx>();
    auto cf = [](const Form& f) { return CVec(f.cast<cplx>()); };
    auto ce = [](const Mat6& M) { return CVec(vec_r(M).cast<cplx>()); };
    auto one = [](const CVec& f) {  // vector of the 1-form part
        CVec x(6);
        for (int i = 0; i < 6; ++i) x[i] = f[1 << i];
        return x;
    };
    const double sc = 1.0 + v.norm();
    auto nrm = [&](const CVec& x) { return x.cwiseAbs().maxCoeff() / sc; };
    CVec w = cf(s.w), phi = cf(s.phi), sigma = cf(s.sigma);
    Mat6 hfull = s.h;
    ReductionReport rep;
    auto add = [&](const std::string& id, double r, const std::string& prov = "reference") {
        rep.residuals.push_back(make_residual(id, "invariant", 48, r, tol, prov));
    };
    add("lemma_alpha0_vanishes", s.alpha0.cwiseAbs().maxCoeff() / sc);
    add("lemma_alpha6_vanishes", s.alpha6.cwiseAbs().maxCoeff() / sc);
    add("s32_trace_condition", std::abs(c.trace_residual) / sc);
    add("s32_omega_condition", std::abs(c.omega_residual) / sc);
    add("s32_vector_condition", c.vector_residual.cwiseAbs().maxCoeff() / sc, "derived");
    add("divergence_w_plus_h", nrm(CVec(one(delta * w) + dE * ce(hfull))));
    add("divergence_s", nrm(CVec(dE * ce(s.S))));
    add("system_b_star_d_sigma", nrm(CVec(hod * (d * sigma) + 2.0 * w)));
    add("system_b_delta_sigma", nrm(CVec(delta * sigma + 2.0 * phi)));
    add("system_b_star_dw", nrm(CVec(hod * (d * w) - d * phi)));
    add("system_b_delta_w", nrm(CVec(delta * w)));
    add("system_b_delta_phi", nrm(CVec(delta * phi)));
    add("final_laplace_sigma", nrm(CVec(lap * sigma)));
    add("final_phi_vanishes", nrm(phi));
    add("final_w_vanishes", nrm(w));
    return rep;
}

// ---------------------------------------------------------------------------
// Round product metric: |D_TM x|^2 >= |nabla x|^2 + |x|^2.

struct PositivityReport {
    Mode mode;
    int dimension = 0;
    double min_eigenvalue = 0.0;  // of M^*M - N^*N - Id
    double min_singular_value = 0.0;  // of D_TM
    int dim_kernel = 0;
};

inline PositivityReport round_metric_positivity_check(const FrameGeometry& g, const Mode& m = {}) {
    SectionSpace st = make_space(g, Fiber::spinor_vector, m);
    CMat M = dirac(st);
    CMat X = M.adjoint() * M - st.identity();
    for (int i = 0; i < 6; ++i) X -= st.nabla[i].adjoint() * st.nabla[i];
    X = 0.5 * (X + X.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(X, Eigen::EigenvaluesOnly);
    PositivityReport r;
    r.mode = m;
    r.dimension = st.dim();
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    Kernel k = kernel(M);
    r.min_singular_value = k.sv.empty() ? 0.0 : k.sv.back();
    r.dim_kernel = k.dim();
    return r;
}

}  // namespace nkspin

#pragma once
// Operators on invariant and Fourier-mode sections of the homogeneous
// bundles over SU(2) x SU(2), assembled as dense matrices.
//
// A section space for mode (j1,j2) is V_pi (x) fiber with index r*fdim + a.
// The covariant derivative in direction e_i is
//   nabla_i = d pi(e_i) (x) Id + Id (x) rho(conn_i)
// with rho the so(6) action on the fiber. On invariant sections d pi = 0.

#include "clifford.hpp"
#include "homogeneous.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace nkspin {

enum class Fiber { forms, spinor, spinor_vector, tangent, endo };

inline int fiber_dim(Fiber f) {
    switch (f) {
        case Fiber::forms: return 64;
        case Fiber::spinor: return 8;
        case Fiber::spinor_vector: return 48;
        case Fiber::tangent: return 6;
        case Fiber::endo: return 36;
    }
    return 0;
}

inline std::string fiber_name(Fiber f) {
    switch (f) {
        case Fiber::forms: return "forms";
        case Fiber::spinor: return "spinor";
        case Fiber::spinor_vector: return "spinor_tangent";
        case Fiber::tangent: return "tangent";
        case Fiber::endo: return "endo";
    }
    return "?";
}

// so(6) action of a skew endomorphism B on the fiber.
inline CMat fiber_action(Fiber f, const Mat6& B) {
    switch (f) {
        case Fiber::forms: return induced_matrix(B).cast<cplx>();
        case Fiber::spinor: return spin_lift(B);
        case Fiber::spinor_vector: return kron(RMat::Identity(6, 6), spin_lift(B)) + kron(B, eye(8));
        case Fiber::tangent: return RMat(B).cast<cplx>();
        case Fiber::endo: return endo_action_matrix(B).cast<cplx>();
    }
    return {};
}

struct SectionSpace {
    const FrameGeometry* geom = nullptr;
    Fiber fiber = Fiber::forms;
    Mode mode;
    int rep_dim = 1, fdim = 0;
    std::array<CMat, 6> rep;        // d pi(e_i) on V_pi
    std::array<CMat, 6> nabla;      // Levi-Civita
    std::array<CMat, 6> nabla_bar;  // Hermitian

    int dim() const { return rep_dim * fdim; }
    std::string label() const { return fiber_name(fiber) + ":" + mode.label(); }
    CMat fib(const CMat& M) const { return kron(eye(rep_dim), M); }
    CMat fib(const RMat& M) const { return kron(eye(rep_dim), M); }
    CMat identity() const { return eye(dim()); }
    const std::array<CMat, 6>& nab(bool hermitian) const { return hermitian ? nabla_bar : nabla; }
    // nabla_v for a constant vector v.
    CMat nabla_along(const Vec6& v, bool hermitian) const {
        CMat r = CMat::Zero(dim(), dim());
        for (int i = 0; i < 6; ++i)
            if (v[i] != 0.0) r += v[i] * nab(hermitian)[i];
        return r;
    }
};

inline SectionSpace make_space(const FrameGeometry& g, Fiber f, const Mode& m = {}) {
    SectionSpace s;
    s.geom = &g;
    s.fiber = f;
    s.mode = m;
    s.fdim = fiber_dim(f);
    s.rep = frame_rep(g, m);
    s.rep_dim = int(s.rep[0].rows());
    CMat If = eye(s.fdim), Ir = eye(s.rep_dim);
    for (int i = 0; i < 6; ++i) {
        CMat base = kron(s.rep[i], If);
        s.nabla[i] = base + kron(Ir, fiber_action(f, g.conn[i]));
        s.nabla_bar[i] = base + kron(Ir, fiber_action(f, g.conn_bar[i]));
    }
    return s;
}

inline std::vector<Mode> default_mode_window() {
    return {{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}, {1, 0}, {0, 1}};
}

// ---------------------------------------------------------------------------
// Fiber matrices used repeatedly.

namespace fibers {

inline const std::array<RMat, 6>& wedge_e() {
    static const std::array<RMat, 6> w = [] {
        std::array<RMat, 6> r;
        for (int i = 0; i < 6; ++i) r[i] = wedge_left_matrix(one_form(unit_vec(i)));
        return r;
    }();
    return w;
}

inline const std::array<RMat, 6>& contract_e() {
    static const std::array<RMat, 6> c = [] {
        std::array<RMat, 6> r;
        for (int i = 0; i < 6; ++i) r[i] = contract_matrix(unit_vec(i));
        return r;
    }();
    return c;
}

// 6x36 selector M -> M e_i.
inline RMat column_selector(int i) {
    RMat E = RMat::Zero(6, 36);
    for (int k = 0; k < 6; ++k) E(k, 6 * k + i) = 1.0;
    return E;
}

// 64x64: a -> (one-form part of a) ⌟ u.
inline RMat contract_into(const Form& u) {
    return form_map_matrix([&](const Form& a) { return contract(one_form_part(a), u); });
}

inline CMat gamma_leg(int k) { return kron(RMat::Identity(6, 6), gammas()[k]); }

}  // namespace fibers

// ---------------------------------------------------------------------------
// First-order operators.

inline CMat exterior_d(const SectionSpace& s, bool hermitian = false) {
    if (s.fiber != Fiber::forms) throw std::invalid_argument("exterior_d: needs a forms space");
    CMat r = CMat::Zero(s.dim(), s.dim());
    for (int i = 0; i < 6; ++i) r += s.fib(fibers::wedge_e()[i]) * s.nab(hermitian)[i];
    return r;
}

inline CMat codifferential(const SectionSpace& s, bool hermitian = false) {
    if (s.fiber != Fiber::forms) throw std::invalid_argument("codifferential: needs a forms space");
    CMat r = CMat::Zero(s.dim(), s.dim());
    for (int i = 0; i < 6; ++i) r -= s.fib(fibers::contract_e()[i]) * s.nab(hermitian)[i];
    return r;
}

// Divergence of endomorphism sections: delta M = -sum (nabla_i M) e_i, valued in vectors.
inline CMat endo_divergence(const SectionSpace& s, bool hermitian = false) {
    if (s.fiber != Fiber::endo) throw std::invalid_argument("endo_divergence: needs an endo space");
    CMat r = CMat::Zero(s.rep_dim * 6, s.dim());
    for (int i = 0; i < 6; ++i) r -= s.fib(fibers::column_selector(i)) * s.nab(hermitian)[i];
    return r;
}

inline CMat dirac(const SectionSpace& s, bool hermitian = false) {
    CMat r = CMat::Zero(s.dim(), s.dim());
    for (int k = 0; k < 6; ++k) {
        CMat g;
        if (s.fiber == Fiber::spinor) g = gammas()[k];
        else if (s.fiber == Fiber::spinor_vector) g = fibers::gamma_leg(k);
        else throw std::invalid_argument("dirac: needs a spinor-carrying space");
        r += s.fib(g) * s.nab(hermitian)[k];
    }
    return r;
}

// Stacked nabla_i - c gamma(e_i) over i: kernel = Killing spinors with number c.
inline CMat killing_operator(const SectionSpace& s, double c = 0.5) {
    if (s.fiber != Fiber::spinor) throw std::invalid_argument("killing_operator: needs a spinor space");
    std::vector<CMat> rows;
    for (int i = 0; i < 6; ++i) rows.push_back(s.nabla[i] - c * s.fib(CMat(gammas()[i])));
    return vstack(rows);
}

// ---------------------------------------------------------------------------
// Second-order operators.

// nabla^* nabla = -sum nabla_i nabla_i + nabla_{nabla_{e_i} e_i}.
inline CMat rough_laplacian(const SectionSpace& s, bool hermitian = false) {
    const auto& g = *s.geom;
    const auto& conn = hermitian ? g.conn_bar : g.conn;
    CMat r = CMat::Zero(s.dim(), s.dim());
    Vec6 div = Vec6::Zero();
    for (int i = 0; i < 6; ++i) {
        r -= s.nab(hermitian)[i] * s.nab(hermitian)[i];
        div += conn[i].col(i);
    }
    return r + s.nabla_along(div, hermitian);
}

inline CMat curvature_term(const SectionSpace& s, bool hermitian = false) {
    const Fiber f = s.fiber;
    CMat q = curvature_endomorphism(hermitian ? s.geom->Rbar : s.geom->R,
                                    [f](const Mat6& B) { return fiber_action(f, B); });
    return s.fib(q);
}

// Delta = nabla^* nabla + q(R) (or the Hermitian analogue).
inline CMat laplacian(const SectionSpace& s, bool hermitian = false) {
    return rough_laplacian(s, hermitian) + curvature_term(s, hermitian);
}

inline CMat hodge_laplacian(const SectionSpace& s) {
    CMat d = exterior_d(s), dl = codifferential(s);
    return d * dl + dl * d;
}

// Columns spanning the degree-p forms of a forms space.
inline CMat degree_sections(const SectionSpace& s, int p) { return s.fib(degree_basis(p)); }

struct HarmonicForms {
    CMat basis;  // orthonormal columns in the section space
    Kernel kernel;
};

inline HarmonicForms harmonic_forms(const SectionSpace& s, int p, double tol = kRankTol) {
    CMat P = degree_sections(s, p);
    HarmonicForms h;
    h.kernel = kernel(CMat(hodge_laplacian(s) * P), tol);
    h.basis = P * h.kernel.basis;
    return h;
}

// ---------------------------------------------------------------------------
// S_{1/2} (x) T: Clifford contraction, projector, embedding and twistor operator
// on section spaces.

inline CMat section_pi(const SectionSpace& st) { return st.fib(pi_matrix()); }
inline CMat section_s32_projector(const SectionSpace& st) { return st.fib(s32_projector()); }
inline CMat section_embedding(const SectionSpace& st) { return st.fib(spinor_embedding()); }

// The full covariant derivative zeta -> sum_k nabla_k zeta (x) e_k from a spinor
// space into the spinor-vector space of the same mode.
inline CMat spinor_gradient(const SectionSpace& ss, const SectionSpace& st) {
    CMat r = CMat::Zero(st.dim(), ss.dim());
    for (int rr = 0; rr < ss.rep_dim; ++rr)
        for (int k = 0; k < 6; ++k)
            r.middleRows(rr * 48 + 8 * k, 8) = ss.nabla[k].middleRows(rr * 8, 8);
    return r;
}

// Twistor operator P = pr_{3/2} o nabla.
inline CMat twistor_operator(const SectionSpace& ss, const SectionSpace& st) {
    return section_s32_projector(st) * spinor_gradient(ss, st);
}

struct BlockConstant {
    double value = 0.0;     // least-squares c with block ~ c * reference
    double residual = 0.0;  // max |block - c reference|
};

inline BlockConstant fit_constant(const CMat& block, const CMat& ref) {
    BlockConstant b;
    cplx num = (ref.adjoint() * block).trace();
    double den = ref.squaredNorm();
    cplx c = den > 0 ? num / den : cplx(0);
    b.value = c.real();
    b.residual = max_abs(CMat(block - b.value * ref));
    return b;
}

// Blocks of D_TM with respect to S_{1/2} (embedded by iota) + S_{3/2}:
// upper-left vs D, upper-right vs P^*, lower-left vs P.
struct DtmBlocks {
    BlockConstant dirac_block, adjoint_twistor_block, twistor_block;
};

inline DtmBlocks dtm_block_constants(const SectionSpace& ss, const SectionSpace& st) {
    CMat Dt = dirac(st), D = dirac(ss);
    CMat iota = section_embedding(st);
    CMat left = section_pi(st);  // left inverse of iota
    CMat P32 = section_s32_projector(st);
    CMat P = twistor_operator(ss, st);
    DtmBlocks b;
    b.dirac_block = fit_constant(left * Dt * iota, D);
    b.adjoint_twistor_block = fit_constant(left * Dt * P32, P.adjoint());
    b.twistor_block = fit_constant(P32 * Dt * iota, P);
    return b;
}

// ---------------------------------------------------------------------------
// Residual reports.

struct Residual {
    std::string identity_id;
    std::string space;
    int dimension = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string provenance = "reference";
    // Residual of the form as originally printed, when it differs from the asserted one.
    double printed_form_residual = std::numeric_limits<double>::quiet_NaN();
};

inline Residual make_residual(std::string id, std::string space, int dim, double r, double tol,
                              std::string provenance = "reference") {
    Residual x;
    x.identity_id = std::move(id);
    x.space = std::move(space);
    x.dimension = dim;
    x.max_residual = r;
    x.tolerance = tol;
    x.pass = std::isfinite(r) && r < tol;
    x.provenance = std::move(provenance);
    return x;
}

// ---------------------------------------------------------------------------
// Derivative identities for the Hermitian connection (first-order operators
// between SU(3)-sub-bundles).

struct DerivativeOps {
    SectionSpace forms, endos;
    CMat d, delta, delta_endo;
    std::array<CMat, 6> a_forms_nb, a_endo_nb, a_tilde_nb;  // fib(A_i action) * nabla_bar_i
};

inline DerivativeOps derivative_ops(const FrameGeometry& g, const Mode& m) {
    DerivativeOps o{make_space(g, Fiber::forms, m), make_space(g, Fiber::endo, m), {}, {}, {}, {}, {}, {}};
    o.d = exterior_d(o.forms);
    o.delta = codifferential(o.forms);
    o.delta_endo = endo_divergence(o.endos);
    for (int i = 0; i < 6; ++i) {
        o.a_forms_nb[i] = o.forms.fib(induced_matrix(g.A[i])) * o.forms.nabla_bar[i];
        o.a_endo_nb[i] = o.endos.fib(endo_action_matrix(g.A[i])) * o.endos.nabla_bar[i];
        o.a_tilde_nb[i] = o.endos.fib(tilde_action_matrix(g.A[i])) * o.endos.nabla_bar[i];
    }
    return o;
}

inline std::vector<Residual> derivative_identity_suite(const FrameGeometry& g, const Mode& m, double tol) {
    if (!g.nearly_kahler()) throw std::invalid_argument("derivative identities need the nearly Kahler geometry");
    const auto& md = model();
    const auto& b = bases();
    DerivativeOps o = derivative_ops(g, m);
    const SectionSpace& fs = o.forms;
    auto I1 = [&](const RMat& M) { return fs.fib(M); };
    auto sum = [](const std::array<CMat, 6>& a) {
        CMat r = a[0];
        for (int i = 1; i < 6; ++i) r += a[i];
        return r;
    };
    const RMat V1 = one_form_embedding();
    const RMat Ypsi = fibers::contract_into(md.psi_plus);
    const RMat Ypsim = fibers::contract_into(md.psi_minus);
    const RMat Wom = wedge_right_matrix(md.omega);
    const RMat Sp = star_on_matrix(md.psi_plus);
    const RMat F2E = endo_of_2form_matrix();
    const RMat E2F = two_form_of_endo_matrix();
    const RMat Hod = hodge_matrix();
    const RMat Jv = md.J;

    CMat Phi = I1(b.lambda11_0);
    CMat Ssec = I1(b.sym_minus);
    CMat Hsec = I1(b.sym_plus0);
    CMat Wsec = I1(RMat(F2E * b.lambda11_0));
    CMat sig = I1(Sp) * Ssec;
    CMat phi = I1(RMat(E2F * left_mult_matrix(md.J))) * Hsec;
    CMat Aform = sum(o.a_forms_nb), Aend = sum(o.a_endo_nb), Atil = sum(o.a_tilde_nb);
    const std::string sp = m.label();

    std::vector<Residual> out;
    auto add = [&](const std::string& id, int dim, const CMat& L, const CMat& R) {
        out.push_back(make_residual(id, sp, dim, max_abs(CMat(L - R)), tol));
        return &out.back();
    };
    add("herm_primitive11", int(Phi.cols()), Aform * Phi,
        -I1(RMat(Ypsi * V1 * Jv * V1.transpose())) * o.delta * Phi);
    add("herm_sigma", int(Ssec.cols()), Aform * sig, -2.0 * I1(RMat(Wom * V1)) * o.delta_endo * Ssec);
    {
        CMat L = I1(Sp) * Aend * Hsec;
        CMat R = 2.0 * I1(RMat(Wom * V1)) * o.delta_endo * Hsec - 4.0 * o.d * phi;
        add("herm_sym_plus", int(Hsec.cols()), L, R);
    }
    add("herm_sym_minus", int(Ssec.cols()), Aend * Ssec,
        I1(RMat(right_mult_matrix(md.J) * F2E)) * (I1(RMat(Ypsi * V1)) * o.delta_endo * Ssec + o.delta * sig));
    {
        CMat L = I1(Sp) * Atil * Wsec;
        CMat R = 2.0 * I1(Wom) * o.delta * Phi - 4.0 * I1(Hod) * o.d * Phi;
        Residual* r = add("twisted_primitive11", int(Phi.cols()), L, R);
        CMat Rp = 2.0 * I1(Wom) * o.delta * Phi + 4.0 * I1(Hod) * o.d * Phi;
        r->printed_form_residual = max_abs(CMat(L - Rp));
        r->provenance = "derived";
    }
    add("twisted_sym_plus", int(Hsec.cols()), Atil * Hsec,
        -I1(RMat(F2E * Ypsim * V1)) * o.delta_endo * Hsec);
    add("twisted_sym_minus", int(Ssec.cols()), Atil * Ssec,
        I1(F2E) * (I1(Hod) * o.d * sig - I1(RMat(Ypsim * V1)) * o.delta_endo * Ssec));
    return out;
}

// ---------------------------------------------------------------------------
// Weitzenbock-type identities on S_{1/2} (x) T.

inline std::vector<Residual> weitzenboeck_suite(const FrameGeometry& g, const Mode& m, double tol) {
    if (!g.nearly_kahler()) throw std::invalid_argument("Weitzenbock identities need the nearly Kahler geometry");
    const auto& md = model();
    SectionSpace st = make_space(g, Fiber::spinor_vector, m);
    auto f = [&](const CMat& M) { return st.fib(M); };
    const CMat I = st.identity();
    CMat om2 = f(kron(RMat::Identity(6, 6), CMat(gamma_form(md.omega) * gamma_form(md.omega))));
    CMat D = dirac(st), Db = dirac(st, true);
    CMat tors = CMat::Zero(st.dim(), st.dim()), Anab = tors, Agam = tors;
    for (int j = 0; j < 6; ++j) {
        CMat aid = kron(g.A[j], eye(8));
        tors += f(kron(RMat::Identity(6, 6), CMat(gamma_form(contract(unit_vec(j), md.psi_minus))))) * st.nabla_bar[j];
        Anab += f(aid) * st.nabla[j];
        Agam += f(CMat(fibers::gamma_leg(j) * aid));
    }
    CMat rough = rough_laplacian(st), roughb = rough_laplacian(st, true);
    CMat qb = curvature_term(st, true);
    CMat curv_lc = CMat::Zero(st.dim(), st.dim()), curv_diff = curv_lc;
    for (int a = 0; a < 6; ++a)
        for (int b2 = 0; b2 < 6; ++b2) {
            CMat gg = gammas()[a] * gammas()[b2];
            curv_lc += 0.5 * f(kron(g.R.endo(a, b2), gg));
            curv_diff += 0.5 * f(kron(Mat6(g.Rbar.endo(a, b2) - g.R.endo(a, b2)), gg));
        }
    CMat psim = f(kron(RMat::Identity(6, 6), CMat(gamma_form(md.psi_minus))));
    CMat Db2 = Db * Db, D2 = D * D;
    const std::string sp = m.label();
    const int n = st.dim();
    std::vector<Residual> out;
    out.push_back(make_residual("dirac_hermitian_comparison", sp, n,
                                max_abs(CMat(Db - (D - 0.75 * psim - 0.5 * Agam))), tol));
    out.push_back(make_residual("hermitian_lichnerowicz", sp, n,
                                max_abs(CMat(Db2 - (roughb + qb + 0.5 * I + 0.5 * om2 + tors))), tol));
    out.push_back(make_residual("rough_laplacian_comparison", sp, n,
                                max_abs(CMat(roughb - (rough + 0.625 * I + 0.125 * om2 + Anab + 0.5 * tors))), tol));
    out.push_back(make_residual("twisted_second", sp, n,
                                max_abs(CMat(Db2 - (D2 + 2.125 * I + 1.125 * om2 + 1.5 * tors + Anab + curv_diff))),
                                tol));
    out.push_back(make_residual("lc_lichnerowicz", sp, n, max_abs(CMat(D2 - (rough + 7.5 * I + curv_lc))), tol,
                                "derived"));
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise spinor-curvature identities.

inline SpinorOp spinor_curvature(const Tensor4& R, int i, int j) { return spin_lift(R.endo(i, j)); }

// max over frame X of |sum_j e_j . Rbar_S(X,e_j) - (-1/2 Ric-bar(X) - X + JX . omega)|.
inline double spinor_ricci_residual(const FrameGeometry& g) {
    const auto& md = model();
    Mat6 ricb = ricci(g.Rbar);
    SpinorOp om = gamma_form(md.omega);
    double r = 0.0;
    for (int x = 0; x < 6; ++x) {
        SpinorOp L = SpinorOp::Zero();
        for (int j = 0; j < 6; ++j) L += gammas()[j] * spinor_curvature(g.Rbar, x, j);
        Vec6 X = unit_vec(x);
        SpinorOp R = -0.5 * gamma(ricb * X) - gamma(X) + gamma(md.J * X) * om;
        r = std::max(r, (L - R).cwiseAbs().maxCoeff());
    }
    return r;
}

// |sum e_i e_j Rbar_S(e_i,e_j) - (18 + 2 omega.omega)|.
inline double spinor_scalar_residual(const FrameGeometry& g) {
    SpinorOp om = gamma_form(model().omega);
    SpinorOp L = SpinorOp::Zero();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) L += gammas()[i] * gammas()[j] * spinor_curvature(g.Rbar, i, j);
    return (L - (18.0 * SpinorOp::Identity() + 2.0 * om * om)).cwiseAbs().maxCoeff();
}

}  // namespace nkspin

#include "nkspin/identities.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace nkspin;

namespace {

double opnorm_diff(const SpinorOp& a, const SpinorOp& b) { return (a - b).cwiseAbs().maxCoeff(); }

SpinorVector random_spinor_vector(Sampler& s) {
    SpinorVector v;
    for (auto& x : v) x = s.phase_scalar();
    return v;
}

}  // namespace

TEST(Clifford, RelationsAndSkewness) {
    const auto& g = gammas();
    for (int i = 0; i < 6; ++i) {
        EXPECT_LT(opnorm_diff(g[i].adjoint(), -g[i]), 1e-15);
        for (int j = 0; j < 6; ++j) {
            SpinorOp ac = g[i] * g[j] + g[j] * g[i];
            EXPECT_LT(opnorm_diff(ac, SpinorOp::Identity() * cplx(i == j ? -2.0 : 0.0)), 1e-15);
        }
    }
    SpinorOp v = vol_action();
    EXPECT_LT(opnorm_diff(v * v, -SpinorOp::Identity()), 1e-14);
    for (int i = 0; i < 6; ++i) EXPECT_LT(opnorm_diff(v * g[i], -g[i] * v), 1e-14);
}

TEST(Clifford, SpinLiftIsHomomorphism) {
    Sampler s(3);
    for (int t = 0; t < 10; ++t) {
        Mat6 A = s.mat(), B = s.mat();
        A -= A.transpose().eval();
        B -= B.transpose().eval();
        SpinorOp lhs = spin_lift(A) * spin_lift(B) - spin_lift(B) * spin_lift(A);
        EXPECT_LT(opnorm_diff(lhs, spin_lift(Mat6(A * B - B * A))), 1e-12);
        Vec6 x = s.vec();
        // equivariance of Clifford multiplication
        EXPECT_LT(opnorm_diff(spin_lift(A) * gamma(x) - gamma(x) * spin_lift(A), gamma(A * x)), 1e-12);
    }
}

TEST(Clifford, StructureFormSpectra) {
    auto spectrum = [](const SpinorOp& M) {
        Eigen::ComplexEigenSolver<SpinorOp> es(M);
        std::vector<double> ev;
        for (int i = 0; i < 8; ++i) {
            EXPECT_NEAR(es.eigenvalues()[i].real(), 0.0, 1e-12);
            ev.push_back(es.eigenvalues()[i].imag());
        }
        std::sort(ev.begin(), ev.end());
        return ev;
    };
    // omega acts with eigenvalues +-3i (once each) and +-i (three times each)
    auto w = spectrum(gamma_form(model().omega));
    std::vector<double> expect_w{-3, -1, -1, -1, 1, 1, 1, 3};
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(w[i], expect_w[i], 1e-12);
    SpinorOp w2 = gamma_form(model().omega) * gamma_form(model().omega);
    Eigen::SelfAdjointEigenSolver<SpinorOp> es2(-w2);
    EXPECT_NEAR(es2.eigenvalues()[0], 1.0, 1e-12);
    EXPECT_NEAR(es2.eigenvalues()[5], 1.0, 1e-12);
    EXPECT_NEAR(es2.eigenvalues()[6], 9.0, 1e-12);
    EXPECT_NEAR(es2.eigenvalues()[7], 9.0, 1e-12);

    KillingModel k = find_killing_spinor();
    EXPECT_EQ(k.eigenspace_dim, 1);
    EXPECT_NEAR(k.psi_minus_spectrum[0], -4.0, 1e-12);
    EXPECT_NEAR(k.psi_minus_spectrum[7], 4.0, 1e-12);
    for (int i = 1; i < 7; ++i) EXPECT_NEAR(k.psi_minus_spectrum[i], 0.0, 1e-12);
}

TEST(Clifford, KillingSpinorModel) {
    const Spinor& k = kappa();
    const auto& m = model();
    EXPECT_NEAR(k.norm(), 1.0, 1e-14);
    EXPECT_LT((gamma_form(m.psi_minus) * k + 4.0 * k).cwiseAbs().maxCoeff(), 1e-13);
    // omega acts on kappa through the volume element
    EXPECT_LT((gamma_form(m.omega) * k + 3.0 * vol_action() * k).cwiseAbs().maxCoeff(), 1e-13);
    for (int i = 0; i < 6; ++i) {
        Vec6 x = unit_vec(i);
        Spinor a = gamma(m.J * x) * k, b = vol_action() * gamma(x) * k;
        EXPECT_LT(std::min((a - b).norm(), (a + b).norm()), 1e-13);
    }
    SpinorOp F = spinor_frame();
    EXPECT_LT((F.adjoint() * F - SpinorOp::Identity()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Clifford, FormsRoundTrip) {
    Sampler s(11);
    for (int t = 0; t < 50; ++t) {
        double f0 = s.normal(), f6 = s.normal();
        Vec6 a = s.vec();
        SpinorForms r = spinor_to_forms(spinor_from_forms(f0, a, f6));
        EXPECT_NEAR(r.f0, f0, 1e-13);
        EXPECT_NEAR(r.f6, f6, 1e-13);
        EXPECT_LT((r.a1 - a).cwiseAbs().maxCoeff(), 1e-13);
    }
    EXPECT_THROW(spinor_to_forms(Spinor(cplx(0, 1) * kappa())), std::domain_error);
}

TEST(Clifford, ContractionAndProjector) {
    const CMat& P = pi_matrix();
    EXPECT_LT((P * P.adjoint() - 6.0 * eye(8)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(kernel(P).dim(), 40);
    CMat Q = s32_projector();
    EXPECT_NEAR(Q.trace().real(), 40.0, 1e-12);
    EXPECT_LT((Q * Q - Q).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((P * spinor_embedding() - eye(8)).cwiseAbs().maxCoeff(), 1e-13);
    // the embedding sends zeta to -(1/6) sum gamma(e_k) zeta (x) e_k
    Spinor z = kappa();
    SpinorVector e = spinor_embedding() * z;
    for (int k = 0; k < 6; ++k)
        EXPECT_LT((Spinor(e.segment<8>(8 * k)) + gammas()[k] * z / 6.0).cwiseAbs().maxCoeff(), 1e-14);
    Sampler s(5);
    SpinorVector v = random_spinor_vector(s);
    EXPECT_LT(pi_map(s32_project(v)).cwiseAbs().maxCoeff(), 1e-12);
}

// S_{3/2} membership expressed through the symbols of the real image, in both directions.
TEST(Clifford, S32MembershipConditions) {
    Sampler s(17);
    const CMat Q = s32_projector();
    for (int t = 0; t < 100; ++t) {
        Vec6 a0 = s.vec(), a6 = s.vec();
        Mat6 a1 = s.mat();
        SpinorVector v = assemble_spinor_vector(a0, a1, a6);
        SpinorSymbols sym = extract_symbols(v);
        EXPECT_LT((sym.alpha0 - a0).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((sym.alpha1 - a1).cwiseAbs().maxCoeff(), 1e-12);
        S32Conditions c = s32_membership_conditions(sym);
        bool in_kernel = pi_map(v).norm() < 1e-9 * (1 + v.norm());
        EXPECT_EQ(c.all(), in_kernel);

        // projecting lands in the kernel; the projection is still in the real image
        SpinorVector pv = Q * v;
        SpinorSymbols ps = extract_symbols(pv);
        EXPECT_TRUE(s32_membership_conditions(ps).all());
        EXPECT_LT((assemble_spinor_vector(ps.alpha0, ps.alpha1, ps.alpha6) - pv).cwiseAbs().maxCoeff(), 1e-12);
    }
    // each condition alone can fail: a pure trace, a pure omega part, a pure alpha0
    SpinorSymbols tr;
    tr.alpha1 = Mat6::Identity();
    EXPECT_FALSE(s32_membership_conditions(tr).trace_free);
    SpinorSymbols om;
    om.alpha1 = model().J.transpose();
    EXPECT_FALSE(s32_membership_conditions(om).no_omega_part);
    EXPECT_TRUE(s32_membership_conditions(om).trace_free);
    SpinorSymbols v0;
    v0.alpha0 = unit_vec(2);
    EXPECT_FALSE(s32_membership_conditions(v0).vector_condition);
}

TEST(Clifford, SymbolsOfATensorPart) {
    // a section with legs gamma(S e_i) kappa has alpha1 rows S e_i: the symbols recover S.
    Sampler s(23);
    const auto& b = bases();
    Mat6 S = s.endo_from_basis(b.sym_minus);
    SpinorVector v = assemble_spinor_vector(Vec6::Zero(), S.transpose(), Vec6::Zero());
    SpinorSymbols sym = extract_symbols(v);
    EXPECT_LT((sym.S - S).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(sym.h.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(sym.w.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((sym.sigma - induced(S, model().psi_plus)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(s32_membership_conditions(sym).all());
    SpinorVector bad = v;
    bad.segment<8>(0) *= cplx(0, 1);
    EXPECT_THROW(extract_symbols(bad), std::domain_error);
}

TEST(Algebra, AllPointwiseIdentitiesHold) {
    auto res = algebra_suite(42, 100, 1e-9);
    EXPECT_GE(res.size(), 17u);
    for (const auto& r : res) {
        EXPECT_TRUE(r.residual.pass) << r.residual.identity_id << " " << r.residual.max_residual;
        EXPECT_EQ(r.instances, 100);
        // identities whose printed form differs report that form's residual; it is nonzero
        if (!std::isnan(r.residual.printed_form_residual))
            EXPECT_GT(r.residual.printed_form_residual, 1e-6) << r.residual.identity_id;
    }
}

TEST(Algebra, SeedsAreReproducible) {
    auto a = algebra_suite(9, 10, 1e-9), b = algebra_suite(9, 10, 1e-9);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].residual.max_residual, b[i].residual.max_residual);
}

#include "nkspin/deform.hpp"

#include <gtest/gtest.h>

using namespace nkspin;

namespace {

const FrameGeometry& nk() { return geometry(MetricKind::nearly_kahler); }
const FrameGeometry& round_metric() { return geometry(MetricKind::round_product); }

const std::vector<Mode> kSmallModes{{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}, {1, 0}};

class BothMetrics : public ::testing::TestWithParam<MetricKind> {};

}  // namespace

TEST_P(BothMetrics, FrameIsOrthonormalAndConnectionTorsionFree) {
    const auto& g = geometry(GetParam());
    EXPECT_LT((g.P.transpose() * g.metric_E * g.P - Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    for (int i = 0; i < 6; ++i) {
        EXPECT_TRUE(is_skew(g.conn[i], 1e-12));
        EXPECT_TRUE(is_skew(g.conn_bar[i], 1e-12));
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) {
                EXPECT_NEAR(g.Gamma(i, j, k) - g.Gamma(j, i, k), g.c(i, j, k), 1e-12);
                EXPECT_NEAR(g.c(i, j, k), -g.c(j, i, k), 1e-13);
            }
    }
}

TEST_P(BothMetrics, RicciAndScalarCurvature) {
    const auto& g = geometry(GetParam());
    const double ec = GetParam() == MetricKind::nearly_kahler ? 5.0 : 2.0;
    EXPECT_LT((ricci(g.R) - ec * Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(scalar_curvature(g.R), 6 * ec, 1e-10);
    EXPECT_LT(levi_civita_bianchi_residual(g), 1e-10);
    // pair symmetry R(i,j,k,l) = R(k,l,i,j)
    double worst = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) worst = std::max(worst, std::abs(g.R(i, j, k, l) - g.R(k, l, i, j)));
    EXPECT_LT(worst, 1e-10);
}

TEST_P(BothMetrics, InvariantBettiNumbers) {
    SectionSpace s = make_space(geometry(GetParam()), Fiber::forms);
    const int betti[7] = {1, 0, 0, 2, 0, 0, 1};
    for (int p = 0; p <= 6; ++p) EXPECT_EQ(harmonic_forms(s, p).basis.cols(), betti[p]) << "degree " << p;
    SectionSpace t = make_space(geometry(GetParam()), Fiber::forms, {0.5, 0.5});
    for (int p = 0; p <= 6; ++p) EXPECT_EQ(harmonic_forms(t, p).basis.cols(), 0) << "degree " << p;
}

TEST_P(BothMetrics, DifferentialComplexAndAdjointness) {
    for (const Mode& m : kSmallModes) {
        SectionSpace s = make_space(geometry(GetParam()), Fiber::forms, m);
        CMat d = exterior_d(s), dl = codifferential(s);
        double scale = 1.0 + max_abs(d);
        EXPECT_LT(max_abs(CMat(d * d)) / scale, 1e-12) << m.label();
        EXPECT_LT(max_abs(CMat(dl * dl)) / scale, 1e-12) << m.label();
        EXPECT_LT(max_abs(CMat(d.adjoint() - dl)) / scale, 1e-12) << m.label();
    }
}

TEST_P(BothMetrics, SpinorLichnerowiczFormula) {
    const auto& g = geometry(GetParam());
    for (const Mode& m : kSmallModes) {
        SectionSpace s = make_space(g, Fiber::spinor, m);
        CMat D = dirac(s);
        CMat rhs = rough_laplacian(s) + scalar_curvature(g.R) / 4.0 * s.identity();
        EXPECT_LT(max_abs(CMat(D * D - rhs)) / (1 + max_abs(rhs)), 1e-11) << m.label();
        // the Dirac operator is self-adjoint
        EXPECT_LT(max_abs(CMat(D - D.adjoint())), 1e-11) << m.label();
    }
}

TEST_P(BothMetrics, DtmBlockConstants) {
    const auto& g = geometry(GetParam());
    for (const Mode& m : {Mode{0, 0}, Mode{0.5, 0.5}}) {
        SectionSpace ss = make_space(g, Fiber::spinor, m), st = make_space(g, Fiber::spinor_vector, m);
        DtmBlocks b = dtm_block_constants(ss, st);
        if (m.invariant() && GetParam() == MetricKind::round_product) continue;  // D = 0 and P = 0 there
        EXPECT_NEAR(b.dirac_block.value, -2.0 / 3.0, 1e-10) << m.label();
        EXPECT_NEAR(b.adjoint_twistor_block.value, 2.0, 1e-10) << m.label();
        EXPECT_NEAR(b.twistor_block.value, 1.0 / 3.0, 1e-10) << m.label();
        EXPECT_LT(b.dirac_block.residual + b.adjoint_twistor_block.residual + b.twistor_block.residual, 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(Geometry, BothMetrics,
                         ::testing::Values(MetricKind::nearly_kahler, MetricKind::round_product),
                         [](const auto& info) { return metric_name(info.param); });

TEST(NearlyKahler, HermitianConnectionAndTorsion) {
    const auto& g = nk();
    const Mat6& J = model().J;
    for (int i = 0; i < 6; ++i) {
        EXPECT_LT((g.conn_bar[i] * J - J * g.conn_bar[i]).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((g.A[i] - a_endo(unit_vec(i))).cwiseAbs().maxCoeff(), 1e-10) << i;
    }
    EXPECT_LT((ricci(g.Rbar) - 4.0 * Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(curvature_comparison_residual(g), 1e-10);
    EXPECT_LT(hermitian_bianchi_residual(g), 1e-10);
    EXPECT_GT(g.ricci_scale, 0.0);
}

TEST(NearlyKahler, HermitianSpinorCurvatureContractions) {
    EXPECT_LT(spinor_ricci_residual(nk()), 1e-10);
    EXPECT_LT(spinor_scalar_residual(nk()), 1e-10);
}

TEST(NearlyKahler, CovariantDerivativeOfOmegaIsPsiPlus) {
    Tensor3 N = nabla_omega(nk().conn);
    const Form& psi = model().psi_plus;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                EXPECT_NEAR(N(i, j, k), eval3(psi, unit_vec(i), unit_vec(j), unit_vec(k)), 1e-10);
}

TEST(NearlyKahler, DerivativeIdentitiesOnInvariantAndMixedModes) {
    for (const Mode& m : {Mode{0, 0}, Mode{0.5, 0.5}}) {
        for (const auto& r : derivative_identity_suite(nk(), m, 1e-8))
            EXPECT_TRUE(r.pass) << r.identity_id << " on " << m.label() << ": " << r.max_residual;
    }
    EXPECT_THROW(derivative_identity_suite(round_metric(), {}, 1e-8), std::invalid_argument);
}

TEST(NearlyKahler, WeitzenboeckIdentities) {
    for (const Mode& m : {Mode{0, 0}, Mode{0.5, 0}, Mode{0, 0.5}, Mode{0.5, 0.5}})
        for (const auto& r : weitzenboeck_suite(nk(), m, 1e-8))
            EXPECT_TRUE(r.pass) << r.identity_id << " on " << m.label() << ": " << r.max_residual;
}

TEST(NearlyKahler, KillingSpinorIsTheModelSpinor) {
    KillingSpinorSpace k = killing_spinor_space(nk());
    ASSERT_EQ(k.dim(), 1);
    EXPECT_LT(k.dirac_residual, 1e-10);
    EXPECT_NEAR(std::abs(CVec(k.kernel.basis.col(0)).dot(CVec(kappa()))), 1.0, 1e-10);
    // the opposite Killing number has its own one-dimensional space on the invariant sections
    EXPECT_EQ(killing_spinor_space(nk(), {}, -0.5).dim(), 1);
    for (const Mode& m : {Mode{0.5, 0}, Mode{0.5, 0.5}, Mode{1, 0}}) EXPECT_EQ(killing_spinor_space(nk(), m).dim(), 0);
    EXPECT_EQ(killing_spinor_space(round_metric()).dim(), 0);
}

TEST(SpinRep, CommutationRelations) {
    for (double j : {0.5, 1.0, 1.5}) {
        auto E = spin_rep(j);
        for (int a = 0; a < 3; ++a) {
            const CMat& x = E[a];
            const CMat& y = E[(a + 1) % 3];
            const CMat& z = E[(a + 2) % 3];
            EXPECT_LT(max_abs(CMat(x * y - y * x - 2.0 * z)), 1e-12) << j;
            EXPECT_LT(max_abs(CMat(x + x.adjoint())), 1e-13);
        }
    }
    EXPECT_EQ((Mode{1, 0.5}).dim(), 6);
    EXPECT_EQ((Mode{0.5, 1.5}).label(), "(1/2,3/2)");
    EXPECT_EQ(Mode{}.label(), "invariant");
}

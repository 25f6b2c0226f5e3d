#include "nkspin/su3_model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace nkspin;

namespace {

std::mt19937_64 rng(20261019);
std::normal_distribution<double> nd;

Vec6 rvec() {
    Vec6 v;
    for (auto& x : v) x = nd(rng);
    return v;
}
Form rform(int p) {
    Form f = Form::Zero();
    for (unsigned I = 0; I < kForms; ++I)
        if (degree_of(I) == p) f[I] = nd(rng);
    return f;
}
Form rmixed() {
    Form f;
    for (auto& x : f) x = nd(rng);
    return f;
}

std::vector<int> indices(unsigned I) {
    std::vector<int> r;
    for (int i = 0; i < 6; ++i)
        if (I >> i & 1u) r.push_back(i);
    return r;
}

// Sign of the permutation sorting a list, by counting inversions.
int sort_sign(const std::vector<int>& v) {
    int inv = 0;
    for (size_t a = 0; a < v.size(); ++a)
        for (size_t b = a + 1; b < v.size(); ++b) inv += v[a] > v[b];
    return inv % 2 ? -1 : 1;
}

// Oracle wedge from concatenated index lists.
Form wedge_oracle(const Form& a, const Form& b) {
    Form c = Form::Zero();
    for (unsigned I = 0; I < kForms; ++I)
        for (unsigned J = 0; J < kForms; ++J) {
            if (I & J) continue;
            auto l = indices(I), r = indices(J);
            l.insert(l.end(), r.begin(), r.end());
            c[I | J] += sort_sign(l) * a[I] * b[J];
        }
    return c;
}

// Oracle evaluation u(v1..vp) = sum_I u_I det[v_k(I_j)].
double eval_oracle(const Form& u, const std::vector<Vec6>& vs) {
    const int p = int(vs.size());
    double s = 0.0;
    for (unsigned I = 0; I < kForms; ++I) {
        if (degree_of(I) != p || u[I] == 0.0) continue;
        auto id = indices(I);
        Eigen::MatrixXd M(p, p);
        for (int k = 0; k < p; ++k)
            for (int j = 0; j < p; ++j) M(j, k) = vs[k][id[j]];
        s += u[I] * (p ? M.determinant() : 1.0);
    }
    return s;
}

double eval_form(const Form& u, const std::vector<Vec6>& vs) {
    Form c = u;
    for (const auto& v : vs) c = contract(v, c);
    return c[0];
}

}  // namespace

TEST(Exterior, WedgeMatchesPermutationOracle) {
    for (int t = 0; t < 20; ++t) {
        Form a = rmixed(), b = rmixed();
        EXPECT_LT((wedge(a, b) - wedge_oracle(a, b)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Exterior, WedgeAssociativeAndGradedCommutative) {
    for (int t = 0; t < 30; ++t) {
        int p = t % 4, q = (t / 4) % 3;
        Form a = rform(p), b = rform(q), c = rmixed();
        EXPECT_LT((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).cwiseAbs().maxCoeff(), 1e-11);
        double s = (p * q) % 2 ? -1.0 : 1.0;
        EXPECT_LT((wedge(a, b) - s * wedge(b, a)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Exterior, ContractMatchesDeterminantEvaluation) {
    for (int p = 1; p <= 6; ++p)
        for (int t = 0; t < 5; ++t) {
            Form u = rform(p);
            std::vector<Vec6> vs;
            for (int k = 0; k < p; ++k) vs.push_back(rvec());
            EXPECT_NEAR(eval_form(u, vs), eval_oracle(u, vs), 1e-10 * (1 + std::abs(eval_oracle(u, vs))));
        }
}

TEST(Exterior, ContractIsAntiderivation) {
    for (int t = 0; t < 20; ++t) {
        int p = t % 5;
        Form a = rform(p), b = rmixed();
        Vec6 x = rvec();
        Form lhs = contract(x, wedge(a, b));
        Form rhs = wedge(contract(x, a), b) + (p % 2 ? -1.0 : 1.0) * wedge(a, contract(x, b));
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-11);
    }
    Vec6 x = rvec(), y = rvec();
    EXPECT_NEAR(contract(x, one_form(y))[0], x.dot(y), 1e-13);
}

TEST(Exterior, HodgeDefiningPropertyAndSquare) {
    const Form vol = basis_form({0, 1, 2, 3, 4, 5});
    for (int p = 0; p <= 6; ++p) {
        Form a = rform(p), b = rform(p);
        EXPECT_LT((wedge(a, hodge(b)) - inner(a, b) * vol).cwiseAbs().maxCoeff(), 1e-11);
        double s = (p * (6 - p)) % 2 ? -1.0 : 1.0;
        EXPECT_LT((hodge(hodge(a)) - s * a).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_EQ(hodge(scalar_form(1.0)), vol);
}

TEST(Exterior, InducedActionIsDerivation) {
    for (int t = 0; t < 20; ++t) {
        Mat6 B = Mat6::Random();
        Form a = rform(t % 4), b = rform(2);
        Form lhs = induced(B, wedge(a, b));
        Form rhs = wedge(induced(B, a), b) + wedge(a, induced(B, b));
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-11);
    }
    // on 1-forms B_* x = -B^T x
    Mat6 B = Mat6::Random();
    Vec6 x = rvec();
    EXPECT_LT((one_form_part(induced(B, one_form(x))) + B.transpose() * x).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Exterior, MatrixVersionsAgree) {
    Form a = rmixed();
    Vec6 x = rvec();
    EXPECT_LT((hodge_matrix() * a - hodge(a)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((contract_matrix(x) * a - contract(x, a)).cwiseAbs().maxCoeff(), 1e-13);
    Form b = rform(2);
    EXPECT_LT((wedge_left_matrix(b) * a - wedge(b, a)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((wedge_right_matrix(b) * a - wedge(a, b)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(degree_basis(3).cols(), 20);
    EXPECT_THROW(require_degree(rmixed(), 3, "test"), std::invalid_argument);
}

TEST(Su3Model, StructureForms) {
    const auto& m = model();
    EXPECT_LT((m.J * m.J + Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    for (int t = 0; t < 10; ++t) {
        Vec6 X = rvec(), Y = rvec();
        EXPECT_NEAR(eval2(m.omega, X, Y), (m.J * X).dot(Y), 1e-12);
    }
    // psi+ + i psi- = (e1+ie2)(e3+ie4)(e5+ie6), expanded by hand
    auto e = [](int i) { return one_form(unit_vec(i)); };
    Form re = wedge(wedge(e(0), e(2)), e(4)) - wedge(wedge(e(0), e(3)), e(5)) - wedge(wedge(e(1), e(2)), e(5)) -
              wedge(wedge(e(1), e(3)), e(4));
    Form im = wedge(wedge(e(0), e(2)), e(5)) + wedge(wedge(e(0), e(3)), e(4)) + wedge(wedge(e(1), e(2)), e(4)) -
              wedge(wedge(e(1), e(3)), e(5));
    EXPECT_EQ(m.psi_plus, re);
    EXPECT_EQ(m.psi_minus, im);
    Form w3 = wedge(wedge(m.omega, m.omega), m.omega);
    EXPECT_LT((w3 / 6.0 - m.vol).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((wedge(m.psi_plus, m.psi_minus) - 4.0 * m.vol).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((hodge(m.psi_plus) - m.psi_minus).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(wedge(m.omega, m.psi_plus).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(wedge(m.omega, m.psi_minus).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Su3Model, EndomorphismFormDictionary) {
    for (int t = 0; t < 10; ++t) {
        Form b = rform(2);
        Mat6 B = endo_of_2form(b);
        EXPECT_TRUE(is_skew(B));
        EXPECT_LT((two_form_of_endo(B) - b).cwiseAbs().maxCoeff(), 1e-13);
        Vec6 X = rvec(), Y = rvec();
        // B(j,i) = b_ij, i.e. g(B X, Y) = b(X, Y)
        EXPECT_NEAR((B * X).dot(Y), eval2(b, X, Y), 1e-12);
        EXPECT_LT((endo_of_2form_matrix() * b - vec_r(B)).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_EQ(unvec_r(vec_r(B)), B);
    }
    Vec6 X = rvec(), Y = rvec();
    EXPECT_LT((endo_of_2form(wedge(one_form(X), one_form(Y))) - wedge_endo(X, Y)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Su3Model, ActionMatricesMatchDirectMaps) {
    Mat6 B = Mat6::Random(), M = Mat6::Random(), C = Mat6::Random();
    EXPECT_LT((endo_action_matrix(B) * vec_r(M) - vec_r(Mat6(B * M - M * B))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((right_mult_matrix(C) * vec_r(M) - vec_r(Mat6(M * C))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((left_mult_matrix(C) * vec_r(M) - vec_r(Mat6(C * M))).cwiseAbs().maxCoeff(), 1e-12);
    Form u = rform(3);
    Mat6 S = Mat6::Random();
    EXPECT_LT((star_on_matrix(u) * vec_r(S) - induced(S, u)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Su3Model, AEndomorphism) {
    const auto& m = model();
    for (int t = 0; t < 10; ++t) {
        Vec6 X = rvec(), Y = rvec();
        Mat6 A = a_endo(X);
        EXPECT_TRUE(is_skew(A, 1e-12));
        EXPECT_TRUE(anticommutes_with_J(A, 1e-12));
        EXPECT_LT((A * X).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((A * m.J * X).cwiseAbs().maxCoeff(), 1e-12);
        // |A_X Y|^2 = |X|^2|Y|^2 - <X,Y>^2 - <JX,Y>^2 for the unit-normalized structure
        double expect = X.squaredNorm() * Y.squaredNorm() - std::pow(X.dot(Y), 2) - std::pow((m.J * X).dot(Y), 2);
        EXPECT_NEAR((A * Y).squaredNorm(), expect, 1e-10 * (1 + expect));
        AzAx z = a_z_a_x(rvec(), X, Y);
        EXPECT_LT((z.direct - z.closed_form).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(Su3Model, BasesDimensionsAndMembership) {
    const auto& b = bases();
    const auto& m = model();
    EXPECT_EQ(b.lambda11_0.cols(), 8);
    EXPECT_EQ(b.lambda20.cols(), 6);
    EXPECT_EQ(b.lambda3_12.cols(), 12);
    EXPECT_EQ(b.sym_plus0.cols(), 8);
    EXPECT_EQ(b.sym_minus.cols(), 12);
    EXPECT_EQ(b.sym0.cols(), 20);
    for (const RMat* B : {&b.lambda11_0, &b.lambda3_12, &b.sym_plus0, &b.sym_minus, &b.sym0})
        EXPECT_LT((B->transpose() * *B - RMat::Identity(B->cols(), B->cols())).cwiseAbs().maxCoeff(), 1e-12);
    for (int c = 0; c < 8; ++c) {
        Form w = b.lambda11_0.col(c);
        EXPECT_NEAR(inner(w, m.omega), 0.0, 1e-13);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                EXPECT_NEAR(eval2(w, m.J * unit_vec(i), m.J * unit_vec(j)), eval2(w, unit_vec(i), unit_vec(j)), 1e-13);
        Mat6 h = unvec_r(b.sym_plus0.col(c));
        EXPECT_TRUE(is_symmetric(h));
        EXPECT_TRUE(commutes_with_J(h));
        EXPECT_NEAR(h.trace(), 0.0, 1e-13);
    }
    for (int c = 0; c < 12; ++c) {
        Mat6 S = unvec_r(b.sym_minus.col(c));
        EXPECT_TRUE(is_symmetric(S));
        EXPECT_TRUE(anticommutes_with_J(S));
    }
}

TEST(Su3Model, SplitsReassembleAndRecoverParts) {
    const auto& m = model();
    const auto& b = bases();
    for (int t = 0; t < 20; ++t) {
        double lam = nd(rng);
        Vec6 y = rvec();
        Eigen::VectorXd c8(8);
        for (auto& x : c8) x = nd(rng);
        Form eta0 = b.lambda11_0 * c8;
        Lambda2Split s2 = split_lambda2(lam * m.omega + contract(y, m.psi_plus) + eta0);
        EXPECT_NEAR(s2.lambda, lam, 1e-12);
        EXPECT_LT((s2.y - y).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((s2.eta0 - eta0).cwiseAbs().maxCoeff(), 1e-12);

        Vec6 al = rvec();
        double ap = nd(rng), am = nd(rng);
        Eigen::VectorXd c12(12);
        for (auto& x : c12) x = nd(rng);
        Mat6 S = unvec_r(b.sym_minus * c12);
        Form f = wedge(one_form(al), m.omega) + ap * m.psi_plus + am * m.psi_minus + induced(S, m.psi_plus);
        Lambda3Split s3 = split_lambda3(f);
        EXPECT_LT((s3.alpha - al).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(s3.a_plus, ap, 1e-12);
        EXPECT_NEAR(s3.a_minus, am, 1e-12);
        EXPECT_LT((s3.s - S).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(s3.reassembly_residual, 1e-12);
        EXPECT_LT(split_lambda3(rform(3)).reassembly_residual, 1e-12);
    }
}

TEST(Su3Model, SymmetricSplitAndPhiDictionary) {
    const auto& b = bases();
    for (int t = 0; t < 10; ++t) {
        Mat6 R = Mat6::Random();
        Mat6 H = R + R.transpose();
        SymSplit s = sym_split(H);
        EXPECT_TRUE(commutes_with_J(s.h, 1e-12));
        EXPECT_TRUE(anticommutes_with_J(s.s, 1e-12));
        EXPECT_NEAR(s.h.trace(), 0.0, 1e-12);
        EXPECT_LT((s.h + s.trace_part / 6.0 * Mat6::Identity() + s.s - H).cwiseAbs().maxCoeff(), 1e-12);

        Eigen::VectorXd c8(8);
        for (auto& x : c8) x = nd(rng);
        Mat6 h = unvec_r(b.sym_plus0 * c8);
        Form phi = phi_of_h(h);
        EXPECT_LT((b.lambda11_0 * (b.lambda11_0.transpose() * phi) - phi).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((h_of_phi(phi) - h).cwiseAbs().maxCoeff(), 1e-12);
    }
    Mat6 skew = Mat6::Zero();
    skew(0, 1) = 1.0;
    EXPECT_THROW(sym_split(skew), std::invalid_argument);
}

TEST(Linalg, KernelRankAndGap) {
    RMat A = RMat::Zero(5, 4);
    A(0, 0) = 3;
    A(1, 1) = 2;
    A(2, 2) = 1e-12;
    Kernel k = kernel(A);
    EXPECT_EQ(k.rank, 2);
    EXPECT_EQ(k.dim(), 2);
    EXPECT_NEAR(k.sigma_max, 3.0, 1e-14);
    EXPECT_GT(k.spectral_gap, 1e11);
    CMat B = CMat::Random(6, 3);
    auto ang = subspace_angles(orthonormal_span(B), orthonormal_span(CMat(B * CMat::Random(3, 3))));
    EXPECT_LT(*std::max_element(ang.begin(), ang.end()), 1e-7);
}

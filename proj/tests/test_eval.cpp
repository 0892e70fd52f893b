#include <gtest/gtest.h>

#include <cmath>

#include "gsr/eval.hpp"
#include "gsr/rng.hpp"
#include "support.hpp"

namespace gsr {
namespace {

using testing::X;

Dataset make_data(std::vector<std::vector<double>> xs, std::vector<double> y) {
    Dataset ds;
    ds.x = Matrix(xs.size(), xs.empty() ? 0 : xs[0].size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs[i].size(); ++j) {
            ds.x(i, j) = xs[i][j];
        }
    }
    ds.y = std::move(y);
    return ds;
}

TEST(EvalPsi, Examples) {
    const MappingTable t = testing::wide_table(1);
    EXPECT_EQ(eval_psi(PsiMatrix({7}), t, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(eval_psi(PsiMatrix({4, 9}), t, 4.0), 128.0);
    EXPECT_DOUBLE_EQ(eval_psi(PsiMatrix({0, 8, 0}), t, std::exp(1.0)), 1.0);
}

TEST(BuildDesign, ConstantAndIdentity) {
    const MappingTable t = testing::base_table(1);
    const Dataset ds = make_data({{0.3}, {0.7}}, {2.0, 3.0});
    const std::vector<PhiMatrix> phis{PhiMatrix({{0, X, X}})};
    const std::vector<PsiMatrix> psis{PsiMatrix({1})};
    const DesignBundle b = build_design(ds, phis, psis, t, t);
    ASSERT_EQ(b.a.rows(), 2u);
    ASSERT_EQ(b.a.cols(), 2u);
    EXPECT_EQ(b.a(0, 0), 1.0);
    EXPECT_EQ(b.a(1, 0), 1.0);
    EXPECT_EQ(b.a(0, 1), -2.0);
    EXPECT_EQ(b.a(1, 1), -3.0);
    EXPECT_TRUE(b.all_finite());
}

TEST(BuildDesign, FlagsNonFiniteColumns) {
    const MappingTable t = testing::base_table(1);
    const Dataset ds = make_data({{0.0}, {1.0}}, {1.0, 2.0});
    const std::vector<PhiMatrix> phis{PhiMatrix({{5, 0, 1, X}}), PhiMatrix({{1, 0, 1, X}})};
    const std::vector<PsiMatrix> psis{PsiMatrix({1})};
    const DesignBundle b = build_design(ds, phis, psis, t, t);
    EXPECT_FALSE(b.phi_finite[0]);
    EXPECT_TRUE(b.phi_finite[1]);
    EXPECT_TRUE(b.psi_finite[0]);
    EXPECT_FALSE(b.all_finite());
}

TEST(BuildDesign, DimensionMismatchThrows) {
    const MappingTable t = testing::base_table(2);
    const Dataset ds = make_data({{0.5}}, {1.0});
    const std::vector<PhiMatrix> phis{PhiMatrix({{1, 0, 1, X}})};
    const std::vector<PsiMatrix> psis{PsiMatrix({1})};
    EXPECT_THROW(build_design(ds, phis, psis, t, t), std::invalid_argument);
}

TEST(BuildDesign, MatchesDirectAndNaiveEvaluation) {
    const MappingTable t = testing::wide_table(3);
    Rng rng(31);
    testing::Gen gen(31);
    Dataset ds;
    ds.x = Matrix(25, 3);
    for (double& v : ds.x.data()) {
        v = gen.real(0.1, 2.0);
    }
    ds.y.resize(25);
    for (double& v : ds.y) {
        v = gen.real(0.1, 2.0);
    }
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<PhiMatrix> phis;
        std::vector<PsiMatrix> psis;
        for (int j = 0; j < 25; ++j) {
            phis.push_back(random_phi(t, rng));
        }
        psis.push_back(random_psi(t, rng));
        const DesignBundle b = build_design(ds, phis, psis, t, t);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            for (std::size_t j = 0; j < phis.size(); ++j) {
                const std::vector<double> x(ds.x.row(i).begin(), ds.x.row(i).end());
                const double direct = eval_phi(phis[j], t, x);
                const double got = b.x(i, j);
                EXPECT_TRUE(got == direct || (std::isnan(got) && std::isnan(direct)));
                EXPECT_EQ(b.a(i, j), b.x(i, j)) << i << "," << j;
                const double naive = testing::naive_phi(phis[j], t, x);
                if (std::isfinite(naive)) {
                    EXPECT_NEAR(got, naive, 1e-12 * std::max(1.0, std::abs(naive)));
                    ++checked;
                }
            }
            EXPECT_EQ(b.a(i, phis.size()), -b.y(i, 0));
        }
    }
    EXPECT_GE(checked, 1000);
}

TEST(EvalPhi, SkipsDoNotChangeValue) {
    const MappingTable t = testing::wide_table(2);
    testing::Gen gen(41);
    for (int i = 0; i < 500; ++i) {
        const int code = gen.integer(1, 9);
        const int type = gen.integer(1, 2);
        const int v1 = gen.integer(1, 2);
        const int v2 = gen.integer(1, 2);
        const PhiMatrix a({{code, type, v1, v2, 0, 0, 0}});
        const PhiMatrix b({{code, type, 0, v1, 0, v2, 0}});
        const std::vector<double> x{gen.real(0.1, 2.0), gen.real(0.1, 2.0)};
        const double va = eval_phi(a, t, x);
        const double vb = eval_phi(b, t, x);
        EXPECT_TRUE(va == vb || (std::isnan(va) && std::isnan(vb)));
    }
}

TEST(EvalPhi, NeverAborts) {
    const MappingTable t = testing::wide_table(2);
    Rng rng(51);
    const std::vector<std::vector<double>> points{{0.0, 0.0}, {-1.0, -2.0}, {1e308, -1e308}, {NAN, 1.0}, {INFINITY, 0.0}};
    for (int i = 0; i < 2000; ++i) {
        const PhiMatrix m = random_phi(t, rng);
        for (const auto& x : points) {
            (void)eval_phi(m, t, x);
        }
    }
    SUCCEED();
}

} // namespace
} // namespace gsr

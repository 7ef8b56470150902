#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "collmem/fidelity.hpp"
#include "collmem/io.hpp"

namespace collmem {
namespace {

Matrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(i, j) = complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ();
}

// Embeds a 4x4 block on S into a 9x9 unitary that is the identity elsewhere.
Operator embed_on_S(const BasisHandle& b, const Matrix& block) {
    const SubspaceProjectors proj(b);
    Matrix full = Matrix::Identity(9, 9);
    const auto& s = proj.info_indices();
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            full(static_cast<Eigen::Index>(s[r]), static_cast<Eigen::Index>(s[c])) =
                block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return Operator::unitary(b, full);
}

TEST(Projectors, IdempotentWithExpectedRanks) {
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    const auto ps = proj.P_S(), pt = proj.P_T();
    EXPECT_EQ(distance(ps * ps, ps), 0.0);
    EXPECT_EQ(distance(pt * pt, pt), 0.0);
    EXPECT_DOUBLE_EQ(ps.matrix().trace().real(), 4.0);
    EXPECT_DOUBLE_EQ(pt.matrix().trace().real(), 6.0);
    EXPECT_EQ(distance(ps * pt, ps), 0.0);
    EXPECT_EQ(proj.n_info(), 4);
    for (auto i : proj.info_indices()) {
        EXPECT_EQ((*b)[i].spin, Spin::down);
        EXPECT_LE((*b)[i].n_g, 1);
        EXPECT_LE((*b)[i].n_ghat, 1);
    }
    EXPECT_THROW(SubspaceProjectors(build_basis(1)), InvalidParameter);
}

TEST(BuildM, IdenticalOperatorsGivePerfectFidelity) {
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    const auto e = evolve(SequenceParams::for_rotation(0.3, 5), b);
    const Matrix m = build_M(e.ideal, e.ideal, proj);
    EXPECT_LE((m - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(average_fidelity(m), 1.0, 1e-12);
    const auto fc = conditional_fidelity(e.ideal, e.ideal, proj);
    EXPECT_NEAR(fc.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(fc.herald, 1.0, 1e-12);
}

TEST(BuildM, DoingNothingIsNotASwap) {
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    const auto ideal = evolve(SequenceParams::for_rotation(0.3, 5), b).ideal;
    const Matrix m = build_M(Operator::identity(b), ideal, proj);
    // Swap fixes |0,0> and maps |1,1> -> -|1,1>: the trace cancels to zero.
    EXPECT_LT(std::abs(m.trace()), 4.0 - 1e-6);
    EXPECT_NEAR(std::abs(m.trace()), 0.0, 1e-12);
    EXPECT_NEAR(average_fidelity(m), 4.0 / 20.0, 1e-12);
}

TEST(BuildM, MatchesGoldenIntegrator) {
    std::ifstream in(std::string(COLLMEM_GOLDEN_DIR) + "/m_s0.5_n10.json");
    ASSERT_TRUE(in.good());
    json golden;
    in >> golden;
    const auto p = SequenceParams::for_rotation(golden.at("overlap").get<double>(), golden.at("cycles").get<int>());
    EXPECT_NEAR(p.tau, golden.at("tau").get<double>(), 1e-15);
    const auto b = build_basis(2);
    const auto e = evolve(p, b);
    const Matrix m = build_M(e.actual, e.ideal, SubspaceProjectors(b));
    const auto& rows = golden.at("rows");
    ASSERT_EQ(rows.size(), 4u);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const complex expected(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
            EXPECT_NEAR(std::abs(m(r, c) - expected), 0.0, 1e-10) << r << "," << c;
        }
}

TEST(AverageFidelity, Extremes) {
    EXPECT_DOUBLE_EQ(average_fidelity(Matrix::Identity(4, 4)), 1.0);
    EXPECT_DOUBLE_EQ(average_fidelity(Matrix::Zero(4, 4)), 0.0);
    Matrix phase = Matrix::Identity(4, 4) * std::polar(1.0, 0.7);
    EXPECT_NEAR(average_fidelity(phase), 1.0, 1e-15);
}

TEST(AverageFidelity, RandomUnitaryAgainstDirectSampling) {
    // Independent estimate: plain Haar average of |<psi|W|psi>|^2 computed here.
    std::mt19937_64 rng(5);
    const Matrix w = random_unitary(4, rng);
    std::normal_distribution<double> normal;
    const int samples = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < samples; ++k) {
        Vector psi(4);
        for (int i = 0; i < 4; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            psi(i) = complex(re, im);
        }
        psi.normalize();
        const double f = std::norm(psi.dot(w * psi));
        sum += f;
        sum2 += f * f;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
    EXPECT_NEAR(average_fidelity(w), mean, 4 * se);

    // Same unitary through the library's sampler.
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    const auto est = monte_carlo_average_fidelity(embed_on_S(b, w), Operator::identity(b), proj, {100000, 9, 2});
    EXPECT_NEAR(est.mean, average_fidelity(w), 4 * est.std_error);
}

TEST(Conditional, ThresholdPointAtLowOverlap) {
    const auto r = evaluate(SequenceParams::for_rotation(0.1, 19));
    EXPECT_GE(r.conditional_fidelity, 0.999);
    EXPECT_GE(r.herald, 0.93);
    EXPECT_LE(r.herald, 0.97);
    EXPECT_NEAR(r.conditional_fidelity, r.fidelity / r.herald, 1e-12);
    const auto r18 = evaluate(SequenceParams::for_rotation(0.1, 18));
    EXPECT_LT(r18.conditional_fidelity, 0.999);
}

TEST(Conditional, MonteCarloAgrees) {
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    for (auto [s, n] : {std::pair{0.3, 10}, std::pair{0.9, 40}}) {
        const auto e = evolve(SequenceParams::for_rotation(s, n), b);
        const auto exact = conditional_fidelity(e.actual, e.ideal, proj);
        const MonteCarloOptions opt{100000, 17, 2};
        const auto mc = monte_carlo_conditional_fidelity(e.actual, e.ideal, proj, opt);
        EXPECT_NEAR(mc.fidelity.mean, exact.fidelity, 3.5 * mc.fidelity.std_error) << s;
        EXPECT_NEAR(mc.herald.mean, exact.herald, 3.5 * mc.herald.std_error) << s;
        const auto avg = monte_carlo_average_fidelity(e.actual, e.ideal, proj, opt);
        EXPECT_NEAR(avg.mean, average_fidelity(build_M(e.actual, e.ideal, proj)), 3.5 * avg.std_error) << s;
        EXPECT_GT(mc.fidelity.std_error, 0.0);
    }
}

TEST(Conditional, VanishingHeraldThrows) {
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    const Operator zero = Operator::zero(b);
    EXPECT_THROW(conditional_fidelity(zero, Operator::identity(b), proj), DegenerateConditioning);
    EXPECT_THROW(monte_carlo_conditional_fidelity(zero, Operator::identity(b), proj, {100, 1, 1}),
                 DegenerateConditioning);
}

TEST(FindMinN, KnownThresholds) {
    EXPECT_EQ(find_min_N(0.1, 0.999, 1000).cycles, 19);
    EXPECT_EQ(find_min_N(0.9, 0.999, 1000).cycles, 80);
    EXPECT_EQ(find_min_N(0.5, 0.0, 10).cycles, 1);
}

TEST(FindMinN, NotFoundCarriesBest) {
    try {
        find_min_N(0.1, 0.999, 10);
        FAIL() << "expected NotFound";
    } catch (const NotFound& e) {
        EXPECT_EQ(e.best_cycles(), 10);
        EXPECT_NEAR(e.best_fidelity(), evaluate(SequenceParams::for_rotation(0.1, 10)).conditional_fidelity, 1e-15);
    }
    EXPECT_THROW(find_min_N(1.0, 0.999, 10), InvalidParameter);
    EXPECT_THROW(find_min_N(0.1, 1.0, 10), InvalidParameter);
    EXPECT_THROW(find_min_N(0.1, 0.9, 0), InvalidParameter);
}

TEST(HaarSampler, NormalizedIsotropicDeterministic) {
    HaarSampler a(42, 4), b(42, 4), c(43, 4);
    Matrix mean_proj = Matrix::Zero(4, 4);
    const int samples = 100000;
    bool differs = false;
    for (int k = 0; k < samples; ++k) {
        const Vector va = a.sample();
        const Vector vb = b.sample();
        const Vector vc = c.sample();
        ASSERT_NEAR(va.norm(), 1.0, 1e-14);
        ASSERT_EQ(va, vb);
        if (va != vc) differs = true;
        mean_proj += va * va.adjoint();
    }
    mean_proj /= samples;
    EXPECT_LE((mean_proj - 0.25 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 5e-3);
    EXPECT_TRUE(differs);
    EXPECT_THROW(HaarSampler(1, 0), InvalidParameter);
}

TEST(MonteCarlo, SeedDeterminismAndStreams) {
    const auto b = build_basis(2);
    const SubspaceProjectors proj(b);
    const auto e = evolve(SequenceParams::for_rotation(0.5, 10), b);
    const auto x = monte_carlo_conditional_fidelity(e.actual, e.ideal, proj, {20000, 3, 4});
    const auto y = monte_carlo_conditional_fidelity(e.actual, e.ideal, proj, {20000, 3, 4});
    EXPECT_EQ(x.fidelity.mean, y.fidelity.mean);
    EXPECT_EQ(x.herald.std_error, y.herald.std_error);
    EXPECT_NE(stream_seed(3, 0), stream_seed(3, 1));
    EXPECT_NE(stream_seed(3, 0), stream_seed(4, 0));
    EXPECT_THROW(monte_carlo_average_fidelity(e.actual, e.ideal, proj, {1, 3, 1}), InvalidParameter);
}

TEST(Properties, ReportInvariantsOverGrid) {
    const auto b = build_basis(2);
    for (int k = 1; k <= 9; k += 2) {
        const double s = 0.1 * k;
        double previous_infidelity = 1.0;
        for (int n = 5; n <= 60; n += 5) {
            const auto r = evaluate(SequenceParams::for_rotation(s, n), b);
            EXPECT_GE(r.fidelity, 0.0);
            EXPECT_LE(r.fidelity, 1.0 + 1e-12);
            EXPECT_LE(r.conditional_fidelity, 1.0 + 1e-12);
            EXPECT_GE(r.conditional_fidelity, r.fidelity);
            EXPECT_GT(r.herald, 0.0);
            EXPECT_LE(r.herald, 1.0 + 1e-12);
            EXPECT_NEAR(r.total, 4.0 * n * r.tau, 1e-12);
            EXPECT_LT(1.0 - r.fidelity, previous_infidelity) << s << " " << n;
            previous_infidelity = 1.0 - r.fidelity;
        }
    }
}

TEST(Properties, LargerOverlapIsHarder) {
    const auto b = build_basis(2);
    for (int n : {10, 40, 100}) {
        double previous = 2.0;
        for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double f = evaluate(SequenceParams::for_rotation(s, n), b).fidelity;
            EXPECT_LT(f, previous) << s << " " << n;
            previous = f;
        }
    }
}

}  // namespace
}  // namespace collmem

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "singsys/descriptor.hpp"
#include "singsys/samuelson.hpp"

using namespace singsys;
namespace sm = singsys::samuelson;

namespace {

DescriptorSystem samuelson_system(double a, double b, double gbar) {
    return sm::build_system(sm::SamuelsonParams(a, b, sm::GovernmentExpenditure::constant(gbar)));
}

void expect_vec_near(const Vector& got, const Vector& want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (Eigen::Index i = 0; i < got.size(); ++i) {
        EXPECT_NEAR(got(i), want(i), tol) << "component " << i;
    }
}

// Index-1 pencil with rank(F) = m - 1 and a random G.
MatrixPencil random_index_one(std::mt19937_64& rng, Eigen::Index m) {
    return {oracle::random_rank_deficient(rng, m, m - 1), oracle::random_matrix(rng, m, m)};
}

// Consistent states satisfy L^T (G Y + V) = 0 with L spanning the left kernel of F.
Vector project_to_consistent(const MatrixPencil& pencil, const Vector& V, Vector Y) {
    Eigen::JacobiSVD<Matrix> svd(pencil.F(), Eigen::ComputeFullU);
    const auto r = oracle::svd_rank(pencil.F());
    const Matrix L = svd.matrixU().rightCols(pencil.rows() - r);
    const Matrix A = L.transpose() * pencil.G();
    const Vector defect = L.transpose() * (pencil.G() * Y + V);
    Eigen::JacobiSVD<Matrix> fix(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Y -= fix.solve(defect);
    return Y;
}

bool brute_force_consistent(const MatrixPencil& pencil, const Vector& V, const Vector& Y) {
    Matrix augmented(pencil.rows(), pencil.cols() + 1);
    augmented << pencil.F(), pencil.G() * Y + V;
    return oracle::svd_rank(augmented) == oracle::svd_rank(pencil.F());
}

}  // namespace

TEST(InputSequence, SampledSupportAndMissingValues) {
    const auto seq = InputSequence::sampled(3, {Vector{{1.0}}, Vector{{2.0}}});
    EXPECT_FALSE(seq.has(2));
    EXPECT_TRUE(seq.has(4));
    EXPECT_EQ(seq.last_index(), 4);
    EXPECT_EQ(seq.at(4)(0), 2.0);
    EXPECT_THROW((void)seq.at(5), MissingInput);
    EXPECT_FALSE(InputSequence::zero(2).last_index().has_value());
}

TEST(DescriptorSystem, RejectsIrregularPencilAndWrongInputDimension) {
    EXPECT_THROW(DescriptorSystem(MatrixPencil(Matrix::Zero(2, 2), Matrix::Zero(2, 2)),
                                  InputSequence::zero(2), 0),
                 IrregularPencil);
    EXPECT_THROW(DescriptorSystem(sm::build_pencil(0.5, 1.0), InputSequence::zero(2), 2),
                 InvalidPencil);
}

TEST(ForcedTerm, ZeroInputGivesZero) {
    const auto system = samuelson_system(0.5, 1.0, 0.0);
    const auto w = weierstrass_decompose(system.pencil());
    for (std::int64_t k = 2; k < 8; ++k) {
        EXPECT_EQ(max_abs(forced_term(system, w, k).value), 0.0);
    }
}

TEST(ForcedTerm, MatchesZeroStartRecursion) {
    // With C = 0 the solution is the path started from T0 = T1 = 0.
    const auto system = samuelson_system(0.5, 1.0, 1.0);
    const auto w = weierstrass_decompose(system.pencil());
    expect_vec_near(forced_term(system, w, 2).value, Vector{{1.0, 0.0, 0.0}}, 1e-13);
    expect_vec_near(forced_term(system, w, 3).value, Vector{{2.0, 0.5, 0.5}}, 1e-13);
    expect_vec_near(forced_term(system, w, 4).value, Vector{{2.5, 1.0, 0.5}}, 1e-13);
}

TEST(ForcedTerm, MissingLookaheadInputThrows) {
    const DescriptorSystem system(sm::build_pencil(0.5, 1.0),
                                  InputSequence::sampled(0, {Vector::Ones(3), Vector::Ones(3),
                                                             Vector::Ones(3)}),
                                  2);
    const auto w = weierstrass_decompose(system.pencil());
    EXPECT_NO_THROW(forced_term(system, w, 2));
    EXPECT_THROW(forced_term(system, w, 3), MissingInput);
    EXPECT_THROW(forced_term(system, w, 1), MissingInput);
}

TEST(ForcedTerm, IndexTwoNeedsOneStepOfLookahead) {
    Matrix F = Matrix::Zero(2, 2);
    F(0, 0) = 1;
    Matrix G(2, 2);
    G << 0, 1, 1, 0;
    const DescriptorSystem system({F, G}, InputSequence::sampled(0, {Vector{{1.0, 2.0}},
                                                                     Vector{{3.0, 4.0}}}),
                                  0);
    const auto w = weierstrass_decompose(system.pencil());
    ASSERT_EQ(w.q_star, 2);
    EXPECT_NO_THROW(forced_term(system, w, 0));
    EXPECT_THROW(forced_term(system, w, 1), MissingInput);
    // rows: y1(k+1) = y2(k) + v1(k), 0 = y1(k) + v2(k)
    // so y1(0) = -v2(0) and y2(0) = -v2(1) - v1(0)
    const Vector y0 = forced_term(system, w, 0).value;
    EXPECT_NEAR(y0(0), -2.0, 1e-13);
    EXPECT_NEAR(y0(1), -4.0 - 1.0, 1e-13);
}

TEST(SolveGeneral, HomogeneousOscillationDecaysByFactorSixteenPerPeriod) {
    // roots 0.5 +/- 0.5i: modulus 1/sqrt(2), angle pi/4
    const auto system = samuelson_system(0.5, 1.0, 0.0);
    const auto w = weierstrass_decompose(system.pencil());
    const auto traj = solve_general(system, w, Vector{{1.0, -0.3}}, 40);
    for (std::int64_t k = 2; k + 8 <= 40; ++k) {
        expect_vec_near(traj.at(k + 8), traj.at(k) / 16.0, 1e-14);
    }
    EXPECT_LT(trajectory_residual(system, traj), 1e-14);
}

TEST(SolveGeneral, RejectsBadArguments) {
    const auto system = samuelson_system(0.5, 1.0, 1.0);
    const auto w = weierstrass_decompose(system.pencil());
    EXPECT_THROW(solve_general(system, w, Vector::Zero(3), 10), InvalidParameters);
    EXPECT_THROW(solve_general(system, w, Vector::Zero(2), 1), InvalidParameters);
}

TEST(SolveGeneral, PropertyLinearInModesAndInputs) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = 0.1 + 0.8 * (0.5 + 0.5 * u(rng));
        const double b = 0.1 + 3.9 * (0.5 + 0.5 * u(rng));
        const auto pencil = sm::build_pencil(a, b);
        std::vector<Vector> v1, v2, v12;
        for (int k = 0; k <= 25; ++k) {
            v1.push_back(Vector{{u(rng), u(rng), u(rng)}});
            v2.push_back(Vector{{u(rng), u(rng), u(rng)}});
            v12.push_back(v1.back() + v2.back());
        }
        const DescriptorSystem s1(pencil, InputSequence::sampled(0, v1), 2);
        const DescriptorSystem s2(pencil, InputSequence::sampled(0, v2), 2);
        const DescriptorSystem s12(pencil, InputSequence::sampled(0, v12), 2);
        const auto w = weierstrass_decompose(pencil);
        const Vector c1{{u(rng), u(rng)}};
        const Vector c2{{u(rng), u(rng)}};
        const auto y1 = solve_general(s1, w, c1, 25);
        const auto y2 = solve_general(s2, w, c2, 25);
        const auto y12 = solve_general(s12, w, c1 + c2, 25);
        for (std::int64_t k = 2; k <= 25; ++k) {
            const Vector sum = y1.at(k) + y2.at(k);
            EXPECT_LT(max_abs(Vector(y12.at(k) - sum)), 1e-9 * std::max(1.0, max_abs(sum)));
        }
    }
}

TEST(Consistency, SamuelsonExamples) {
    const sm::SamuelsonParams params(0.5, 1.0, sm::GovernmentExpenditure::constant(1.0));
    const auto system = sm::build_system(params);
    const auto w = weierstrass_decompose(system.pencil());
    const auto good = check_consistency(system, w, sm::consistent_initial_state(params, 0, 0, 1));
    EXPECT_TRUE(good.consistent);
    EXPECT_LT(good.residual, 1e-14);
    ASSERT_TRUE(good.Z.has_value());
    // shifting along the infinite direction breaks the algebraic constraint
    InitialCondition bad = sm::consistent_initial_state(params, 0, 0, 1);
    bad.Y0 += w.Q_q().col(0);
    const auto report = check_consistency(system, w, bad);
    EXPECT_FALSE(report.consistent);
    EXPECT_NEAR(report.residual, 1.0 / 3.0, 1e-12);
    // wrong length or non-finite states are never consistent
    EXPECT_FALSE(check_consistency(system, w, {2, Vector::Zero(2)}).consistent);
    EXPECT_FALSE(check_consistency(system, w, {2, Vector::Constant(3, NAN)}).consistent);
    EXPECT_THROW(check_consistency(system, w, {1, Vector::Zero(3)}), InvalidParameters);
}

TEST(Consistency, PropertyAgreesWithRankTestOnIndexOnePencils) {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int consistent_seen = 0;
    int inconsistent_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto pencil = random_index_one(rng, 3);
        const Vector V{{u(rng), u(rng), u(rng)}};
        const DescriptorSystem system(pencil, InputSequence::constant(V), 0);
        const auto w = weierstrass_decompose(pencil);
        ASSERT_EQ(w.q_star, 1);
        Vector Y{{u(rng), u(rng), u(rng)}};
        if (trial % 2 == 0) Y = project_to_consistent(pencil, V, Y);
        const bool expected = brute_force_consistent(pencil, V, Y);
        const auto report = check_consistency(system, w, {0, Y});
        EXPECT_EQ(report.consistent, expected) << "trial " << trial << " residual "
                                               << report.residual;
        (expected ? consistent_seen : inconsistent_seen)++;
    }
    EXPECT_GT(consistent_seen, 50);
    EXPECT_GT(inconsistent_seen, 50);
}

TEST(SolveIvp, InconsistentInitialStateThrows) {
    const sm::SamuelsonParams params(0.5, 1.0, sm::GovernmentExpenditure::constant(1.0));
    const auto system = sm::build_system(params);
    const auto w = weierstrass_decompose(system.pencil());
    EXPECT_THROW(solve_ivp(system, w, sm::consistent_initial_state(params, 0, 0, 5), 10),
                 InconsistentIC);
}

TEST(SolveIvp, ReproducesInitialStateAndRecursion) {
    const sm::SamuelsonParams params(0.7, 2.0, sm::GovernmentExpenditure::constant(1.5));
    const auto system = sm::build_system(params);
    const auto w = weierstrass_decompose(system.pencil());
    const auto ic = sm::consistent_initial_state(params, 1.0, 2.0, sm::natural_t2(params, 1.0, 2.0));
    const auto traj = solve_ivp(system, w, ic, 30);
    EXPECT_EQ(traj.start_index, 2);
    expect_vec_near(traj.at(2), ic.Y0, 1e-12);
    const auto T = oracle::income(0.7, 2.0, 1.0, 2.0, 30, [](std::int64_t) { return 1.5; });
    for (std::int64_t k = 2; k <= 30; ++k) {
        const double scale = std::max(1.0, std::abs(T[static_cast<std::size_t>(k)]));
        EXPECT_NEAR(traj.at(k)(0), T[static_cast<std::size_t>(k)], 1e-11 * scale);
    }
}

TEST(SolveIvp, LaterInitialIndexOnGeneralPencil) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto pencil = random_index_one(rng, 3);
    const Vector V{{u(rng), u(rng), u(rng)}};
    const DescriptorSystem system(pencil, InputSequence::constant(V), 0);
    const auto w = weierstrass_decompose(pencil);
    const auto base = solve_general(system, w, Vector{{0.3, -0.2}}, 12);
    const auto later = solve_ivp(system, w, {5, base.at(5)}, 12);
    EXPECT_EQ(later.start_index, 5);
    for (std::int64_t k = 5; k <= 12; ++k) {
        EXPECT_LT(max_abs(Vector(later.at(k) - base.at(k))),
                  1e-9 * std::max(1.0, max_abs(base.at(k))));
    }
}

TEST(SolveIvp, PropertyUniqueAndDeterministic) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = 0.05 + 0.9 * u(rng);
        const double b = 0.05 + 3.9 * u(rng);
        const sm::SamuelsonParams params(a, b, sm::GovernmentExpenditure::constant(u(rng)));
        const auto system = sm::build_system(params);
        const auto w = weierstrass_decompose(system.pencil());
        const double T0 = u(rng), T1 = u(rng);
        const auto ic = sm::consistent_initial_state(params, T0, T1, sm::natural_t2(params, T0, T1));
        const auto first = solve_ivp(system, w, ic, 40);
        const auto second = solve_ivp(system, w, ic, 40);
        ASSERT_EQ(first.states.size(), second.states.size());
        for (std::size_t i = 0; i < first.states.size(); ++i) {
            EXPECT_TRUE((first.states[i].array() == second.states[i].array()).all());
        }
        // a second consistent start on the same path gives the same continuation
        const auto restarted = solve_ivp(system, w, {10, first.at(10)}, 40);
        for (std::int64_t k = 10; k <= 40; ++k) {
            EXPECT_LT(max_abs(Vector(restarted.at(k) - first.at(k))),
                      1e-8 * std::max(1.0, max_abs(first.at(k))));
        }
    }
}

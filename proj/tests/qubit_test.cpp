#include "sdiqkd/qubit.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "sdiqkd/rng.hpp"
#include "test_util.hpp"

using namespace sdiqkd;

namespace {

void expect_matrix_near(const Matrix2& m, const Matrix2& ref, double tol = 1e-12) {
    EXPECT_NEAR(std::abs(m.a00 - ref.a00), 0.0, tol);
    EXPECT_NEAR(std::abs(m.a01 - ref.a01), 0.0, tol);
    EXPECT_NEAR(std::abs(m.a10 - ref.a10), 0.0, tol);
    EXPECT_NEAR(std::abs(m.a11 - ref.a11), 0.0, tol);
}

}  // namespace

TEST(BlochToDensity, PlusZIsGroundStateProjector) {
    expect_matrix_near(bloch_to_density({0, 0, 1}), Matrix2{1.0, 0.0, 0.0, 0.0});
}

TEST(BlochToDensity, OriginIsMaximallyMixed) {
    expect_matrix_near(bloch_to_density({0, 0, 0}), Matrix2{0.5, 0.0, 0.0, 0.5});
}

TEST(BlochToDensity, PlusXHasAllEntriesHalf) {
    expect_matrix_near(bloch_to_density({1, 0, 0}), Matrix2{0.5, 0.5, 0.5, 0.5});
}

TEST(BlochToDensity, RejectsSuperunitVector) {
    EXPECT_THROW(bloch_to_density({1.0, 1.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(bloch_to_density({0.0, 0.0, 1.0 + 1e-9}), std::invalid_argument);
    EXPECT_NO_THROW(bloch_to_density({0.0, 0.0, 1.0 + 1e-13}));
}

TEST(BlochToDensity, RoundTripsWithDensityToBloch) {
    CounterRng rng(11, 0);
    for (int i = 0; i < 200; ++i) {
        const double radius = rng.next_double();
        const BlochVector r = test_util::random_unit(rng) * radius;
        const BlochVector back = density_to_bloch(bloch_to_density(r));
        EXPECT_NEAR(back.x, r.x, 1e-12);
        EXPECT_NEAR(back.y, r.y, 1e-12);
        EXPECT_NEAR(back.z, r.z, 1e-12);
    }
}

TEST(DensityValidation, RejectsNonHermitianAndNonPositive) {
    EXPECT_FALSE(is_valid_density_matrix({0.5, 0.2, 0.3, 0.5}));        // not hermitian
    EXPECT_FALSE(is_valid_density_matrix({0.7, 0.0, 0.0, 0.7}));        // trace != 1
    EXPECT_FALSE(is_valid_density_matrix({1.5, 0.0, 0.0, -0.5}));       // negative eigenvalue
    EXPECT_TRUE(is_valid_density_matrix(bloch_to_density({0.3, -0.4, 0.5})));
}

TEST(BornRule, EigenstateGivesCertainOutcome) {
    EXPECT_DOUBLE_EQ(born_zero_prob({0, 0, 1}, BinaryMeasurement({0, 0, 1})), 1.0);
}

TEST(BornRule, MaximallyMixedIsUniform) {
    CounterRng rng(12, 0);
    for (int i = 0; i < 20; ++i) {
        EXPECT_DOUBLE_EQ(born_zero_prob({0, 0, 0}, BinaryMeasurement(test_util::random_unit(rng))), 0.5);
    }
}

TEST(BornRule, DiagonalAxisGivesCosSquaredPiOverEight) {
    const double s = 1.0 / std::sqrt(2.0);
    const double c = std::cos(M_PI / 8.0);
    EXPECT_NEAR(born_zero_prob({0, 0, 1}, BinaryMeasurement({s, 0, s})), c * c, 1e-15);
}

TEST(BornRule, OutcomesSumToOneExactly) {
    CounterRng rng(13, 0);
    for (int i = 0; i < 200; ++i) {
        const BlochVector state = test_util::random_unit(rng) * rng.next_double();
        const BinaryMeasurement meas(test_util::random_unit(rng));
        const double p0 = born_zero_prob(state, meas);
        EXPECT_GE(p0, 0.0);
        EXPECT_LE(p0, 1.0);
        EXPECT_EQ(p0 + born_one_prob(state, meas), 1.0);
    }
}

TEST(BornRule, BlochFormMatchesMatrixTraceForm) {
    CounterRng rng(14, 0);
    for (int i = 0; i < 1000; ++i) {
        const BlochVector state = test_util::random_unit(rng) * rng.next_double();
        const BinaryMeasurement meas(test_util::random_unit(rng));
        EXPECT_NEAR(born_zero_prob(state, meas), born_zero_prob_trace(bloch_to_density(state), meas),
                    1e-12);
    }
}

TEST(Projection, CollapsesOntoMeasurementEigenstate) {
    const BlochVector out = project_after_measurement({1, 0, 0}, BinaryMeasurement({0, 0, 1}), 0);
    EXPECT_DOUBLE_EQ(out.x, 0.0);
    EXPECT_DOUBLE_EQ(out.y, 0.0);
    EXPECT_DOUBLE_EQ(out.z, 1.0);
}

TEST(Projection, EigenstateIsFixedPoint) {
    const BlochVector out = project_after_measurement({0, 0, 1}, BinaryMeasurement({0, 0, 1}), 0);
    EXPECT_DOUBLE_EQ(out.z, 1.0);
}

// The averaged post-measurement state must be the projection (r.n) n. The
// oracle runs through the matrix picture: rho' = P0 rho P0 + P1 rho P1.
TEST(Projection, AveragedPostStateMatchesMatrixOracle) {
    CounterRng rng(15, 0);
    for (int i = 0; i < 100; ++i) {
        const BlochVector r = test_util::random_unit(rng) * rng.next_double();
        const BlochVector n = test_util::random_unit(rng);
        const BinaryMeasurement meas(n);

        const Matrix2 rho = bloch_to_density(r);
        const Matrix2 p0 = effect_matrix(meas, 0);
        const Matrix2 p1 = effect_matrix(meas, 1);
        const BlochVector oracle = density_to_bloch(p0 * rho * p0 + p1 * rho * p1);

        // Bloch route: mixture of +-n weighted by the Born probabilities.
        const double w0 = born_zero_prob(r, meas);
        const BlochVector avg = project_after_measurement(r, meas, 0) * w0 +
                                project_after_measurement(r, meas, 1) * (1.0 - w0);

        const BlochVector projected = n * r.dot(n);
        EXPECT_NEAR(avg.x, projected.x, 1e-12);
        EXPECT_NEAR(avg.y, projected.y, 1e-12);
        EXPECT_NEAR(avg.z, projected.z, 1e-12);
        EXPECT_NEAR(oracle.x, projected.x, 1e-12);
        EXPECT_NEAR(oracle.y, projected.y, 1e-12);
        EXPECT_NEAR(oracle.z, projected.z, 1e-12);
    }
}

TEST(Measurement, RejectsNonUnitAxis) {
    EXPECT_THROW(BinaryMeasurement({0.5, 0, 0}), std::invalid_argument);
    EXPECT_NO_THROW(BinaryMeasurement::along({0.5, 0, 0}));
    EXPECT_THROW(normalized({0, 0, 0}), std::domain_error);
}

TEST(Measurement, EffectsAreProjectorsSummingToIdentity) {
    CounterRng rng(16, 0);
    for (int i = 0; i < 50; ++i) {
        const BinaryMeasurement meas(test_util::random_unit(rng));
        const Matrix2 p0 = effect_matrix(meas, 0);
        const Matrix2 p1 = effect_matrix(meas, 1);
        expect_matrix_near(p0 * p0, p0);
        expect_matrix_near(p1 * p1, p1);
        expect_matrix_near(p0 + p1, Matrix2::identity());
    }
}

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace sdiqkd {

/// Tolerance used by the geometric invariants (state norms, hermiticity,
/// unit axes). Everything in the qubit layer is validated against it.
inline constexpr double kGeomTol = 1e-12;

/// Real 3-vector representing a qubit density matrix rho = (I + r.sigma)/2.
/// Pure states have |r| = 1, the maximally mixed state is r = 0.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
    BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
    BlochVector operator-() const { return {-x, -y, -z}; }
    BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline BlochVector operator*(double s, const BlochVector& v) { return v * s; }

inline bool is_valid_state(const BlochVector& r, double tol = kGeomTol) {
    return r.norm() <= 1.0 + tol;
}

inline bool is_unit(const BlochVector& r, double tol = kGeomTol) {
    return std::abs(r.norm() - 1.0) <= tol;
}

/// Unit vector along v; throws on (numerically) zero input.
inline BlochVector normalized(const BlochVector& v) {
    const double n = v.norm();
    if (n < 1e-300) {
        throw std::domain_error("normalized: zero vector has no direction");
    }
    return v * (1.0 / n);
}

/// Complex 2x2 matrix, row-major. Used for density matrices and measurement
/// effects; the Bloch picture is the canonical representation, the matrix
/// form exists for cross-checks and attack arithmetic.
struct Matrix2 {
    std::complex<double> a00, a01, a10, a11;

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
    static Matrix2 pauli_y() {
        return {0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0};
    }
    static Matrix2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

    std::complex<double> trace() const { return a00 + a11; }
    std::complex<double> det() const { return a00 * a11 - a01 * a10; }

    Matrix2 operator+(const Matrix2& o) const {
        return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
    }
    Matrix2 operator-(const Matrix2& o) const {
        return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11};
    }
    Matrix2 operator*(const Matrix2& o) const {
        return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
                a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
    }
    Matrix2 operator*(std::complex<double> s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
};

using DensityMatrix = Matrix2;

/// Hermitian, unit trace, positive semidefinite (all within tol).
inline bool is_valid_density_matrix(const Matrix2& m, double tol = kGeomTol) {
    if (std::abs(m.a01 - std::conj(m.a10)) > tol) return false;
    if (std::abs(m.a00.imag()) > tol || std::abs(m.a11.imag()) > tol) return false;
    if (std::abs(m.trace() - 1.0) > tol) return false;
    // eigenvalues of a trace-one hermitian 2x2: (1 +- sqrt(1 - 4 det)) / 2
    const double det = m.det().real();
    const double disc = std::max(0.0, 1.0 - 4.0 * det);
    const double eig_min = 0.5 * (1.0 - std::sqrt(disc));
    return eig_min >= -tol;
}

/// rho = (I + x sigma_x + y sigma_y + z sigma_z) / 2. Rejects |r| > 1 + tol.
inline DensityMatrix bloch_to_density(const BlochVector& r) {
    if (!is_valid_state(r)) {
        throw std::invalid_argument("bloch_to_density: |r| > 1, not a physical state");
    }
    return {std::complex<double>(0.5 * (1.0 + r.z), 0.0),
            std::complex<double>(0.5 * r.x, -0.5 * r.y),
            std::complex<double>(0.5 * r.x, 0.5 * r.y),
            std::complex<double>(0.5 * (1.0 - r.z), 0.0)};
}

inline BlochVector density_to_bloch(const DensityMatrix& m) {
    if (!is_valid_density_matrix(m)) {
        throw std::invalid_argument("density_to_bloch: not a density matrix");
    }
    return {2.0 * m.a01.real(), -2.0 * m.a01.imag(), m.a00.real() - m.a11.real()};
}

/// Binary projective measurement along a unit Bloch axis.
/// Convention, fixed globally: outcome b = 0 is the projector onto the +1
/// eigenspace of axis.sigma, outcome b = 1 the -1 eigenspace.
struct BinaryMeasurement {
    BlochVector axis;

    explicit BinaryMeasurement(const BlochVector& n) : axis(n) {
        if (!is_unit(n)) {
            throw std::invalid_argument("BinaryMeasurement: axis must be a unit vector");
        }
    }

    /// Measurement along the direction of v (normalizes first).
    static BinaryMeasurement along(const BlochVector& v) { return BinaryMeasurement(normalized(v)); }
};

/// Projector (I + n.sigma)/2 for outcome 0, (I - n.sigma)/2 for outcome 1.
inline Matrix2 effect_matrix(const BinaryMeasurement& meas, int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("effect_matrix: outcome must be 0 or 1");
    }
    const double s = (outcome == 0) ? 0.5 : -0.5;
    const BlochVector& n = meas.axis;
    Matrix2 m = Matrix2::identity() * std::complex<double>(0.5, 0.0);
    m = m + Matrix2::pauli_x() * std::complex<double>(s * n.x, 0.0);
    m = m + Matrix2::pauli_y() * std::complex<double>(s * n.y, 0.0);
    m = m + Matrix2::pauli_z() * std::complex<double>(s * n.z, 0.0);
    return m;
}

/// P(b = 0) = (1 + r.n)/2, clamped to [0, 1] against roundoff.
inline double born_zero_prob(const BlochVector& state, const BinaryMeasurement& meas) {
    if (!is_valid_state(state)) {
        throw std::invalid_argument("born_zero_prob: |r| > 1, not a physical state");
    }
    return std::clamp(0.5 * (1.0 + state.dot(meas.axis)), 0.0, 1.0);
}

/// Complement, computed as 1 - p so the two outcomes sum to one exactly.
inline double born_one_prob(const BlochVector& state, const BinaryMeasurement& meas) {
    return 1.0 - born_zero_prob(state, meas);
}

/// Same probability through tr(rho Pi_+); the matrix-trace route, kept as an
/// independent check on the Bloch-form rule.
inline double born_zero_prob_trace(const DensityMatrix& rho, const BinaryMeasurement& meas) {
    return (rho * effect_matrix(meas, 0)).trace().real();
}

/// Post-measurement eigenstate: +axis for outcome 0, -axis for outcome 1.
inline BlochVector project_after_measurement(const BlochVector& state,
                                             const BinaryMeasurement& meas, int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("project_after_measurement: outcome must be 0 or 1");
    }
    (void)state;  // the collapsed state does not depend on the input state
    return (outcome == 0) ? meas.axis : -meas.axis;
}

}  // namespace sdiqkd

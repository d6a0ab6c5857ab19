#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "sdiqkd/qubit.hpp"
#include "sdiqkd/rng.hpp"
#include "sdiqkd/setup.hpp"
#include "sdiqkd/witness.hpp"

namespace sdiqkd {

/// See-saw search for the best qubit value of a witness.
///
/// The witness is linear in each preparation and each measurement effect, so
/// extreme points suffice: pure preparations, and for each y either a
/// projective measurement along an axis or one of the two trivial effects
/// (the constant outcome, reached when a column profits from ignoring the
/// system entirely). Without the trivial effects the classical bit bound
/// C_2 is not always reachable, since a constant decode map has no
/// measurement axis.
///
/// Both half-steps are closed-form in the Bloch picture. For fixed
/// projective axes n_y the best preparation is r_a = v_a / |v_a| with
/// v_a = sum_y w[a][y] n_y, giving the column value
/// (1/2) sum_a w[a][y] + (1/2) n_y . sum_a w[a][y] r_a; the axis update is
/// the same expression with the roles exchanged, compared against the two
/// constant-outcome values.
enum class MeasurementMode { projective, always_zero, always_one };

struct SeesawOptions {
    int restarts = 20;  // random restarts, in addition to the classical warm start
    std::uint64_t seed = 0;
    double tolerance = 1e-12;  // stop when the value changes less than this
    int max_iterations = 10000;
};

struct SeesawResult {
    double value = 0.0;
    QuantumSetup setup;  // axes are meaningful for the projective columns
    std::array<MeasurementMode, 2> modes{MeasurementMode::projective, MeasurementMode::projective};
    int best_restart = -1;  // -1 is the classical warm start
    int iterations = 0;     // iterations used by the best restart
};

namespace detail {

/// Uniform direction on the sphere (Marsaglia rejection).
inline BlochVector random_unit_vector(CounterRng& rng) {
    for (;;) {
        const double u = 2.0 * rng.next_double() - 1.0;
        const double v = 2.0 * rng.next_double() - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double f = 2.0 * std::sqrt(1.0 - s);
        return {u * f, v * f, 1.0 - 2.0 * s};
    }
}

struct SeesawState {
    std::array<BlochVector, 4> preps{};
    std::array<BlochVector, 2> axes{BlochVector{0, 0, 1}, BlochVector{1, 0, 0}};
    std::array<MeasurementMode, 2> modes{MeasurementMode::projective, MeasurementMode::projective};
};

/// Alternates exact block maximizations until the value settles; the value
/// never decreases, so a feasible starting point is a floor on the result.
inline double seesaw_iterate(const Witness& w, SeesawState& st, double tolerance,
                             int max_iterations, int& iterations) {
    std::array<double, 2> column_sum{};
    for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 4; ++a) column_sum[static_cast<std::size_t>(y)] += static_cast<double>(w(a, y));

    double value = -std::numeric_limits<double>::infinity();
    for (iterations = 0; iterations < max_iterations; ++iterations) {
        // measurement step: per column, best of projective / constant 0 / constant 1
        double new_value = 0.0;
        for (int y = 0; y < 2; ++y) {
            BlochVector m{};
            for (int a = 0; a < 4; ++a) m = m + static_cast<double>(w(a, y)) * st.preps[static_cast<std::size_t>(a)];
            const double norm = m.norm();
            if (norm > 0.0) st.axes[static_cast<std::size_t>(y)] = m * (1.0 / norm);
            const double projective = 0.5 * column_sum[static_cast<std::size_t>(y)] + 0.5 * norm;
            const double const_zero = column_sum[static_cast<std::size_t>(y)];
            if (projective >= const_zero && projective >= 0.0) {
                st.modes[static_cast<std::size_t>(y)] = MeasurementMode::projective;
                new_value += projective;
            } else if (const_zero >= 0.0) {
                st.modes[static_cast<std::size_t>(y)] = MeasurementMode::always_zero;
                new_value += const_zero;
            } else {
                st.modes[static_cast<std::size_t>(y)] = MeasurementMode::always_one;
            }
        }

        // preparation step: constant columns exert no pull on the states
        for (int a = 0; a < 4; ++a) {
            BlochVector v{};
            for (int y = 0; y < 2; ++y) {
                if (st.modes[static_cast<std::size_t>(y)] == MeasurementMode::projective) {
                    v = v + static_cast<double>(w(a, y)) * st.axes[static_cast<std::size_t>(y)];
                }
            }
            const double n = v.norm();
            if (n > 0.0) st.preps[static_cast<std::size_t>(a)] = v * (1.0 / n);
            // zero gradient: keep the previous preparation
        }

        if (std::abs(new_value - value) < tolerance) {
            value = new_value;
            break;
        }
        value = new_value;
    }
    return value;
}

/// Orthogonal-state embedding of a deterministic bit strategy; its see-saw
/// value equals the strategy's witness value exactly, which floors the
/// search at the classical bound.
inline SeesawState classical_embedding(const DeterministicStrategy& s) {
    SeesawState st;
    for (int a = 0; a < 4; ++a) {
        st.preps[static_cast<std::size_t>(a)] =
            s.encode[static_cast<std::size_t>(a)] == 0 ? BlochVector{0, 0, 1} : BlochVector{0, 0, -1};
    }
    return st;
}

}  // namespace detail

inline SeesawResult quantum_value_seesaw(const Witness& w, const SeesawOptions& opt = {}) {
    if (opt.restarts < 1) throw std::invalid_argument("quantum_value_seesaw: restarts must be >= 1");

    double best_value = 0.0;
    detail::SeesawState best_state;
    int best_restart = 0;
    int best_iters = 0;
    bool first = true;

    // restart -1: deterministic warm start from a classical maximizer
    // restarts 0..n-1: random, with per-restart streams derived by index so
    // the search is a pure function of (seed, restarts)
    for (int restart = -1; restart < opt.restarts; ++restart) {
        detail::SeesawState st;
        if (restart < 0) {
            st = detail::classical_embedding(classical_bound(w, 2).maximizer);
        } else {
            CounterRng rng(opt.seed, static_cast<std::uint64_t>(restart));
            for (auto& r : st.preps) r = detail::random_unit_vector(rng);
            for (auto& n : st.axes) n = detail::random_unit_vector(rng);
        }

        int iters = 0;
        const double value = detail::seesaw_iterate(w, st, opt.tolerance, opt.max_iterations, iters);
        if (first || value > best_value) {
            best_value = value;
            best_state = st;
            best_restart = restart;
            best_iters = iters;
            first = false;
        }
    }

    QuantumSetup setup(best_state.preps, {BinaryMeasurement(normalized(best_state.axes[0])),
                                          BinaryMeasurement(normalized(best_state.axes[1]))});
    return {best_value, setup, best_state.modes, best_restart, best_iters};
}

}  // namespace sdiqkd

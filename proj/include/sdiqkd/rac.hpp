#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sdiqkd/qubit.hpp"
#include "sdiqkd/setup.hpp"
#include "sdiqkd/table.hpp"
#include "sdiqkd/witness.hpp"

namespace sdiqkd {

/// Average success probability of the 2-to-1 random-access code read off a
/// data table: P_B = (S + 4)/8. Defined for arbitrary tables; the scenario
/// treats the table as raw data, so no physicality check is imposed.
inline double rac_success(const DataTable& t) {
    return (eval_witness(witness_S(), t) + 4.0) / 8.0;
}

inline Rational rac_success(const ExactTable& t) {
    return (eval_witness(witness_S(), t) + 4) / 8;
}

/// The same quantity summed directly: (1/8) sum_{a,y} P(b = a_y | a, y).
/// Kept as an independent route; the witness identity and this sum must
/// agree on every table.
inline double rac_success_direct(const DataTable& t) {
    double total = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) {
            total += (bit_of(a, y) == 0) ? t(a, y) : 1.0 - t(a, y);
        }
    return total / 8.0;
}

/// The four BB84 preparations: rho_00 = +z, rho_11 = -z, rho_10 = +x,
/// rho_01 = -x (computational and diagonal eigenstates).
inline std::array<BlochVector, 4> bb84_preparations() {
    std::array<BlochVector, 4> preps{};
    preps[prep_index(0, 0)] = {0, 0, 1};
    preps[prep_index(1, 1)] = {0, 0, -1};
    preps[prep_index(1, 0)] = {1, 0, 0};
    preps[prep_index(0, 1)] = {-1, 0, 0};
    return preps;
}

/// BB84: the preparations above measured along z (y = 0) and x (y = 1).
/// Its table reaches S = 2 and is classically reproducible with one bit.
inline QuantumSetup bb84_setup() {
    return QuantumSetup(bb84_preparations(),
                        {BinaryMeasurement({0, 0, 1}), BinaryMeasurement({1, 0, 0})});
}

/// BB84 preparations with the two diagonal measurement axes, reaching
/// S = 2 sqrt(2). Under the fixed outcome convention (b = 0 on the +1
/// eigenspace) the axis assignment is forced by the witness value:
/// n_0 along z - x and n_1 along z + x. The opposite assignment is the
/// same physics under relabeled outcomes and evaluates to S = -2 sqrt(2).
inline QuantumSetup optimal_setup() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return QuantumSetup(bb84_preparations(),
                        {BinaryMeasurement({-inv_sqrt2, 0, inv_sqrt2}),
                         BinaryMeasurement({inv_sqrt2, 0, inv_sqrt2})});
}

/// All four preparations maximally mixed; every correlator is 1/2.
inline QuantumSetup mixed_setup() {
    return QuantumSetup({BlochVector{}, BlochVector{}, BlochVector{}, BlochVector{}},
                        {BinaryMeasurement({0, 0, 1}), BinaryMeasurement({1, 0, 0})});
}

/// Named setups used by the command-line tool and the test fixtures.
inline QuantumSetup builtin_setup(std::string_view name) {
    if (name == "bb84") return bb84_setup();
    if (name == "optimal") return optimal_setup();
    if (name == "mixed") return mixed_setup();
    throw std::invalid_argument("unknown built-in setup '" + std::string(name) +
                                "' (expected bb84, optimal, or mixed)");
}

/// The one-bit shared-randomness strategy that reproduces the BB84 table
/// exactly. lambda = 0: send m = a0, output m xor y; lambda = 1: send
/// m = a1, output m. Each branch drawn with probability 1/2.
inline SharedRandomnessStrategy bb84_classical_strategy() {
    const DeterministicStrategy basis_branch(
        2, {0, 0, 1, 1},          // encode a -> a0
        {{0, 1}, {1, 0}});        // decode(m, y) = m xor y
    const DeterministicStrategy bit_branch(
        2, {0, 1, 0, 1},          // encode a -> a1
        {{0, 0}, {1, 1}});        // decode(m, y) = m
    return SharedRandomnessStrategy({{Rational(1, 2), basis_branch},
                                     {Rational(1, 2), bit_branch}});
}

}  // namespace sdiqkd

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdiqkd/qubit.hpp"
#include "sdiqkd/rac.hpp"
#include "sdiqkd/rng.hpp"
#include "sdiqkd/setup.hpp"
#include "sdiqkd/table.hpp"

namespace sdiqkd {

enum class AttackKind { none, intercept_resend };

/// How the eavesdropper picks the bit she reports. She measures before the
/// basis announcement but may condition her final guess on the announced y:
/// map_per_y gives her the Bayes-optimal guess of a_y for every y, fixed_bit
/// models an eavesdropper locked onto one bit position.
enum class EveGuessMode { map_per_y, fixed_bit };

/// Intercept-resend eavesdropper: measures every flying qubit along one axis
/// with the same strategy, forwards the post-measurement eigenstate, and maps
/// (her outcome, announced y) to a guess through a fixed decision table.
struct AttackModel {
    AttackKind kind = AttackKind::none;
    BlochVector eve_axis{0.0, 0.0, 1.0};
    std::array<std::array<int, 2>, 2> decision{};  // [outcome][y] -> guess for a_y
};

inline AttackModel no_attack() { return {}; }

/// Outcome probability P(o | a) for Eve's measurement along a unit axis.
inline double eve_outcome_prob(const QuantumSetup& setup, const BlochVector& axis, int outcome,
                               int a) {
    const BinaryMeasurement m(axis);
    const double p0 = born_zero_prob(setup.preparations[static_cast<std::size_t>(a)], m);
    return outcome == 0 ? p0 : 1.0 - p0;
}

/// Maximum-a-posteriori guess of bit a_y from Eve's outcome, given that the
/// four preparations are equiprobable. Ties resolve to guess 0.
inline std::array<std::array<int, 2>, 2> map_decision_table(const QuantumSetup& setup,
                                                            const BlochVector& axis) {
    std::array<std::array<int, 2>, 2> dec{};
    for (int o = 0; o < 2; ++o)
        for (int y = 0; y < 2; ++y) {
            double score[2] = {0.0, 0.0};
            for (int a = 0; a < 4; ++a) {
                score[bit_of(a, y)] += eve_outcome_prob(setup, axis, o, a);
            }
            dec[static_cast<std::size_t>(o)][static_cast<std::size_t>(y)] = score[1] > score[0] ? 1 : 0;
        }
    return dec;
}

/// MAP guess of one fixed bit position j, per outcome.
inline std::array<int, 2> map_decision_fixed_bit(const QuantumSetup& setup,
                                                 const BlochVector& axis, int j) {
    std::array<int, 2> dec{};
    for (int o = 0; o < 2; ++o) {
        double score[2] = {0.0, 0.0};
        for (int a = 0; a < 4; ++a) score[bit_of(a, j)] += eve_outcome_prob(setup, axis, o, a);
        dec[static_cast<std::size_t>(o)] = score[1] > score[0] ? 1 : 0;
    }
    return dec;
}

/// Builds the intercept-resend attack with the Bayes-optimal decision table.
/// The axis is normalized first.
inline AttackModel intercept_resend_attack(const QuantumSetup& setup, const BlochVector& axis) {
    AttackModel attack;
    attack.kind = AttackKind::intercept_resend;
    attack.eve_axis = normalized(axis);
    attack.decision = map_decision_table(setup, attack.eve_axis);
    return attack;
}

/// Exact table seen by Bob under the attack: every preparation r collapses
/// to its projection (r.e)e onto Eve's axis before Bob measures. With no
/// attack this is just the quantum table of the setup.
inline DataTable analytic_attacked_table(const QuantumSetup& setup, const AttackModel& attack) {
    if (attack.kind == AttackKind::none) return quantum_table(setup);
    std::array<BlochVector, 4> projected{};
    for (int a = 0; a < 4; ++a) {
        const BlochVector& r = setup.preparations[static_cast<std::size_t>(a)];
        projected[static_cast<std::size_t>(a)] = attack.eve_axis * r.dot(attack.eve_axis);
    }
    return quantum_table(QuantumSetup(projected, setup.measurements));
}

/// Eve's exact average success probability at guessing a_y, averaged over
/// the uniform inputs (a0, a1, y), with her decision table.
inline double analytic_eve_success(const QuantumSetup& setup, const AttackModel& attack) {
    if (attack.kind == AttackKind::none) {
        throw std::invalid_argument("analytic_eve_success: no attack configured");
    }
    double total = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y)
            for (int o = 0; o < 2; ++o) {
                if (attack.decision[static_cast<std::size_t>(o)][static_cast<std::size_t>(y)] == bit_of(a, y)) {
                    total += eve_outcome_prob(setup, attack.eve_axis, o, a);
                }
            }
    return total / 8.0;
}

/// Success of the fixed-bit eavesdropper locked onto position j, still
/// scored against the announced bit a_y.
inline double analytic_eve_success_fixed_bit(const QuantumSetup& setup, const BlochVector& axis,
                                             int j) {
    const auto dec = map_decision_fixed_bit(setup, axis, j);
    double total = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y)
            for (int o = 0; o < 2; ++o) {
                if (dec[static_cast<std::size_t>(o)] == bit_of(a, y)) {
                    total += eve_outcome_prob(setup, axis, o, a);
                }
            }
    return total / 8.0;
}

// ---------------------------------------------------------------------------
// Monte Carlo protocol runs.

/// Additive tallies of a set of protocol rounds. Merging is associative and
/// commutative, so a run can be chunked arbitrarily without changing the
/// result.
struct RoundTallies {
    std::uint64_t rounds = 0;
    std::array<std::array<std::array<std::uint64_t, 2>, 4>, 2> counts{};  // [b][a][y]
    std::uint64_t bob_correct = 0;
    std::uint64_t eve_correct = 0;
    std::uint64_t revealed = 0;
    std::uint64_t revealed_errors = 0;
};

inline RoundTallies merge(const RoundTallies& x, const RoundTallies& y) {
    RoundTallies out = x;
    out.rounds += y.rounds;
    for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 4; ++a)
            for (int yy = 0; yy < 2; ++yy)
                out.counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)][static_cast<std::size_t>(yy)] +=
                    y.counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)][static_cast<std::size_t>(yy)];
    out.bob_correct += y.bob_correct;
    out.eve_correct += y.eve_correct;
    out.revealed += y.revealed;
    out.revealed_errors += y.revealed_errors;
    return out;
}

/// Rounds [first, last) of the protocol. Each round's randomness derives
/// from (seed, round index) alone. Per round: draw a0, a1, y uniformly; if
/// attacking, Eve measures along her axis and forwards the eigenstate; Bob
/// measures M_y; after y is announced Eve guesses via her decision table.
/// A seeded coin marks the round as revealed for error estimation.
inline RoundTallies run_rounds(const QuantumSetup& setup, std::uint64_t first, std::uint64_t last,
                               std::uint64_t seed, const AttackModel& attack,
                               double sacrifice_fraction = 0.10) {
    if (sacrifice_fraction < 0.0 || sacrifice_fraction > 1.0) {
        throw std::invalid_argument("run_rounds: sacrifice_fraction must be in [0, 1]");
    }
    RoundTallies t;
    const bool attacking = attack.kind == AttackKind::intercept_resend;
    const BinaryMeasurement eve_meas = attacking ? BinaryMeasurement(attack.eve_axis)
                                                 : BinaryMeasurement({0.0, 0.0, 1.0});
    for (std::uint64_t round = first; round < last; ++round) {
        CounterRng rng(seed, round);
        const std::uint64_t word = rng.next_u64();
        const int a0 = static_cast<int>(word & 1u);
        const int a1 = static_cast<int>((word >> 1) & 1u);
        const int y = static_cast<int>((word >> 2) & 1u);
        const int a = prep_index(a0, a1);

        BlochVector state = setup.preparations[static_cast<std::size_t>(a)];
        int eve_guess = -1;
        if (attacking) {
            const int o = rng.next_double() < born_zero_prob(state, eve_meas) ? 0 : 1;
            state = project_after_measurement(state, eve_meas, o);
            eve_guess = attack.decision[static_cast<std::size_t>(o)][static_cast<std::size_t>(y)];
        }
        const int b = rng.next_double() < born_zero_prob(state, setup.measurements[static_cast<std::size_t>(y)]) ? 0 : 1;
        const bool reveal = rng.next_double() < sacrifice_fraction;

        ++t.rounds;
        ++t.counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
        const int alice_key_bit = bit_of(a, y);
        if (b == alice_key_bit) ++t.bob_correct;
        if (attacking && eve_guess == alice_key_bit) ++t.eve_correct;
        if (reveal) {
            ++t.revealed;
            if (b != alice_key_bit) ++t.revealed_errors;
        }
    }
    return t;
}

/// Estimates derived from the tallies of a complete run.
struct SimulationResult {
    std::uint64_t rounds = 0;
    std::array<std::array<std::array<std::uint64_t, 2>, 4>, 2> counts{};  // [b][a][y]
    std::optional<DataTable> estimated_table;  // present when every cell was sampled
    std::array<std::array<double, 2>, 4> standard_error{};  // per-cell binomial error
    std::optional<double> p_bob_hat;
    std::optional<double> p_eve_hat;  // present when an attack was active
    std::uint64_t revealed_rounds = 0;
    std::uint64_t key_rounds = 0;
    std::optional<double> revealed_error_rate;
};

inline SimulationResult finalize_result(const RoundTallies& t, bool attack_active) {
    SimulationResult r;
    r.rounds = t.rounds;
    r.counts = t.counts;
    r.revealed_rounds = t.revealed;
    r.key_rounds = t.rounds - t.revealed;
    bool all_cells = t.rounds > 0;
    DataTable est;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) {
            const std::uint64_t n0 = t.counts[0][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
            const std::uint64_t n1 = t.counts[1][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
            const std::uint64_t n = n0 + n1;
            if (n == 0) {
                all_cells = false;
                continue;
            }
            const double p = static_cast<double>(n0) / static_cast<double>(n);
            est(a, y) = p;
            r.standard_error[static_cast<std::size_t>(a)][static_cast<std::size_t>(y)] =
                std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        }
    if (all_cells) r.estimated_table = est;
    if (t.rounds > 0) {
        r.p_bob_hat = static_cast<double>(t.bob_correct) / static_cast<double>(t.rounds);
        if (attack_active) r.p_eve_hat = static_cast<double>(t.eve_correct) / static_cast<double>(t.rounds);
    }
    if (t.revealed > 0) {
        r.revealed_error_rate = static_cast<double>(t.revealed_errors) / static_cast<double>(t.revealed);
    }
    return r;
}

/// Complete seeded run: bit-identical results for identical
/// (setup, rounds, seed, attack, sacrifice_fraction).
inline SimulationResult run_protocol(const QuantumSetup& setup, std::uint64_t rounds,
                                     std::uint64_t seed, const AttackModel& attack = no_attack(),
                                     double sacrifice_fraction = 0.10) {
    const RoundTallies t = run_rounds(setup, 0, rounds, seed, attack, sacrifice_fraction);
    return finalize_result(t, attack.kind == AttackKind::intercept_resend);
}

// ---------------------------------------------------------------------------
// Attack scans.

struct EveScanPoint {
    BlochVector axis;
    double p_bob = 0.0;
    double p_eve = 0.0;
};

struct EveScanResult {
    std::vector<EveScanPoint> points;
    double max_sum = 0.0;  // max of p_bob + p_eve over the grid
    std::size_t argmax = 0;
};

/// Analytic sweep of intercept-resend axes over the x-z great circle
/// (sufficient for planar setups): axis k is at angle 2 pi k / resolution
/// from +z. Reports Bob's and Eve's exact success per axis and the maximum
/// of their sum.
inline EveScanResult scan_eve_attacks(const QuantumSetup& setup, int resolution,
                                      EveGuessMode mode = EveGuessMode::map_per_y) {
    if (resolution < 1) throw std::invalid_argument("scan_eve_attacks: resolution must be >= 1");
    EveScanResult out;
    out.points.reserve(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) {
        const double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(resolution);
        const BlochVector axis = normalized({std::sin(theta), 0.0, std::cos(theta)});
        const AttackModel attack = intercept_resend_attack(setup, axis);
        EveScanPoint pt;
        pt.axis = axis;
        pt.p_bob = rac_success(analytic_attacked_table(setup, attack));
        if (mode == EveGuessMode::map_per_y) {
            pt.p_eve = analytic_eve_success(setup, attack);
        } else {
            pt.p_eve = std::max(analytic_eve_success_fixed_bit(setup, axis, 0),
                                analytic_eve_success_fixed_bit(setup, axis, 1));
        }
        if (out.points.empty() || pt.p_bob + pt.p_eve > out.max_sum) {
            out.max_sum = pt.p_bob + pt.p_eve;
            out.argmax = out.points.size();
        }
        out.points.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization.

inline nlohmann::json to_json(const AttackModel& a) {
    if (a.kind == AttackKind::none) return {{"kind", "none"}};
    return {{"kind", "intercept_resend"},
            {"axis", to_json(a.eve_axis)},
            {"decision", {{a.decision[0][0], a.decision[0][1]}, {a.decision[1][0], a.decision[1][1]}}}};
}

/// Accepts {"kind": "none"} or {"kind": "intercept_resend", "axis": [x,y,z]};
/// the decision table is always rebuilt from the setup.
inline AttackModel attack_from_json(const QuantumSetup& setup, const nlohmann::json& j) {
    const std::string kind = j.value("kind", "none");
    if (kind == "none") return no_attack();
    if (kind != "intercept_resend") {
        throw std::invalid_argument("attack JSON: unknown kind '" + kind + "'");
    }
    if (!j.contains("axis")) {
        throw std::invalid_argument("attack JSON: intercept_resend needs \"axis\"");
    }
    return intercept_resend_attack(setup, bloch_from_json(j.at("axis")));
}

/// Counts as an 8x2 integer array (rows in flat cell order, columns b=0, 1)
/// plus the derived estimates.
inline nlohmann::json to_json(const SimulationResult& r) {
    nlohmann::json counts = nlohmann::json::array();
    for (int k = 0; k < 8; ++k) {
        const int a = k / 2, y = k % 2;
        counts.push_back({r.counts[0][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)],
                          r.counts[1][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)]});
    }
    nlohmann::json j{{"rounds", r.rounds},
                     {"counts", counts},
                     {"revealed_rounds", r.revealed_rounds},
                     {"key_rounds", r.key_rounds}};
    if (r.estimated_table) {
        j["estimated_table"] = to_json(*r.estimated_table);
        nlohmann::json se = nlohmann::json::array();
        for (int k = 0; k < 8; ++k)
            se.push_back(r.standard_error[static_cast<std::size_t>(k / 2)][static_cast<std::size_t>(k % 2)]);
        j["standard_error"] = se;
    }
    if (r.p_bob_hat) j["p_bob_hat"] = *r.p_bob_hat;
    if (r.p_eve_hat) j["p_eve_hat"] = *r.p_eve_hat;
    if (r.revealed_error_rate) j["revealed_error_rate"] = *r.revealed_error_rate;
    return j;
}

/// Per-cell summary rows: cell, counts, estimate, binomial error.
inline std::string simulation_csv(const SimulationResult& r) {
    std::ostringstream os;
    os.precision(12);
    os << "cell,count_b0,count_b1,e_hat,std_error\n";
    for (int k = 0; k < 8; ++k) {
        const int a = k / 2, y = k % 2;
        const std::uint64_t n0 = r.counts[0][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
        const std::uint64_t n1 = r.counts[1][static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
        os << kTableCellNames[static_cast<std::size_t>(k)] << ',' << n0 << ',' << n1 << ',';
        if (n0 + n1 > 0) {
            os << static_cast<double>(n0) / static_cast<double>(n0 + n1) << ','
               << r.standard_error[static_cast<std::size_t>(a)][static_cast<std::size_t>(y)];
        } else {
            os << ',';
        }
        os << '\n';
    }
    if (r.p_bob_hat) os << "p_bob_hat,,," << *r.p_bob_hat << ",\n";
    if (r.p_eve_hat) os << "p_eve_hat,,," << *r.p_eve_hat << ",\n";
    return os.str();
}

}  // namespace sdiqkd

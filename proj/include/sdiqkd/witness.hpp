#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdiqkd/rational.hpp"
#include "sdiqkd/table.hpp"

namespace sdiqkd {

/// A dimension witness: a linear functional sum_{a,y} w[a][y] E[a][y] on data
/// tables, with exact integer coefficients. Classical d-level strategies obey
/// a bound C_d; quantum qubit tables can exceed the d = 2 bound.
struct Witness {
    std::array<std::array<long long, 2>, 4> w{};
    std::map<int, Rational> bounds;  // cached classical bounds, keyed by d

    long long& operator()(int a, int y) { return w[static_cast<std::size_t>(a)][static_cast<std::size_t>(y)]; }
    long long operator()(int a, int y) const { return w[static_cast<std::size_t>(a)][static_cast<std::size_t>(y)]; }
};

/// The QKD witness: w[a0a1][y] = (-1)^{a_y}, i.e. coefficients
/// (+1,+1,+1,-1,-1,+1,-1,-1) in flat cell order, with classical bit bound 2.
inline Witness witness_S() {
    Witness s;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) s(a, y) = (bit_of(a, y) == 0) ? 1 : -1;
    s.bounds[2] = 2;
    return s;
}

inline double eval_witness(const Witness& w, const DataTable& t) {
    double v = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) v += static_cast<double>(w(a, y)) * t(a, y);
    return v;
}

inline Rational eval_witness(const Witness& w, const ExactTable& t) {
    Rational v = 0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) v += Rational(w(a, y)) * t(a, y);
    return v;
}

inline long long eval_witness_cells(const Witness& w, const std::array<int, 8>& cells) {
    long long v = 0;
    for (int k = 0; k < 8; ++k) v += w(k / 2, k % 2) * cells[static_cast<std::size_t>(k)];
    return v;
}

// ---------------------------------------------------------------------------
// Classical bounds by exhaustive enumeration.

/// Thrown when an enumeration would exceed the configured strategy budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultStrategyBudget = 20'000'000;

/// Number of deterministic strategies d^4 * 2^(2d), or nullopt on overflow.
inline std::optional<std::uint64_t> deterministic_strategy_count(int d) {
    if (d < 1) return std::nullopt;
    if (2 * d >= 63) return std::nullopt;
    long double count = std::pow(static_cast<long double>(d), 4.0L) *
                        std::pow(2.0L, static_cast<long double>(2 * d));
    if (count > 9e18L) return std::nullopt;
    std::uint64_t n = 1;
    for (int i = 0; i < 4; ++i) n *= static_cast<std::uint64_t>(d);
    return n << (2 * d);
}

struct ClassicalBoundResult {
    Rational bound;
    DeterministicStrategy maximizer;
};

/// Exact maximum of the witness over all d^4 * 2^(2d) deterministic
/// strategies, in integer arithmetic. Shared randomness cannot exceed the
/// deterministic maximum by convexity. Also returns one maximizing strategy.
inline ClassicalBoundResult classical_bound(const Witness& w, int d,
                                            std::uint64_t max_strategies = kDefaultStrategyBudget) {
    if (d < 1) throw std::invalid_argument("classical_bound: d must be >= 1");
    const auto count = deterministic_strategy_count(d);
    if (!count || *count > max_strategies) {
        throw BudgetError("classical_bound: d = " + std::to_string(d) +
                          " needs more than the budgeted " + std::to_string(max_strategies) +
                          " strategies");
    }
    const std::uint64_t n_encode = [&] {
        std::uint64_t n = 1;
        for (int i = 0; i < 4; ++i) n *= static_cast<std::uint64_t>(d);
        return n;
    }();
    const std::uint64_t n_decode = std::uint64_t{1} << (2 * d);

    long long best = 0;
    std::uint64_t best_enc = 0, best_dec = 0;
    bool first = true;
    for (std::uint64_t enc = 0; enc < n_encode; ++enc) {
        std::array<int, 4> encode{};
        std::uint64_t v = enc;
        for (int a = 0; a < 4; ++a) {
            encode[static_cast<std::size_t>(a)] = static_cast<int>(v % static_cast<std::uint64_t>(d));
            v /= static_cast<std::uint64_t>(d);
        }
        // per-message column sums: W[m][y] = sum of w[a][y] over a with encode[a] = m
        for (std::uint64_t dec = 0; dec < n_decode; ++dec) {
            long long value = 0;
            for (int a = 0; a < 4; ++a) {
                const int m = encode[static_cast<std::size_t>(a)];
                for (int y = 0; y < 2; ++y) {
                    const int bit = static_cast<int>((dec >> (2 * m + y)) & 1u);
                    if (bit == 0) value += w(a, y);
                }
            }
            if (first || value > best) {
                best = value;
                best_enc = enc;
                best_dec = dec;
                first = false;
            }
        }
    }
    return {Rational(best), DeterministicStrategy::from_indices(d, best_enc, best_dec)};
}

// ---------------------------------------------------------------------------
// Scenario symmetries: relabelings of preparations, of y, and of outcomes
// per y. They act affinely on tables and contragradiently on witnesses.

struct ScenarioSymmetry {
    std::array<int, 4> prep_perm{0, 1, 2, 3};  // preparation a maps to prep_perm[a]
    bool swap_y = false;                       // exchanged before the flips
    std::array<bool, 2> flip_output{false, false};  // E -> 1 - E on (new) column y

    bool operator==(const ScenarioSymmetry&) const = default;
};

inline ScenarioSymmetry identity_symmetry() { return {}; }

/// Destination cell of (a, y): a goes to prep_perm[a], y to y ^ swap_y.
inline std::pair<int, int> symmetry_image(const ScenarioSymmetry& g, int a, int y) {
    return {g.prep_perm[static_cast<std::size_t>(a)], g.swap_y ? 1 - y : y};
}

template <typename Scalar>
BasicDataTable<Scalar> apply_symmetry(const ScenarioSymmetry& g, const BasicDataTable<Scalar>& t) {
    BasicDataTable<Scalar> out;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) {
            const auto [da, dy] = symmetry_image(g, a, y);
            out(da, dy) = g.flip_output[static_cast<std::size_t>(dy)] ? Scalar(1) - t(a, y) : t(a, y);
        }
    return out;
}

/// Offset such that eval(g.w, g.t) = eval(w, t) - offset, where (g.w) is the
/// contragredient witness below. Equals the sum of transported coefficients
/// landing in flipped columns.
inline long long symmetry_offset(const ScenarioSymmetry& g, const Witness& w) {
    long long off = 0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) {
            const auto [da, dy] = symmetry_image(g, a, y);
            (void)da;
            if (g.flip_output[static_cast<std::size_t>(dy)]) off += w(a, y);
        }
    return off;
}

/// Contragredient action: (g.w)[g(a, y)] = +-w[a][y], negated on flipped
/// columns. Cached bounds are dropped (they are representation-dependent).
inline Witness apply_symmetry(const ScenarioSymmetry& g, const Witness& w) {
    Witness out;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) {
            const auto [da, dy] = symmetry_image(g, a, y);
            out(da, dy) = g.flip_output[static_cast<std::size_t>(dy)] ? -w(a, y) : w(a, y);
        }
    return out;
}

/// Transports an inequality w.E <= c to its image: (g.w).E <= c - offset.
inline std::pair<Witness, Rational> transform_inequality(const ScenarioSymmetry& g,
                                                         const Witness& w, const Rational& c) {
    return {apply_symmetry(g, w), c - Rational(symmetry_offset(g, w))};
}

/// g2 after g1 (first g1, then g2).
inline ScenarioSymmetry compose(const ScenarioSymmetry& g2, const ScenarioSymmetry& g1) {
    ScenarioSymmetry out;
    for (int a = 0; a < 4; ++a)
        out.prep_perm[static_cast<std::size_t>(a)] =
            g2.prep_perm[static_cast<std::size_t>(g1.prep_perm[static_cast<std::size_t>(a)])];
    out.swap_y = g1.swap_y != g2.swap_y;
    for (int y = 0; y < 2; ++y) {
        // flip seen at final column y: g2's flip at y, plus g1's flip at the
        // column that g2 maps onto y (g2 swaps after g1's flips).
        const int mid = g2.swap_y ? 1 - y : y;
        out.flip_output[static_cast<std::size_t>(y)] =
            g2.flip_output[static_cast<std::size_t>(y)] != g1.flip_output[static_cast<std::size_t>(mid)];
    }
    return out;
}

inline ScenarioSymmetry inverse(const ScenarioSymmetry& g) {
    ScenarioSymmetry out;
    for (int a = 0; a < 4; ++a) out.prep_perm[static_cast<std::size_t>(g.prep_perm[static_cast<std::size_t>(a)])] = a;
    out.swap_y = g.swap_y;
    for (int y = 0; y < 2; ++y) {
        const int src = g.swap_y ? 1 - y : y;
        out.flip_output[static_cast<std::size_t>(y)] = g.flip_output[static_cast<std::size_t>(src)];
    }
    return out;
}

/// The full 4! * 2 * 4 = 192 element relabeling group.
inline std::vector<ScenarioSymmetry> all_symmetries() {
    std::vector<ScenarioSymmetry> out;
    out.reserve(192);
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        for (int sw = 0; sw < 2; ++sw)
            for (int f0 = 0; f0 < 2; ++f0)
                for (int f1 = 0; f1 < 2; ++f1) {
                    ScenarioSymmetry g;
                    g.prep_perm = perm;
                    g.swap_y = (sw == 1);
                    g.flip_output = {f0 == 1, f1 == 1};
                    out.push_back(g);
                }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization: {"w": [[int;2];4], "bounds": {"d": "p/q"}}.

inline nlohmann::json to_json(const Witness& w) {
    nlohmann::json rows = nlohmann::json::array();
    for (int a = 0; a < 4; ++a) rows.push_back({w(a, 0), w(a, 1)});
    nlohmann::json bounds = nlohmann::json::object();
    for (const auto& [d, c] : w.bounds) bounds[std::to_string(d)] = to_fraction_string(c);
    return {{"w", rows}, {"bounds", bounds}};
}

inline Witness witness_from_json(const nlohmann::json& j) {
    if (!j.contains("w") || !j.at("w").is_array() || j.at("w").size() != 4) {
        throw std::invalid_argument("witness JSON needs \"w\" as a 4x2 integer array");
    }
    Witness w;
    for (int a = 0; a < 4; ++a) {
        const auto& row = j.at("w")[static_cast<std::size_t>(a)];
        if (!row.is_array() || row.size() != 2) {
            throw std::invalid_argument("witness JSON rows must have 2 integer entries");
        }
        for (int y = 0; y < 2; ++y) w(a, y) = row[static_cast<std::size_t>(y)].get<long long>();
    }
    if (j.contains("bounds")) {
        for (const auto& [key, val] : j.at("bounds").items()) {
            w.bounds[std::stoi(key)] = parse_fraction(val.get<std::string>());
        }
    }
    return w;
}

}  // namespace sdiqkd

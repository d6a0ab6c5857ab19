#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "sdiqkd/rac.hpp"
#include "sdiqkd/table.hpp"

namespace sdiqkd {

// Closed-form constants are always computed from their formulas, never typed
// as rounded decimals, so tolerance assertions against them are meaningful.

/// (5 + sqrt(3))/4: the ceiling on P_B + P_E for individual attacks on one
/// transmitted qubit.
inline double bob_eve_tradeoff_bound() { return (5.0 + std::sqrt(3.0)) / 4.0; }

/// (5 + sqrt(3))/8: Bob's success probability above which he is guaranteed
/// to out-guess the eavesdropper.
inline double security_threshold() { return (5.0 + std::sqrt(3.0)) / 8.0; }

/// cos^2(pi/8): the optimal qubit success probability of the 2-to-1 code.
inline double optimal_qubit_success() {
    const double c = std::cos(M_PI / 8.0);
    return c * c;
}

/// Shannon binary entropy in bits, with 0 log 0 = 0.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("binary_entropy: p must be in [0, 1]");
    }
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Per-symbol mutual information 1 - h(p) of a binary channel that delivers
/// the right bit with probability p.
inline double mutual_information_bits(double p_correct) {
    return 1.0 - binary_entropy(p_correct);
}

/// Ceiling on guessing a random balanced function of an n-bit string from s
/// transmitted qubits: (1 + sqrt((2^s - 1)/(2^n - 1)))/2.
inline double konig_bound(int n, int s) {
    if (n < 1 || s < 0 || s > n) {
        throw std::domain_error("konig_bound: need n >= 1 and 0 <= s <= n");
    }
    const double num = std::exp2(static_cast<double>(s)) - 1.0;
    const double den = std::exp2(static_cast<double>(n)) - 1.0;
    return 0.5 * (1.0 + std::sqrt(num / den));
}

/// Eve's best average guessing probability given Bob's: the linear trade-off
/// (5 + sqrt(3))/4 - p_bob, before the probability clamp.
inline double eve_guess_bound_raw(double p_bob) {
    if (!(p_bob >= 0.5 && p_bob <= 1.0)) {
        throw std::domain_error("eve_guess_bound: p_bob must be in [1/2, 1]");
    }
    return bob_eve_tradeoff_bound() - p_bob;
}

/// Clamped to [1/2, 1]: a probability caps at 1, and 1/2 is always reachable
/// by guessing blind.
inline double eve_guess_bound(double p_bob) {
    return std::clamp(eve_guess_bound_raw(p_bob), 0.5, 1.0);
}

/// Asymptotic one-way key rate I(A:B) - I(A:E) in bits per sifted symbol,
/// signed. Positive exactly above the security threshold (and negative in
/// the clamped region below it).
inline double key_rate(double p_bob) {
    return mutual_information_bits(p_bob) - mutual_information_bits(eve_guess_bound(p_bob));
}

/// Everything the trade-off analysis says about one data table.
struct SecurityReport {
    double p_bob = 0.0;
    double p_eve_bound = 0.0;      // clamped to [1/2, 1]
    double p_eve_bound_raw = 0.0;  // the linear bound before clamping
    double i_ab = 0.0;             // bits
    double i_ae = 0.0;             // bits
    double key_rate = 0.0;         // signed, bits per sifted symbol
    double nonneg_key_rate = 0.0;  // max(0, key_rate)
    bool secure = false;           // strict threshold comparison
    double threshold = 0.0;        // (5 + sqrt(3))/8
};

/// Assembles the report from P_B alone; the table enters only through the
/// witness value. Requires p_bob in [1/2, 1].
inline SecurityReport security_report_from_pb(double p_bob) {
    SecurityReport r;
    r.p_bob = p_bob;
    r.p_eve_bound_raw = eve_guess_bound_raw(p_bob);
    r.p_eve_bound = std::clamp(r.p_eve_bound_raw, 0.5, 1.0);
    r.i_ab = mutual_information_bits(p_bob);
    r.i_ae = mutual_information_bits(r.p_eve_bound);
    r.key_rate = r.i_ab - r.i_ae;
    r.nonneg_key_rate = std::max(0.0, r.key_rate);
    r.threshold = security_threshold();
    r.secure = p_bob > r.threshold;
    return r;
}

inline SecurityReport security_report(const DataTable& t) {
    return security_report_from_pb(rac_success(t));
}

/// Full report plus the constants in use, for audit.
inline nlohmann::json to_json(const SecurityReport& r) {
    return {{"p_bob", r.p_bob},
            {"p_eve_bound", r.p_eve_bound},
            {"p_eve_bound_raw", r.p_eve_bound_raw},
            {"i_ab", r.i_ab},
            {"i_ae", r.i_ae},
            {"key_rate", r.key_rate},
            {"nonneg_key_rate", r.nonneg_key_rate},
            {"secure", r.secure},
            {"constants",
             {{"threshold", r.threshold},
              {"tradeoff_bound", bob_eve_tradeoff_bound()},
              {"optimal_qubit_success", optimal_qubit_success()}}}};
}

}  // namespace sdiqkd

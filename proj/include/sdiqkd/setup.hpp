#pragma once

#include <array>
#include <stdexcept>

#include <json.hpp>

#include "sdiqkd/qubit.hpp"

namespace sdiqkd {

/// A prepare-and-measure configuration: four qubit preparations indexed by
/// the bit pair (a0, a1) and two binary measurements indexed by y.
/// Preparation index convention throughout: a = 2*a0 + a1.
struct QuantumSetup {
    std::array<BlochVector, 4> preparations;
    std::array<BinaryMeasurement, 2> measurements;

    QuantumSetup(const std::array<BlochVector, 4>& preps,
                 const std::array<BinaryMeasurement, 2>& meas)
        : preparations(preps), measurements(meas) {
        for (const auto& r : preparations) {
            if (!is_valid_state(r)) {
                throw std::invalid_argument("QuantumSetup: preparation with |r| > 1");
            }
        }
    }
};

inline constexpr int prep_index(int a0, int a1) { return 2 * a0 + a1; }
inline constexpr int bit_of(int a, int y) { return (y == 0) ? (a >> 1) : (a & 1); }

inline nlohmann::json to_json(const BlochVector& v) {
    return nlohmann::json::array({v.x, v.y, v.z});
}

inline BlochVector bloch_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw std::invalid_argument("Bloch vector JSON must be an array [x, y, z]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

/// {"preparations": [[x,y,z] x4], "axes": [[x,y,z] x2]}
inline nlohmann::json to_json(const QuantumSetup& s) {
    nlohmann::json preps = nlohmann::json::array();
    for (const auto& r : s.preparations) preps.push_back(to_json(r));
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& m : s.measurements) axes.push_back(to_json(m.axis));
    return {{"preparations", preps}, {"axes", axes}};
}

inline QuantumSetup setup_from_json(const nlohmann::json& j) {
    if (!j.contains("preparations") || !j.contains("axes")) {
        throw std::invalid_argument("setup JSON needs \"preparations\" and \"axes\"");
    }
    const auto& jp = j.at("preparations");
    const auto& ja = j.at("axes");
    if (!jp.is_array() || jp.size() != 4 || !ja.is_array() || ja.size() != 2) {
        throw std::invalid_argument("setup JSON needs 4 preparations and 2 axes");
    }
    std::array<BlochVector, 4> preps{bloch_from_json(jp[0]), bloch_from_json(jp[1]),
                                     bloch_from_json(jp[2]), bloch_from_json(jp[3])};
    std::array<BinaryMeasurement, 2> meas{BinaryMeasurement(bloch_from_json(ja[0])),
                                          BinaryMeasurement(bloch_from_json(ja[1]))};
    return QuantumSetup(preps, meas);
}

}  // namespace sdiqkd

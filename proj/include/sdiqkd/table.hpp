#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdiqkd/qubit.hpp"
#include "sdiqkd/rational.hpp"
#include "sdiqkd/setup.hpp"

namespace sdiqkd {

/// The observable object of the scenario: the eight correlators
/// E[a][y] = P(b = 0 | a0 a1, y), with a = 2*a0 + a1 and y in {0, 1}.
/// Scalar is double for measured/quantum tables and Rational where
/// exactness is required (deterministic tables, rational mixtures).
template <typename Scalar>
struct BasicDataTable {
    std::array<std::array<Scalar, 2>, 4> e{};

    Scalar& operator()(int a, int y) { return e[a][y]; }
    const Scalar& operator()(int a, int y) const { return e[a][y]; }

    bool operator==(const BasicDataTable&) const = default;
};

using DataTable = BasicDataTable<double>;
using ExactTable = BasicDataTable<Rational>;

/// Flat cell order used by the CSV row, the JSON keys, and the facet
/// geometry: k = 2a + y, i.e. E00_0, E00_1, E01_0, E01_1, E10_0, ...
inline constexpr std::array<const char*, 8> kTableCellNames = {
    "E00_0", "E00_1", "E01_0", "E01_1", "E10_0", "E10_1", "E11_0", "E11_1"};

inline constexpr const char* kTableCsvHeader =
    "E00_0,E00_1,E01_0,E01_1,E10_0,E10_1,E11_0,E11_1";

inline bool is_valid_table(const DataTable& t, double tol = kGeomTol) {
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y)
            if (t(a, y) < -tol || t(a, y) > 1.0 + tol) return false;
    return true;
}

inline DataTable to_double(const ExactTable& t) {
    DataTable out;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) out(a, y) = static_cast<double>(t(a, y));
    return out;
}

/// E[a][y] = P(b=0) for preparation a measured along axis y.
inline DataTable quantum_table(const QuantumSetup& s) {
    DataTable t;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y)
            t(a, y) = born_zero_prob(s.preparations[a], s.measurements[y]);
    return t;
}

/// Max-norm distance over the eight cells.
inline double table_distance(const DataTable& t1, const DataTable& t2) {
    double d = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) d = std::max(d, std::abs(t1(a, y) - t2(a, y)));
    return d;
}

inline Rational table_distance(const ExactTable& t1, const ExactTable& t2) {
    Rational d = 0;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) {
            Rational diff = t1(a, y) - t2(a, y);
            if (diff < 0) diff = -diff;
            if (diff > d) d = diff;
        }
    return d;
}

/// A deterministic classical strategy with a d-valued message: Alice encodes
/// her input a in {0..3} into m = encode[a], Bob outputs decode[m][y].
///
/// Canonical enumeration order (test fixtures depend on it):
///   encode index in [0, d^4):  encode[a] = (idx / d^a) % d   (a = 0 least
///   significant digit); decode index in [0, 2^(2d)): decode[m][y] =
///   bit (2m + y) of idx.
struct DeterministicStrategy {
    int d = 2;
    std::array<int, 4> encode{};
    std::vector<std::array<int, 2>> decode;  // decode[m][y], size d

    DeterministicStrategy(int d_, std::array<int, 4> enc, std::vector<std::array<int, 2>> dec)
        : d(d_), encode(enc), decode(std::move(dec)) {
        if (d < 1) throw std::invalid_argument("DeterministicStrategy: d must be >= 1");
        if (static_cast<int>(decode.size()) != d) {
            throw std::invalid_argument("DeterministicStrategy: decode must have d rows");
        }
        for (int a = 0; a < 4; ++a)
            if (encode[a] < 0 || encode[a] >= d) {
                throw std::invalid_argument("DeterministicStrategy: encode out of range");
            }
        for (const auto& row : decode)
            for (int b : row)
                if (b != 0 && b != 1) {
                    throw std::invalid_argument("DeterministicStrategy: decode bits must be 0/1");
                }
    }

    static DeterministicStrategy from_indices(int d, std::uint64_t encode_idx,
                                              std::uint64_t decode_idx) {
        std::array<int, 4> enc{};
        std::uint64_t v = encode_idx;
        for (int a = 0; a < 4; ++a) {
            enc[a] = static_cast<int>(v % static_cast<std::uint64_t>(d));
            v /= static_cast<std::uint64_t>(d);
        }
        std::vector<std::array<int, 2>> dec(static_cast<std::size_t>(d));
        for (int m = 0; m < d; ++m)
            for (int y = 0; y < 2; ++y)
                dec[static_cast<std::size_t>(m)][y] =
                    static_cast<int>((decode_idx >> (2 * m + y)) & 1u);
        return DeterministicStrategy(d, enc, std::move(dec));
    }
};

/// Cells of the (0/1) deterministic table, flat order k = 2a + y.
inline std::array<int, 8> deterministic_cells(const DeterministicStrategy& s) {
    std::array<int, 8> cells{};
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y)
            cells[static_cast<std::size_t>(2 * a + y)] = (s.decode[static_cast<std::size_t>(s.encode[a])][y] == 0) ? 1 : 0;
    return cells;
}

/// E[a][y] = 1 iff decode(encode(a), y) = 0; exact 0/1 entries.
inline ExactTable deterministic_table(const DeterministicStrategy& s) {
    const auto cells = deterministic_cells(s);
    ExactTable t;
    for (int a = 0; a < 4; ++a)
        for (int y = 0; y < 2; ++y) t(a, y) = cells[static_cast<std::size_t>(2 * a + y)];
    return t;
}

/// A shared-randomness mixture of deterministic strategies: the classical
/// model with a common variable lambda known to the eavesdropper.
struct SharedRandomnessStrategy {
    std::vector<std::pair<Rational, DeterministicStrategy>> branches;

    explicit SharedRandomnessStrategy(std::vector<std::pair<Rational, DeterministicStrategy>> b)
        : branches(std::move(b)) {
        if (branches.empty()) {
            throw std::invalid_argument("SharedRandomnessStrategy: empty mixture");
        }
        Rational total = 0;
        const int d = branches.front().second.d;
        for (const auto& [w, s] : branches) {
            if (w < 0) throw std::invalid_argument("SharedRandomnessStrategy: negative weight");
            if (s.d != d) throw std::invalid_argument("SharedRandomnessStrategy: mixed alphabet sizes");
            total += w;
        }
        if (total != 1) {
            throw std::invalid_argument("SharedRandomnessStrategy: weights must sum to 1");
        }
    }
};

/// Convex combination of the branch tables, exact.
inline ExactTable mixture_table(const SharedRandomnessStrategy& s) {
    ExactTable t;
    for (const auto& [w, strat] : s.branches) {
        const ExactTable bt = deterministic_table(strat);
        for (int a = 0; a < 4; ++a)
            for (int y = 0; y < 2; ++y) t(a, y) += w * bt(a, y);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Serialization: an 8-column CSV row and a JSON object keyed by cell name.

inline std::string to_csv_row(const DataTable& t) {
    std::ostringstream os;
    os.precision(17);
    for (int k = 0; k < 8; ++k) {
        if (k) os << ',';
        os << t(k / 2, k % 2);
    }
    return os.str();
}

inline nlohmann::json to_json(const DataTable& t) {
    nlohmann::json j = nlohmann::json::object();
    for (int k = 0; k < 8; ++k) j[kTableCellNames[static_cast<std::size_t>(k)]] = t(k / 2, k % 2);
    return j;
}

inline DataTable table_from_json(const nlohmann::json& j) {
    DataTable t;
    for (int k = 0; k < 8; ++k) {
        const char* key = kTableCellNames[static_cast<std::size_t>(k)];
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("table JSON missing key ") + key);
        }
        t(k / 2, k % 2) = j.at(key).get<double>();
    }
    if (!is_valid_table(t)) throw std::invalid_argument("table JSON has entries outside [0, 1]");
    return t;
}

/// Reads the header + single data row produced by to_csv_row.
inline DataTable table_from_csv(std::istream& in) {
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row)) {
        throw std::invalid_argument("table CSV needs a header line and a data line");
    }
    if (header != kTableCsvHeader) {
        throw std::invalid_argument("table CSV has an unexpected header");
    }
    DataTable t;
    std::istringstream rs(row);
    std::string field;
    for (int k = 0; k < 8; ++k) {
        if (!std::getline(rs, field, ',')) {
            throw std::invalid_argument("table CSV row has fewer than 8 fields");
        }
        t(k / 2, k % 2) = std::stod(field);
    }
    if (!is_valid_table(t)) throw std::invalid_argument("table CSV has entries outside [0, 1]");
    return t;
}

}  // namespace sdiqkd

#include "sdiqkd/facets.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "sdiqkd/rac.hpp"
#include "sdiqkd/rng.hpp"

using namespace sdiqkd;

namespace {

const FacetEnumeration& enumeration() {
    static const FacetEnumeration fe = enumerate_facets();
    return fe;
}

// Independent floating-point rank check (entries are 0/+-1 differences, so
// double precision Gauss with partial pivoting is reliable here).
int rank_double(std::vector<std::vector<double>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        for (std::size_t r = rank + 1; r < rows; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < 1e-9) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const double f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

}  // namespace

TEST(Vertices, DistinctBitTableCountIsEightyEight) {
    // image of a table through a bit message has at most two distinct rows:
    // 4 constant-row tables plus C(4,2) * (2^4 - 2) = 84 two-row tables
    EXPECT_EQ(enumeration().vertices.size(), 88u);
    const std::set<std::array<int, 8>> dedup(enumeration().vertices.begin(),
                                             enumeration().vertices.end());
    EXPECT_EQ(dedup.size(), enumeration().vertices.size());
}

TEST(Vertices, HullIsFullDimensional) {
    EXPECT_EQ(enumeration().affine_dimension, 8);
}

TEST(Facets, CountIsAFrozenRegressionValue) {
    // 16 box facets + 24 facets of the S class + 96 facets whose
    // coefficients ignore one preparation
    EXPECT_EQ(enumeration().facets.size(), 136u);
}

TEST(Facets, AllValidAndTightOnSpanningSets) {
    const auto& fe = enumeration();
    ASSERT_FALSE(fe.facets.empty());
    for (const auto& f : fe.facets) {
        int tight_seen = 0;
        for (std::size_t i = 0; i < fe.vertices.size(); ++i) {
            const long long value = eval_witness_cells(f.w, fe.vertices[i]);
            EXPECT_LE(Rational(value), f.offset);
            if (Rational(value) == f.offset) ++tight_seen;
        }
        EXPECT_EQ(tight_seen, static_cast<int>(f.tight_vertices.size()));

        // affine rank of the tight set must be dim - 1 = 7
        ASSERT_GE(f.tight_vertices.size(), 8u);
        std::vector<std::vector<double>> diffs;
        const auto& v0 = fe.vertices[static_cast<std::size_t>(f.tight_vertices.front())];
        for (std::size_t i = 1; i < f.tight_vertices.size(); ++i) {
            const auto& vi = fe.vertices[static_cast<std::size_t>(f.tight_vertices[i])];
            std::vector<double> row(8);
            for (int k = 0; k < 8; ++k) row[static_cast<std::size_t>(k)] = vi[static_cast<std::size_t>(k)] - v0[static_cast<std::size_t>(k)];
            diffs.push_back(std::move(row));
        }
        EXPECT_EQ(rank_double(diffs), 7);
    }
}

TEST(Facets, DeterministicAcrossRuns) {
    const FacetEnumeration again = enumerate_facets();
    ASSERT_EQ(again.facets.size(), enumeration().facets.size());
    for (std::size_t i = 0; i < again.facets.size(); ++i) {
        EXPECT_EQ(again.facets[i].w.w, enumeration().facets[i].w.w);
        EXPECT_EQ(again.facets[i].offset, enumeration().facets[i].offset);
    }
}

TEST(Facets, QkdWitnessAppearsUpToSymmetry) {
    EXPECT_TRUE(facet_class_contains(enumeration(), witness_S(), Rational(2)));
}

TEST(Facets, QkdWitnessAppearsVerbatim) {
    const Witness s = witness_S();
    bool found = false;
    for (const auto& f : enumeration().facets) {
        if (f.w.w == s.w && f.offset == 2) found = true;
    }
    EXPECT_TRUE(found);
}

TEST(Facets, ClosedUnderTheRelabelingGroup) {
    const auto& fe = enumeration();
    std::set<std::pair<std::array<std::array<long long, 2>, 4>, Rational>> keys;
    for (const auto& f : fe.facets) keys.insert(inequality_key(f.w, f.offset));

    // generators: a transposition, the y swap, one output flip
    std::vector<ScenarioSymmetry> generators(3);
    generators[0].prep_perm = {1, 0, 2, 3};
    generators[1].swap_y = true;
    generators[2].flip_output = {true, false};

    for (const auto& g : generators) {
        for (const auto& f : fe.facets) {
            const auto [iw, ic] = transform_inequality(g, f.w, f.offset);
            EXPECT_TRUE(keys.count(inequality_key(iw, ic)))
                << "facet image left the facet set";
        }
    }
}

TEST(Facets, BoxInequalitiesAreValidAndTheirStatusIsReported) {
    const auto& fe = enumeration();
    const auto boxes = box_inequality_status(fe);
    ASSERT_EQ(boxes.size(), 16u);
    int facet_count = 0;
    for (const auto& b : boxes) {
        // validity of 0 <= E <= 1 on every vertex, checked directly
        for (const auto& v : fe.vertices) {
            EXPECT_LE(Rational(eval_witness_cells(b.w, v)), b.offset) << b.name;
        }
        if (b.is_facet) ++facet_count;
    }
    RecordProperty("box_facet_count", facet_count);
    std::cout << "[ INFO     ] box inequalities that are facets: " << facet_count << "/16\n";
}

TEST(Facets, OrbitPartitionCoversEveryFacetOnce) {
    const auto& fe = enumeration();
    const auto orbits = facet_symmetry_orbits(fe);
    std::size_t total = 0;
    std::set<int> seen;
    for (const auto& orbit : orbits) {
        total += orbit.size();
        for (int i : orbit) EXPECT_TRUE(seen.insert(i).second);
    }
    EXPECT_EQ(total, fe.facets.size());

    // count orbits of facets beyond the box inequalities; the witness class
    // of S must be among them. The observed partition (recorded, and frozen
    // as a fixture): orbit sizes 16 (box), 24 (the S class, tight on 12
    // vertices) and 96 (witnesses that ignore one preparation).
    std::size_t nontrivial = 0;
    std::multiset<std::size_t> sizes;
    for (const auto& orbit : orbits) {
        sizes.insert(orbit.size());
        bool box_like = true;
        for (int fi : orbit) {
            int nonzero = 0;
            for (int a = 0; a < 4; ++a)
                for (int y = 0; y < 2; ++y)
                    if (fe.facets[static_cast<std::size_t>(fi)].w(a, y) != 0) ++nonzero;
            if (nonzero > 1) box_like = false;
        }
        if (!box_like) ++nontrivial;
    }
    EXPECT_GE(nontrivial, 1u);
    EXPECT_EQ(sizes, (std::multiset<std::size_t>{16, 24, 96}));
    RecordProperty("facet_count", static_cast<int>(fe.facets.size()));
    RecordProperty("orbit_count", static_cast<int>(orbits.size()));
    RecordProperty("nontrivial_orbit_count", static_cast<int>(nontrivial));
    std::cout << "[ INFO     ] facets: " << fe.facets.size() << ", symmetry orbits: " << orbits.size()
              << ", nontrivial orbits: " << nontrivial << "\n";
}

// Completeness of the facet list: vertex-enumerating the returned H-system
// must give back exactly the 88 tables we started from. An incomplete list
// would produce extra (or unbounded) vertices.
TEST(Facets, DualRoundTripRecoversEveryVertex) {
    const auto& fe = enumeration();
    std::vector<detail::IVec> rows;
    for (const auto& f : fe.facets) {
        detail::IVec row(9, 0);
        for (int k = 0; k < 8; ++k) row[static_cast<std::size_t>(k)] = f.w(k / 2, k % 2);
        row[8] = -BigInt(boost::multiprecision::numerator(f.offset));
        ASSERT_EQ(boost::multiprecision::denominator(f.offset), 1);
        rows.push_back(std::move(row));
    }
    const auto rays = detail::dd_extreme_rays(9, rows);

    std::set<std::array<int, 8>> recovered;
    for (const auto& ray : rays) {
        ASSERT_GT(ray.v[8], 0) << "unbounded direction: facet list is incomplete";
        ASSERT_EQ(ray.v[8], 1) << "non-lattice vertex appeared";
        std::array<int, 8> x{};
        for (int k = 0; k < 8; ++k) {
            ASSERT_TRUE(ray.v[static_cast<std::size_t>(k)] == 0 || ray.v[static_cast<std::size_t>(k)] == 1);
            x[static_cast<std::size_t>(k)] = static_cast<int>(ray.v[static_cast<std::size_t>(k)]);
        }
        recovered.insert(x);
    }
    const std::set<std::array<int, 8>> expected(fe.vertices.begin(), fe.vertices.end());
    EXPECT_EQ(recovered, expected);
}

// --- engine fuzz against a brute-force oracle --------------------------------

namespace fuzz {

using Rat = Rational;
using RatMatrix = std::vector<std::vector<Rat>>;

int rat_rank(RatMatrix m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            const Rat f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

// One-dimensional nullspace of the d x (d+1) system [p_j | -1] (w, c)^T = 0;
// empty when the subset is affinely dependent.
std::vector<Rat> hyperplane_through(const std::vector<std::vector<int>>& pts,
                                    const std::vector<std::size_t>& subset, std::size_t d) {
    RatMatrix m;
    for (std::size_t j : subset) {
        std::vector<Rat> row(d + 1);
        for (std::size_t k = 0; k < d; ++k) row[k] = pts[j][k];
        row[d] = -1;
        m.push_back(std::move(row));
    }
    // reduced echelon form with pivot bookkeeping
    std::vector<std::ptrdiff_t> pivot_of_col(d + 1, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col <= d && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        const Rat inv = m[rank][col];
        for (std::size_t c = col; c <= d; ++c) m[rank][c] /= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][col] == 0) continue;
            const Rat f = m[r][col];
            for (std::size_t c = col; c <= d; ++c) m[r][c] -= f * m[rank][c];
        }
        pivot_of_col[col] = static_cast<std::ptrdiff_t>(rank);
        ++rank;
    }
    if (rank != d) return {};  // nullity != 1
    std::size_t free_col = 0;
    while (free_col <= d && pivot_of_col[free_col] >= 0) ++free_col;
    std::vector<Rat> sol(d + 1, 0);
    sol[free_col] = 1;
    for (std::size_t col = 0; col <= d; ++col) {
        if (pivot_of_col[col] >= 0) {
            sol[col] = -m[static_cast<std::size_t>(pivot_of_col[col])][free_col];
        }
    }
    return sol;
}

std::vector<std::vector<BigInt>> canonical_primitive(const std::vector<Rat>& v) {
    BigInt lcm = 1;
    for (const auto& x : v) {
        const BigInt den = boost::multiprecision::denominator(x);
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    std::vector<BigInt> out;
    BigInt g = 0;
    for (const auto& x : v) {
        const Rat scaled = x * lcm;
        const BigInt num = boost::multiprecision::numerator(scaled);
        out.push_back(num);
        g = boost::multiprecision::gcd(g, num);
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return {out};
}

// Every facet of a full-dimensional hull passes through d affinely
// independent vertices, so scanning all d-subsets finds them all.
std::set<std::vector<BigInt>> brute_force_facets(const std::vector<std::vector<int>>& pts,
                                                 std::size_t d) {
    std::set<std::vector<BigInt>> facets;
    std::vector<std::size_t> subset(d);
    std::vector<bool> select(pts.size(), false);
    std::fill(select.end() - static_cast<std::ptrdiff_t>(d), select.end(), true);
    do {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (select[i]) subset[idx++] = i;
        const auto plane = hyperplane_through(pts, subset, d);
        if (plane.empty()) continue;
        // orientation: all points on one side
        bool any_below = false, any_above = false;
        for (const auto& p : pts) {
            Rat lhs = -plane[d];  // w.p - c with c = plane[d] sign convention below
            for (std::size_t k = 0; k < d; ++k) lhs += plane[k] * p[k];
            if (lhs > 0) any_above = true;
            if (lhs < 0) any_below = true;
        }
        if (any_above && any_below) continue;
        std::vector<Rat> oriented = plane;
        if (any_above) {  // flip to w.p <= c
            for (auto& x : oriented) x = -x;
        }
        facets.insert(canonical_primitive(oriented).front());
    } while (std::next_permutation(select.begin(), select.end()));
    return facets;
}

}  // namespace fuzz

// Random low-dimensional 0/1 hulls: the double-description route must agree
// exactly with the subset-scan oracle.
TEST(DdEngine, AgreesWithABruteForceOracleOnRandomHulls) {
    CounterRng rng(71, 0);
    const std::size_t d = 4;
    int instances = 0;
    while (instances < 25) {
        const std::size_t n = 6 + rng.next_u64() % 8;
        std::set<std::vector<int>> unique;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> p(d);
            for (auto& x : p) x = static_cast<int>(rng.next_u64() & 1u);
            unique.insert(std::move(p));
        }
        const std::vector<std::vector<int>> pts(unique.begin(), unique.end());
        if (pts.size() < d + 1) continue;

        // need a full-dimensional hull, otherwise the cone keeps lineality
        fuzz::RatMatrix diffs;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            std::vector<fuzz::Rat> row(d);
            for (std::size_t k = 0; k < d; ++k) row[k] = pts[i][k] - pts[0][k];
            diffs.push_back(std::move(row));
        }
        if (fuzz::rat_rank(diffs) != static_cast<int>(d)) continue;
        ++instances;

        std::vector<detail::IVec> constraints;
        for (const auto& p : pts) {
            detail::IVec row(d + 1, 0);
            for (std::size_t k = 0; k < d; ++k) row[k] = p[k];
            row[d] = -1;
            constraints.push_back(std::move(row));
        }
        std::set<std::vector<BigInt>> dd_facets;
        for (const auto& ray : detail::dd_extreme_rays(d + 1, constraints)) {
            bool zero_w = true;
            for (std::size_t k = 0; k < d; ++k)
                if (ray.v[k] != 0) zero_w = false;
            if (zero_w) continue;
            dd_facets.insert(std::vector<BigInt>(ray.v.begin(), ray.v.end()));
        }

        const auto oracle = fuzz::brute_force_facets(pts, d);
        EXPECT_EQ(dd_facets, oracle) << "instance " << instances << " with " << pts.size()
                                     << " points";
    }
}

TEST(Facets, JsonSerializationIsComplete) {
    const auto j = to_json(enumeration());
    EXPECT_EQ(j.at("vertex_count").get<std::size_t>(), enumeration().vertices.size());
    EXPECT_EQ(j.at("facet_count").get<std::size_t>(), enumeration().facets.size());
    EXPECT_EQ(j.at("affine_dimension").get<int>(), 8);
    EXPECT_EQ(j.at("facets").size(), enumeration().facets.size());
    for (const auto& f : j.at("facets")) {
        EXPECT_TRUE(f.contains("w"));
        EXPECT_TRUE(f.contains("offset"));
    }
}

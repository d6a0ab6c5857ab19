#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sdiqkd/rational.hpp"
#include "sdiqkd/table.hpp"
#include "sdiqkd/witness.hpp"

namespace sdiqkd {

/// One facet of the classical polytope, as a tight witness inequality
/// w.E <= offset. Coefficients are primitive integers (gcd 1 over the
/// nine entries including the offset).
struct FacetInequality {
    Witness w;
    Rational offset;
    std::vector<int> tight_vertices;  // indices into FacetEnumeration::vertices
};

/// The convex hull of all distinct deterministic bit (d = 2) data tables:
/// vertex list, affine dimension, and the full facet list.
struct FacetEnumeration {
    std::vector<std::array<int, 8>> vertices;  // 0/1 cell vectors, sorted
    int affine_dimension = 0;
    std::vector<FacetInequality> facets;
};

namespace detail {

/// All distinct data tables of deterministic d = 2 strategies, as flat 0/1
/// cell vectors in canonical (sorted) order.
inline std::vector<std::array<int, 8>> classical_vertices_d2() {
    std::set<std::array<int, 8>> seen;
    for (std::uint64_t enc = 0; enc < 16; ++enc)
        for (std::uint64_t dec = 0; dec < 16; ++dec)
            seen.insert(deterministic_cells(DeterministicStrategy::from_indices(2, enc, dec)));
    return {seen.begin(), seen.end()};
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
inline int integer_matrix_rank(std::vector<std::vector<BigInt>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t rank = 0;
    BigInt prev_pivot = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c) {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev_pivot;
            }
            m[r][col] = 0;
        }
        prev_pivot = m[rank][col];
        ++rank;
    }
    return static_cast<int>(rank);
}

/// Rank of {v - vs[0] : v in vs} for 0/1 vertex vectors; the affine
/// dimension of their hull.
inline int affine_rank(const std::vector<std::array<int, 8>>& vs) {
    if (vs.size() <= 1) return 0;
    std::vector<std::vector<BigInt>> diffs;
    diffs.reserve(vs.size() - 1);
    for (std::size_t i = 1; i < vs.size(); ++i) {
        std::vector<BigInt> row(8);
        for (int k = 0; k < 8; ++k) row[static_cast<std::size_t>(k)] = vs[i][static_cast<std::size_t>(k)] - vs[0][static_cast<std::size_t>(k)];
        diffs.push_back(std::move(row));
    }
    return integer_matrix_rank(std::move(diffs));
}

// --- double description over exact integers -------------------------------
//
// Facets of P = conv(V) are the extreme rays of the polyhedral cone
//     C = { (w, c) : w.v - c <= 0 for every vertex v }
// (plus the trivial ray w = 0, c = 1). The cone is built one halfspace at a
// time, maintaining a lineality basis and the extreme rays of the pointed
// part; all arithmetic is integer and every vector is reduced to a primitive
// representative, so coefficients stay small.

inline constexpr std::size_t kMaxConstraints = 256;

using IVec = std::vector<BigInt>;

struct DdRay {
    IVec v;
    std::bitset<kMaxConstraints> zero;  // processed constraints tight at this ray
};

inline void make_primitive(IVec& v) {
    BigInt g = 0;
    for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
    if (g > 1) {
        for (auto& x : v) x /= g;
    }
}

inline BigInt dot(const IVec& a, const IVec& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Extreme rays of {x in R^dim : a_i . x <= 0}. Assumes the final cone is
/// pointed (for hulls: full-dimensional); leftover lineality is an error.
inline std::vector<DdRay> dd_extreme_rays(std::size_t dim, const std::vector<IVec>& constraints) {
    if (constraints.size() > kMaxConstraints) {
        throw std::invalid_argument("dd_extreme_rays: too many constraints");
    }

    std::vector<IVec> lineality;
    for (std::size_t i = 0; i < dim; ++i) {
        IVec e(dim, 0);
        e[i] = 1;
        lineality.push_back(std::move(e));
    }
    std::vector<DdRay> rays;

    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        const IVec& a = constraints[ci];

        // If the constraint sees the lineality space, one basis vector turns
        // into a ray pair direction and the rest project onto the hyperplane.
        std::size_t pivot = lineality.size();
        for (std::size_t i = 0; i < lineality.size(); ++i) {
            if (dot(a, lineality[i]) != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < lineality.size()) {
            IVec b = lineality[pivot];
            lineality.erase(lineality.begin() + static_cast<std::ptrdiff_t>(pivot));
            const BigInt alpha = dot(a, b);

            for (auto& l : lineality) {
                const BigInt beta = dot(a, l);
                if (beta == 0) continue;
                for (std::size_t k = 0; k < dim; ++k) l[k] = alpha * l[k] - beta * b[k];
                make_primitive(l);
            }
            for (auto& r : rays) {
                const BigInt beta = dot(a, r.v);
                if (beta != 0) {
                    // positive rescale: |alpha| r - sign(alpha) beta b
                    const BigInt pa = alpha > 0 ? alpha : BigInt(-alpha);
                    const BigInt sb = alpha > 0 ? beta : BigInt(-beta);
                    for (std::size_t k = 0; k < dim; ++k) r.v[k] = pa * r.v[k] - sb * b[k];
                    make_primitive(r.v);
                }
                r.zero.set(ci);
            }
            DdRay nb;
            nb.v = b;
            if (alpha > 0) {
                for (auto& x : nb.v) x = -x;
            }
            make_primitive(nb.v);
            for (std::size_t j = 0; j < ci; ++j) nb.zero.set(j);
            rays.push_back(std::move(nb));
            continue;
        }

        // Lineality is orthogonal to a: split rays by sign of a.x.
        std::vector<BigInt> dots(rays.size());
        bool any_pos = false;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            dots[i] = dot(a, rays[i].v);
            if (dots[i] > 0) any_pos = true;
        }
        if (!any_pos) {
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (dots[i] == 0) rays[i].zero.set(ci);
            continue;
        }

        std::vector<DdRay> next;
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (dots[i] > 0) {
                pos.push_back(i);
            } else if (dots[i] < 0) {
                neg.push_back(i);
                next.push_back(rays[i]);
            } else {
                rays[i].zero.set(ci);
                next.push_back(rays[i]);
            }
        }

        for (std::size_t ip : pos) {
            for (std::size_t in : neg) {
                // adjacency: no third ray is tight everywhere both are tight
                const auto common = rays[ip].zero & rays[in].zero;
                bool adjacent = true;
                for (std::size_t j = 0; j < rays.size(); ++j) {
                    if (j == ip || j == in) continue;
                    if ((common & rays[j].zero) == common) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;

                DdRay mix;
                mix.v.resize(dim);
                for (std::size_t k = 0; k < dim; ++k)
                    mix.v[k] = dots[ip] * rays[in].v[k] - dots[in] * rays[ip].v[k];
                make_primitive(mix.v);
                mix.zero = common;
                mix.zero.set(ci);
                next.push_back(std::move(mix));
            }
        }
        rays = std::move(next);
    }

    if (!lineality.empty()) {
        throw std::runtime_error("dd_extreme_rays: cone has leftover lineality (hull not full-dimensional)");
    }
    return rays;
}

}  // namespace detail

/// Exact facet enumeration of the d = 2 classical polytope (N = 4 inputs,
/// two binary measurements). Every returned inequality is verified: valid on
/// all vertices and tight on a set of affine rank (dimension - 1).
inline FacetEnumeration enumerate_facets() {
    FacetEnumeration out;
    out.vertices = detail::classical_vertices_d2();
    out.affine_dimension = detail::affine_rank(out.vertices);

    std::vector<detail::IVec> constraints;
    constraints.reserve(out.vertices.size());
    for (const auto& v : out.vertices) {
        detail::IVec row(9, 0);
        for (int k = 0; k < 8; ++k) row[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k)];
        row[8] = -1;
        constraints.push_back(std::move(row));
    }

    const auto rays = detail::dd_extreme_rays(9, constraints);

    for (const auto& ray : rays) {
        bool zero_w = true;
        for (int k = 0; k < 8; ++k)
            if (ray.v[static_cast<std::size_t>(k)] != 0) zero_w = false;
        if (zero_w) continue;  // the trivial ray 0.E <= 1

        FacetInequality f;
        for (int k = 0; k < 8; ++k) {
            const BigInt& c = ray.v[static_cast<std::size_t>(k)];
            if (c > std::numeric_limits<long long>::max() || c < std::numeric_limits<long long>::min()) {
                throw std::runtime_error("enumerate_facets: facet coefficient out of range");
            }
            f.w(k / 2, k % 2) = static_cast<long long>(c);
        }
        f.offset = Rational(ray.v[8]);

        // verification pass: validity on every vertex, tightness rank
        std::vector<std::array<int, 8>> tight;
        for (std::size_t i = 0; i < out.vertices.size(); ++i) {
            const long long val = eval_witness_cells(f.w, out.vertices[i]);
            const Rational rv(val);
            if (rv > f.offset) {
                throw std::runtime_error("enumerate_facets: inequality violated by a vertex");
            }
            if (rv == f.offset) {
                f.tight_vertices.push_back(static_cast<int>(i));
                tight.push_back(out.vertices[i]);
            }
        }
        if (detail::affine_rank(tight) != out.affine_dimension - 1) {
            throw std::runtime_error("enumerate_facets: ray is not tight on a facet-spanning set");
        }
        out.facets.push_back(std::move(f));
    }

    std::sort(out.facets.begin(), out.facets.end(), [](const FacetInequality& a, const FacetInequality& b) {
        return std::tie(a.w.w, a.offset) < std::tie(b.w.w, b.offset);
    });
    return out;
}

/// Key for exact inequality identity (primitive form assumed).
inline std::pair<std::array<std::array<long long, 2>, 4>, Rational> inequality_key(
    const Witness& w, const Rational& offset) {
    return {w.w, offset};
}

/// Whether (w, offset) or any relabeling image of it appears among the facets.
inline bool facet_class_contains(const FacetEnumeration& fe, const Witness& w,
                                 const Rational& offset) {
    std::set<std::pair<std::array<std::array<long long, 2>, 4>, Rational>> keys;
    for (const auto& f : fe.facets) keys.insert(inequality_key(f.w, f.offset));
    for (const auto& g : all_symmetries()) {
        const auto [iw, ic] = transform_inequality(g, w, offset);
        if (keys.count(inequality_key(iw, ic))) return true;
    }
    return false;
}

/// Partition of the facet list into relabeling-symmetry orbits (indices into
/// FacetEnumeration::facets, each orbit sorted).
inline std::vector<std::vector<int>> facet_symmetry_orbits(const FacetEnumeration& fe) {
    std::map<std::pair<std::array<std::array<long long, 2>, 4>, Rational>, int> index_of;
    for (std::size_t i = 0; i < fe.facets.size(); ++i) {
        index_of[inequality_key(fe.facets[i].w, fe.facets[i].offset)] = static_cast<int>(i);
    }
    const auto group = all_symmetries();
    std::vector<bool> assigned(fe.facets.size(), false);
    std::vector<std::vector<int>> orbits;
    for (std::size_t i = 0; i < fe.facets.size(); ++i) {
        if (assigned[i]) continue;
        std::set<int> orbit;
        for (const auto& g : group) {
            const auto [iw, ic] = transform_inequality(g, fe.facets[i].w, fe.facets[i].offset);
            const auto it = index_of.find(inequality_key(iw, ic));
            if (it != index_of.end()) orbit.insert(it->second);
        }
        std::vector<int> sorted(orbit.begin(), orbit.end());
        for (int j : sorted) assigned[static_cast<std::size_t>(j)] = true;
        orbits.push_back(std::move(sorted));
    }
    return orbits;
}

/// The sixteen box inequalities 0 <= E_k <= 1 with their facet status.
struct BoxInequalityStatus {
    std::string name;
    Witness w;
    Rational offset;
    bool is_facet = false;
};

inline std::vector<BoxInequalityStatus> box_inequality_status(const FacetEnumeration& fe) {
    std::set<std::pair<std::array<std::array<long long, 2>, 4>, Rational>> keys;
    for (const auto& f : fe.facets) keys.insert(inequality_key(f.w, f.offset));
    std::vector<BoxInequalityStatus> out;
    for (int k = 0; k < 8; ++k) {
        for (int upper = 0; upper < 2; ++upper) {
            BoxInequalityStatus s;
            Witness w;
            w(k / 2, k % 2) = upper ? 1 : -1;
            s.w = w;
            s.offset = upper ? 1 : 0;
            s.name = std::string(kTableCellNames[static_cast<std::size_t>(k)]) + (upper ? " <= 1" : " >= 0");
            s.is_facet = keys.count(inequality_key(s.w, s.offset)) > 0;
            out.push_back(std::move(s));
        }
    }
    return out;
}

inline nlohmann::json to_json(const FacetEnumeration& fe) {
    nlohmann::json facets = nlohmann::json::array();
    for (const auto& f : fe.facets) {
        nlohmann::json rows = nlohmann::json::array();
        for (int a = 0; a < 4; ++a) rows.push_back({f.w(a, 0), f.w(a, 1)});
        facets.push_back({{"w", rows},
                          {"offset", to_fraction_string(f.offset)},
                          {"tight_vertex_count", f.tight_vertices.size()}});
    }
    return {{"vertex_count", fe.vertices.size()},
            {"affine_dimension", fe.affine_dimension},
            {"facet_count", fe.facets.size()},
            {"facets", facets}};
}

}  // namespace sdiqkd

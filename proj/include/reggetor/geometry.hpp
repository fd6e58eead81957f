#ifndef REGGETOR_GEOMETRY_HPP
#define REGGETOR_GEOMETRY_HPP

#include <Eigen/Dense>
#include <map>
#include <random>

#include "reggetor/common.hpp"
#include "reggetor/triangulation.hpp"

namespace reggetor {

using Vec3 = Eigen::Vector3d;

constexpr double kVolumeTolerance = 1e-9;  // on |6V| with coordinates in [-1,1]
constexpr int kMaxResamples = 1000;

/// Map from vertex labels to Euclidean coordinates. Labels of one vertex
/// class must agree; per-class coordinates are resolved against a
/// triangulation with class_coords().
struct Geometrization {
    std::map<int, Vec3> coords;
};

/// 6V of the ordered tuple (v0,v1,v2,v3): the scalar triple product
/// (v1-v0) . ((v3-v0) x (v2-v0)). Even permutations preserve the sign.
inline double six_volume(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3) {
    return (v1 - v0).dot((v3 - v0).cross(v2 - v0));
}

inline std::vector<Vec3> class_coords(const Triangulation& tri, const Geometrization& geo) {
    std::vector<Vec3> out(tri.vertexClassCount());
    for (int c = 0; c < tri.vertexClassCount(); ++c) {
        bool found = false;
        for (int lbl : tri.vertexClass(c).labels) {
            auto it = geo.coords.find(lbl);
            if (it == geo.coords.end()) continue;
            if (found && (out[c] - it->second).norm() > 1e-12)
                fail(Errc::InvalidSpec, "conflicting coordinates within one vertex class");
            out[c] = it->second;
            found = true;
        }
        if (!found) fail(Errc::InvalidSpec, "vertex class has no coordinates");
    }
    return out;
}

inline double edge_length(const std::vector<Vec3>& cc, const Triangulation& tri, int e) {
    const auto& ec = tri.edgeClass(e);
    return (cc[ec.endpoints[0]] - cc[ec.endpoints[1]]).norm();
}

inline double oriented_six_volume(const std::vector<Vec3>& cc, const Triangulation& tri, int t) {
    const Tetra& tt = tri.tet(t);
    return six_volume(cc[tri.vertexClassOfLabel(tt[0])], cc[tri.vertexClassOfLabel(tt[1])],
                      cc[tri.vertexClassOfLabel(tt[2])], cc[tri.vertexClassOfLabel(tt[3])]);
}

// ---------------------------------------------------------------------------
// Per-tetrahedron metric data. Dihedral angles and their derivatives are
// computed from the six edge lengths; coordinates only supply lengths and the
// volume sign, so the F3 assembly and the finite-difference oracle share one
// code path.

struct TetGeometry {
    std::array<double, 6> l{};  // slot lengths, slot order of kEdgeSlot
    double sixV = 0.0;          // signed, under the tetrahedron's own ordering
    int sigma = 0;

    static TetGeometry from_coords(const Vec3& v0, const Vec3& v1, const Vec3& v2,
                                   const Vec3& v3) {
        TetGeometry g;
        const Vec3 v[4] = {v0, v1, v2, v3};
        for (int s = 0; s < 6; ++s)
            g.l[s] = (v[kEdgeSlot[s][0]] - v[kEdgeSlot[s][1]]).norm();
        g.sixV = six_volume(v0, v1, v2, v3);
        g.sigma = g.sixV > 0 ? 1 : (g.sixV < 0 ? -1 : 0);
        return g;
    }

    /// Rebuild from lengths, keeping a previously known orientation sign.
    static TetGeometry from_lengths(const std::array<double, 6>& lengths, int sigma) {
        TetGeometry g;
        g.l = lengths;
        double x01 = lengths[0] * lengths[0], x02 = lengths[1] * lengths[1],
               x03 = lengths[2] * lengths[2], x12 = lengths[3] * lengths[3],
               x13 = lengths[4] * lengths[4], x23 = lengths[5] * lengths[5];
        double aa = x01, bb = x02, cc = x03;
        double ab = 0.5 * (x01 + x02 - x12);
        double ac = 0.5 * (x01 + x03 - x13);
        double bc = 0.5 * (x02 + x03 - x23);
        double detG = aa * (bb * cc - bc * bc) - ab * (ab * cc - ac * bc) +
                      ac * (ab * bc - ac * bb);
        if (detG < 0) detG = 0;
        g.sigma = sigma;
        g.sixV = sigma * std::sqrt(detG);
        return g;
    }

    bool degenerate(double tol = kVolumeTolerance) const { return std::abs(sixV) <= tol; }
};

namespace detail {

struct RenamedFrame {
    // squared lengths in the renamed tuple (i,j,k,m); origSlot maps the six
    // renamed pairs 01,02,03,12,13,23 back to slots of the tetrahedron
    std::array<double, 6> y{};
    std::array<int, 6> origSlot{};
};

inline RenamedFrame rename_for_slot(const TetGeometry& g, int slot) {
    int i = kEdgeSlot[slot][0], j = kEdgeSlot[slot][1];
    int k = kEdgeCompletion[slot][0], m = kEdgeCompletion[slot][1];
    const int w[4] = {i, j, k, m};
    RenamedFrame fr;
    static constexpr std::array<std::array<int, 2>, 6> pairs = {
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    for (int r = 0; r < 6; ++r) {
        int s = kSlotOfPair[w[pairs[r][0]]][w[pairs[r][1]]];
        fr.origSlot[r] = s;
        fr.y[r] = g.l[s] * g.l[s];
    }
    return fr;
}

struct GramParts {
    double aa, bb, cc, ab, ac, bc;
    double cosPart;  // (a.a)(b.c) - (a.b)(a.c)
};

inline GramParts gram_parts(const RenamedFrame& fr) {
    GramParts p{};
    p.aa = fr.y[0];
    p.bb = fr.y[1];
    p.cc = fr.y[2];
    p.ab = 0.5 * (fr.y[0] + fr.y[1] - fr.y[3]);
    p.ac = 0.5 * (fr.y[0] + fr.y[2] - fr.y[4]);
    p.bc = 0.5 * (fr.y[1] + fr.y[2] - fr.y[5]);
    p.cosPart = p.aa * p.bc - p.ab * p.ac;
    return p;
}

}  // namespace detail

/// Signed dihedral angle at an edge slot: sigma * (interior angle), in
/// (-pi, 0) u (0, pi) for a nondegenerate tetrahedron.
inline double dihedral_angle(const TetGeometry& g, int slot) {
    if (g.degenerate()) fail(Errc::DegenerateTet, "dihedral angle of a flat tetrahedron");
    auto fr = detail::rename_for_slot(g, slot);
    auto p = detail::gram_parts(fr);
    double sinPart = g.l[slot] * g.sixV;
    return std::atan2(sinPart, p.cosPart);
}

/// d(signed dihedral at edgeAt) / d(length of edgeWrt), analytic in the six
/// lengths with the orientation sign held fixed.
inline double dihedral_gradient(const TetGeometry& g, int edgeAt, int edgeWrt) {
    if (g.degenerate()) fail(Errc::DegenerateTet, "dihedral gradient of a flat tetrahedron");
    auto fr = detail::rename_for_slot(g, edgeAt);
    auto p = detail::gram_parts(fr);
    double l01 = g.l[edgeAt];
    double s = l01 * g.sixV;
    double denom = s * s + p.cosPart * p.cosPart;

    double grad = 0.0;
    for (int r = 0; r < 6; ++r) {
        if (fr.origSlot[r] != edgeWrt) continue;
        // partials of the dot products w.r.t. the renamed squared length y_r
        double d_aa = (r == 0) ? 1.0 : 0.0;
        double d_bb = (r == 1) ? 1.0 : 0.0;
        double d_cc = (r == 2) ? 1.0 : 0.0;
        double d_ab = 0.5 * ((r == 0 ? 1 : 0) + (r == 1 ? 1 : 0) - (r == 3 ? 1 : 0));
        double d_ac = 0.5 * ((r == 0 ? 1 : 0) + (r == 2 ? 1 : 0) - (r == 4 ? 1 : 0));
        double d_bc = 0.5 * ((r == 1 ? 1 : 0) + (r == 2 ? 1 : 0) - (r == 5 ? 1 : 0));

        double cof_aa = p.bb * p.cc - p.bc * p.bc;
        double cof_bb = p.aa * p.cc - p.ac * p.ac;
        double cof_cc = p.aa * p.bb - p.ab * p.ab;
        double cof_ab = p.ac * p.bc - p.ab * p.cc;
        double cof_ac = p.ab * p.bc - p.ac * p.bb;
        double cof_bc = p.ab * p.ac - p.aa * p.bc;

        double d_detG = cof_aa * d_aa + cof_bb * d_bb + cof_cc * d_cc +
                        2.0 * (cof_ab * d_ab + cof_ac * d_ac + cof_bc * d_bc);
        double d_W = d_detG / (2.0 * g.sixV);
        double d_s = (r == 0 ? g.sixV / (2.0 * l01) : 0.0) + l01 * d_W;
        double d_cos = d_aa * p.bc + p.aa * d_bc - d_ab * p.ac - p.ab * d_ac;
        double dphi_dy = (p.cosPart * d_s - s * d_cos) / denom;
        grad += 2.0 * g.l[edgeWrt] * dphi_dy;
    }
    return grad;
}

/// All 36 per-tetrahedron derivatives d(phi at slot a)/d(l at slot b).
inline Eigen::Matrix<double, 6, 6> dihedral_gradients(const TetGeometry& g) {
    Eigen::Matrix<double, 6, 6> out;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) out(a, b) = dihedral_gradient(g, a, b);
    return out;
}

// ---------------------------------------------------------------------------

inline std::vector<TetGeometry> tet_geometries(const Triangulation& tri,
                                               const std::vector<Vec3>& cc) {
    std::vector<TetGeometry> out;
    out.reserve(tri.tetCount());
    for (int t = 0; t < tri.tetCount(); ++t) {
        const Tetra& tt = tri.tet(t);
        out.push_back(TetGeometry::from_coords(
            cc[tri.vertexClassOfLabel(tt[0])], cc[tri.vertexClassOfLabel(tt[1])],
            cc[tri.vertexClassOfLabel(tt[2])], cc[tri.vertexClassOfLabel(tt[3])]));
    }
    return out;
}

/// Deficit angle at an edge class: minus the algebraic sum of signed dihedral
/// angles around the edge, reduced mod 2*pi to (-pi, pi]. Zero for any
/// coordinate-induced geometrization.
inline double deficit_angle(const Triangulation& tri, const std::vector<TetGeometry>& tg,
                            int e) {
    double sum = 0.0;
    for (auto [t, s] : tri.edgeClass(e).slots) sum += dihedral_angle(tg[t], s);
    return reduce_angle(-sum);
}

/// Deficit angles recomputed from per-class edge lengths, with orientation
/// signs frozen from the flat configuration. Drives the finite-difference
/// oracles.
inline std::vector<double> deficit_angles_from_lengths(const Triangulation& tri,
                                                       const std::vector<double>& classLength,
                                                       const std::vector<int>& sigma) {
    std::vector<double> omega(tri.edgeClassCount(), 0.0);
    std::vector<TetGeometry> tg(tri.tetCount());
    for (int t = 0; t < tri.tetCount(); ++t) {
        std::array<double, 6> l{};
        for (int s = 0; s < 6; ++s) l[s] = classLength[tri.edgeClassAt(t, s)];
        tg[t] = TetGeometry::from_lengths(l, sigma[t]);
    }
    for (int e = 0; e < tri.edgeClassCount(); ++e) {
        double sum = 0.0;
        for (auto [t, s] : tri.edgeClass(e).slots) sum += dihedral_angle(tg[t], s);
        omega[e] = reduce_angle(-sum);
    }
    return omega;
}

// ---------------------------------------------------------------------------

/// Samples coordinates i.i.d. uniform in [-1,1]^3 for every vertex class not
/// pinned by `fixed` (keyed by vertex label), resampling the whole draw until
/// every tetrahedron has |6V| above tolerance.
inline Geometrization random_geometrization(const Triangulation& tri, std::uint64_t seed,
                                            const std::map<int, Vec3>& fixed = {}) {
    std::mt19937_64 rng(seed);
    std::vector<bool> pinned(tri.vertexClassCount(), false);
    std::vector<Vec3> cc(tri.vertexClassCount());
    for (const auto& [lbl, xyz] : fixed) {
        int c = tri.vertexClassOfLabel(lbl);
        if (pinned[c] && (cc[c] - xyz).norm() > 1e-12)
            fail(Errc::InvalidSpec, "conflicting pinned coordinates");
        pinned[c] = true;
        cc[c] = xyz;
    }
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        for (int c = 0; c < tri.vertexClassCount(); ++c) {
            if (pinned[c]) continue;
            cc[c] = Vec3(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng));
        }
        bool ok = true;
        for (int t = 0; t < tri.tetCount() && ok; ++t)
            ok = std::abs(oriented_six_volume(cc, tri, t)) > kVolumeTolerance;
        if (ok) {
            Geometrization geo;
            for (int c = 0; c < tri.vertexClassCount(); ++c)
                geo.coords[tri.vertexClass(c).minLabel] = cc[c];
            return geo;
        }
    }
    fail(Errc::ResampleExhausted, "no nondegenerate geometrization found");
}

}  // namespace reggetor

#endif  // REGGETOR_GEOMETRY_HPP

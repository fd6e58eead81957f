#ifndef REGGETOR_PACHNER_HPP
#define REGGETOR_PACHNER_HPP

#include <random>

#include "reggetor/surgery.hpp"
#include "reggetor/torsion.hpp"

namespace reggetor {

enum class MoveKind { M23, M32, M14, M41 };

inline const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::M23: return "2->3";
        case MoveKind::M32: return "3->2";
        case MoveKind::M14: return "1->4";
        case MoveKind::M41: return "4->1";
    }
    return "?";
}

struct MoveRecord {
    MoveKind kind = MoveKind::M23;
    bool applied = false;
    std::string note;
    int tetsBefore = 0, tetsAfter = 0;
    int edgesBefore = 0, edgesAfter = 0;
    int newEdgeClass = -1;    // QR for 2->3
    int newVertexLabel = -1;  // for 1->4
    double invariantBefore = 0, invariantAfter = 0;
    double minorRatioError = -1;  // filled when the 2->3 minor identity is checked
};

struct MoveOutcome {
    Triangulation tri;
    DistinguishedChain chain;
    Geometrization geo;
    std::vector<int> edgeClassMap;  // old class -> new class
    MoveRecord rec;
};

namespace detail {

inline void guard_not_chain_tet(const DistinguishedChain& chain, int t) {
    if (t == chain.tetA || t == chain.tetB)
        fail(Errc::TouchesChain, "move would replace a distinguished tetrahedron");
}

// even rearrangement of tet t putting the vertex opposite `face` last; the
// first three entries span the shared face
inline std::array<int, 4> face_first_even(const Triangulation& tri, int t, int face) {
    std::array<int, 4> order{};
    int w = 0;
    for (int p : kFacePos[face]) order[w++] = p;
    order[3] = face;
    std::array<int, 4> perm = order;
    if (perm4_parity(perm) < 0) std::swap(order[0], order[1]);
    std::array<int, 4> labels{};
    for (int k = 0; k < 4; ++k) labels[k] = tri.tet(t)[order[k]];
    return labels;
}

inline int position_of_vclass(const Triangulation& tri, int t, int vclass) {
    for (int p = 0; p < 4; ++p)
        if (tri.vertexClassAt(t, p) == vclass) return p;
    fail(Errc::InvalidSpec, "vertex class not in tetrahedron");
}

inline int edge_class_of_labels(const Triangulation& tri, int t, int lblA, int lblB) {
    int pa = -1, pb = -1;
    for (int p = 0; p < 4; ++p) {
        if (tri.tet(t)[p] == lblA) pa = p;
        if (tri.tet(t)[p] == lblB) pb = p;
    }
    return tri.edgeClassAt(t, kSlotOfPair[pa][pb]);
}

}  // namespace detail

/// 2->3 move: the two tetrahedra MNPQ and RMNP adjacent across `sharedFace`
/// are replaced by MNRQ, NPRQ, PMRQ around the new edge QR. Geometry is
/// unchanged; the QR length is induced by the existing coordinates.
inline MoveOutcome move_2_3(const Triangulation& tri, const DistinguishedChain& chain,
                            const Geometrization& geo, FaceSlot sharedFace) {
    const int T1 = sharedFace.tet;
    const auto& nb = tri.neighbor(T1, sharedFace.face);
    const int T2 = nb.tet;
    if (T1 == T2) fail(Errc::ConventionViolation, "shared face joins a tetrahedron to itself");
    detail::guard_not_chain_tet(chain, T1);
    detail::guard_not_chain_tet(chain, T2);

    auto mnpq = detail::face_first_even(tri, T1, sharedFace.face);
    const int M = mnpq[0], N = mnpq[1], P = mnpq[2], Q = mnpq[3];
    const int R = tri.tet(T2)[nb.face];
    if (tri.vertexClassOfLabel(Q) == tri.vertexClassOfLabel(R))
        fail(Errc::ConventionViolation, "Q and R are the same vertex class");

    auto cc = class_coords(tri, geo);
    auto at = [&](int lbl) { return cc[tri.vertexClassOfLabel(lbl)]; };
    std::vector<Tetra> nt = {{M, N, R, Q}, {N, P, R, Q}, {P, M, R, Q}};
    for (const auto& x : nt)
        if (std::abs(six_volume(at(x[0]), at(x[1]), at(x[2]), at(x[3]))) <= kVolumeTolerance)
            fail(Errc::DegenerateResult, "a new tetrahedron would be flat");

    SurgerySpec spec;
    spec.removedTets = {T1, T2};
    spec.newTets = nt;
    spec.internalGluings = {glue_by_labels(nt, 0, 1, {N, R, Q}),
                            glue_by_labels(nt, 1, 2, {P, R, Q}),
                            glue_by_labels(nt, 2, 0, {M, R, Q})};
    auto posInT = [&](int t, int lbl) {
        return detail::position_of_vclass(tri, t, tri.vertexClassOfLabel(lbl));
    };
    spec.rewires = {{FaceSlot{T1, posInT(T1, P)}, 0}, {FaceSlot{T1, posInT(T1, M)}, 1},
                    {FaceSlot{T1, posInT(T1, N)}, 2}, {FaceSlot{T2, posInT(T2, P)}, 0},
                    {FaceSlot{T2, posInT(T2, M)}, 1}, {FaceSlot{T2, posInT(T2, N)}, 2}};
    auto slotIn = [&](int t, int u, int v) {
        return kSlotOfPair[posInT(t, u)][posInT(t, v)];
    };
    spec.edgeCarry = {
        {tri.edgeClassAt(T1, slotIn(T1, M, N)), {0, kSlotOfPair[0][1]}},
        {tri.edgeClassAt(T1, slotIn(T1, N, P)), {1, kSlotOfPair[0][1]}},
        {tri.edgeClassAt(T1, slotIn(T1, P, M)), {2, kSlotOfPair[0][1]}},
        {tri.edgeClassAt(T1, slotIn(T1, M, Q)), {0, kSlotOfPair[0][3]}},
        {tri.edgeClassAt(T1, slotIn(T1, N, Q)), {0, kSlotOfPair[1][3]}},
        {tri.edgeClassAt(T1, slotIn(T1, P, Q)), {1, kSlotOfPair[1][3]}},
        {tri.edgeClassAt(T2, slotIn(T2, M, R)), {0, kSlotOfPair[0][2]}},
        {tri.edgeClassAt(T2, slotIn(T2, N, R)), {0, kSlotOfPair[1][2]}},
        {tri.edgeClassAt(T2, slotIn(T2, P, R)), {1, kSlotOfPair[1][2]}},
    };

    SurgeryResult sr = rebuild(tri, spec);
    MoveOutcome out{std::move(sr.tri),
                    DistinguishedChain{sr.tetRemap[chain.tetA], sr.tetRemap[chain.tetB],
                                       chain.labels},
                    geo, std::move(sr.edgeClassMap), MoveRecord{}};
    out.rec.kind = MoveKind::M23;
    out.rec.applied = true;
    out.rec.tetsBefore = tri.tetCount();
    out.rec.tetsAfter = out.tri.tetCount();
    out.rec.edgesBefore = tri.edgeClassCount();
    out.rec.edgesAfter = out.tri.edgeClassCount();
    out.rec.newEdgeClass = out.tri.edgeClassAt(sr.newTetIndex[0], kSlotOfPair[2][3]);  // QR
    return out;
}

/// 3->2 move: inverse of 2->3 at an interior edge of degree exactly three.
inline MoveOutcome move_3_2(const Triangulation& tri, const DistinguishedChain& chain,
                            const Geometrization& geo, int edgeClass) {
    ChainInfo info = validate_chain(tri, chain);
    if (std::binary_search(info.boundaryEdges.begin(), info.boundaryEdges.end(), edgeClass))
        fail(Errc::TouchesChain, "move would remove a chain edge");
    auto star = tri.edgeStar(edgeClass);
    if (star.size() != 3) fail(Errc::BadDegree, "edge degree must be exactly 3");
    int t0 = star[0].first, ta = star[1].first, tb = star[2].first;
    if (t0 == ta || ta == tb || t0 == tb)
        fail(Errc::BadDegree, "the three tetrahedra around the edge must be distinct");
    for (int t : {t0, ta, tb}) detail::guard_not_chain_tet(chain, t);

    int s0 = star[0].second;
    const int Q = tri.tet(t0)[kEdgeSlot[s0][0]], Rl = tri.tet(t0)[kEdgeSlot[s0][1]];
    const int N = tri.tet(t0)[kEdgeCompletion[s0][0]], M = tri.tet(t0)[kEdgeCompletion[s0][1]];
    auto classOf = [&](int lbl) { return tri.vertexClassOfLabel(lbl); };
    // ta is entered through the face opposite N, so it plays PMRQ: its extra
    // vertex is the P of the configuration
    int Pl = -1;
    for (int p = 0; p < 4; ++p) {
        int c = tri.vertexClassAt(ta, p);
        if (c != classOf(Q) && c != classOf(Rl) && c != classOf(M) && c != classOf(N)) {
            Pl = tri.tet(ta)[p];
            break;
        }
    }
    if (Pl < 0) fail(Errc::BadDegree, "star is not a three-tetrahedron bipyramid");
    {
        bool ok = false;
        for (int p = 0; p < 4; ++p) ok |= (tri.vertexClassAt(tb, p) == classOf(Pl));
        if (!ok) fail(Errc::BadDegree, "star is not a three-tetrahedron bipyramid");
    }

    auto cc = class_coords(tri, geo);
    auto at = [&](int lbl) { return cc[classOf(lbl)]; };
    std::vector<Tetra> nt = {{M, N, Pl, Q}, {Rl, M, N, Pl}};
    for (const auto& x : nt)
        if (std::abs(six_volume(at(x[0]), at(x[1]), at(x[2]), at(x[3]))) <= kVolumeTolerance)
            fail(Errc::DegenerateResult, "a new tetrahedron would be flat");

    SurgerySpec spec;
    spec.removedTets = {t0, ta, tb};
    spec.newTets = nt;
    spec.internalGluings = {glue_by_labels(nt, 0, 1, {M, N, Pl})};
    auto posOfClass = [&](int t, int lbl) {
        return detail::position_of_vclass(tri, t, classOf(lbl));
    };
    // outer faces: dropping R lands in MNPQ, dropping Q lands in RMNP
    spec.rewires = {{FaceSlot{t0, posOfClass(t0, Rl)}, 0}, {FaceSlot{t0, posOfClass(t0, Q)}, 1},
                    {FaceSlot{ta, posOfClass(ta, Rl)}, 0}, {FaceSlot{ta, posOfClass(ta, Q)}, 1},
                    {FaceSlot{tb, posOfClass(tb, Rl)}, 0}, {FaceSlot{tb, posOfClass(tb, Q)}, 1}};
    auto oldEdge = [&](int t, int u, int v) {
        return tri.edgeClassAt(t, kSlotOfPair[posOfClass(t, u)][posOfClass(t, v)]);
    };
    spec.edgeCarry = {
        {oldEdge(t0, M, N), {0, kSlotOfPair[0][1]}}, {oldEdge(ta, Pl, M), {0, kSlotOfPair[0][2]}},
        {oldEdge(tb, N, Pl), {0, kSlotOfPair[1][2]}}, {oldEdge(t0, M, Q), {0, kSlotOfPair[0][3]}},
        {oldEdge(t0, N, Q), {0, kSlotOfPair[1][3]}},  {oldEdge(ta, Pl, Q), {0, kSlotOfPair[2][3]}},
        {oldEdge(t0, M, Rl), {1, kSlotOfPair[0][1]}}, {oldEdge(t0, N, Rl), {1, kSlotOfPair[0][2]}},
        {oldEdge(ta, Pl, Rl), {1, kSlotOfPair[0][3]}},
    };

    SurgeryResult sr = rebuild(tri, spec);
    MoveOutcome out{std::move(sr.tri),
                    DistinguishedChain{sr.tetRemap[chain.tetA], sr.tetRemap[chain.tetB],
                                       chain.labels},
                    geo, std::move(sr.edgeClassMap), MoveRecord{}};
    out.rec.kind = MoveKind::M32;
    out.rec.applied = true;
    out.rec.tetsBefore = tri.tetCount();
    out.rec.tetsAfter = out.tri.tetCount();
    out.rec.edgesBefore = tri.edgeClassCount();
    out.rec.edgesAfter = out.tri.edgeClassCount();
    return out;
}

/// 1->4 move: stars the tetrahedron at an interior point (barycenter with a
/// seeded jitter until the four new volumes clear the tolerance).
inline MoveOutcome move_1_4(const Triangulation& tri, const DistinguishedChain& chain,
                            const Geometrization& geo, int t,
                            std::optional<Vec3> placement = std::nullopt,
                            std::uint64_t jitterSeed = 0) {
    detail::guard_not_chain_tet(chain, t);
    const Tetra tt = tri.tet(t);
    const int M = tt[0], N = tt[1], P = tt[2], Q = tt[3];

    int fresh = 0;
    for (const auto& x : tri.tets())
        for (int lbl : x) fresh = std::max(fresh, lbl + 1);

    auto cc = class_coords(tri, geo);
    auto at = [&](int lbl) { return cc[tri.vertexClassOfLabel(lbl)]; };
    Vec3 bary = 0.25 * (at(M) + at(N) + at(P) + at(Q));
    double scale = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            scale = std::max(scale, (at(tt[a]) - at(tt[b])).norm());

    std::mt19937_64 rng(jitterSeed);
    Vec3 r = placement.value_or(bary);
    bool ok = false;
    for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
        ok = true;
        for (auto [a, b, c] : {std::array<int, 3>{M, N, P}, {M, N, Q}, {M, P, Q}, {N, P, Q}})
            ok &= std::abs(six_volume(at(a), at(b), at(c), r)) > kVolumeTolerance;
        if (!ok) {
            if (placement) fail(Errc::DegenerateResult, "requested placement is degenerate");
            r = bary + 0.05 * scale *
                           Vec3(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng));
        }
    }
    if (!ok) fail(Errc::ResampleExhausted, "no nondegenerate interior placement found");

    std::vector<Tetra> nt = {{M, N, P, fresh}, {M, N, fresh, Q}, {M, P, Q, fresh},
                             {N, P, fresh, Q}};
    SurgerySpec spec;
    spec.removedTets = {t};
    spec.newTets = nt;
    spec.internalGluings = {
        glue_by_labels(nt, 0, 1, {M, N, fresh}), glue_by_labels(nt, 0, 2, {M, P, fresh}),
        glue_by_labels(nt, 0, 3, {N, P, fresh}), glue_by_labels(nt, 1, 2, {M, fresh, Q}),
        glue_by_labels(nt, 1, 3, {N, fresh, Q}), glue_by_labels(nt, 2, 3, {P, fresh, Q})};
    spec.rewires = {{FaceSlot{t, 3}, 0},   // MNP
                    {FaceSlot{t, 2}, 1},   // MNQ
                    {FaceSlot{t, 1}, 2},   // MPQ
                    {FaceSlot{t, 0}, 3}};  // NPQ
    spec.edgeCarry = {
        {tri.edgeClassAt(t, 0), {0, kSlotOfPair[0][1]}},  // MN
        {tri.edgeClassAt(t, 1), {0, kSlotOfPair[0][2]}},  // MP
        {tri.edgeClassAt(t, 2), {1, kSlotOfPair[0][3]}},  // MQ
        {tri.edgeClassAt(t, 3), {0, kSlotOfPair[1][2]}},  // NP
        {tri.edgeClassAt(t, 4), {1, kSlotOfPair[1][3]}},  // NQ
        {tri.edgeClassAt(t, 5), {2, kSlotOfPair[1][2]}},  // PQ
    };

    SurgeryResult sr = rebuild(tri, spec);
    Geometrization g2 = geo;
    g2.coords[fresh] = r;
    MoveOutcome out{std::move(sr.tri),
                    DistinguishedChain{sr.tetRemap[chain.tetA], sr.tetRemap[chain.tetB],
                                       chain.labels},
                    std::move(g2), std::move(sr.edgeClassMap), MoveRecord{}};
    out.rec.kind = MoveKind::M14;
    out.rec.applied = true;
    out.rec.tetsBefore = tri.tetCount();
    out.rec.tetsAfter = out.tri.tetCount();
    out.rec.edgesBefore = tri.edgeClassCount();
    out.rec.edgesAfter = out.tri.edgeClassCount();
    out.rec.newVertexLabel = fresh;
    return out;
}

/// 4->1 move: removes an inner vertex whose star is exactly four tetrahedra.
inline MoveOutcome move_4_1(const Triangulation& tri, const DistinguishedChain& chain,
                            const Geometrization& geo, int vclass) {
    ChainInfo info = validate_chain(tri, chain);
    for (int k = 0; k < 4; ++k)
        if (info.vclass[k] == vclass)
            fail(Errc::TouchesChain, "vertex belongs to the distinguished chain");
    const auto& vc = tri.vertexClass(vclass);
    if (vc.slots.size() != 4) fail(Errc::BadDegree, "vertex degree must be exactly 4");
    std::array<int, 4> star{};
    for (int i = 0; i < 4; ++i) star[i] = vc.slots[i].first;
    {
        auto s = star;
        std::sort(s.begin(), s.end());
        if (std::unique(s.begin(), s.end()) != s.end())
            fail(Errc::BadDegree, "star tetrahedra are not distinct");
    }
    for (int t : star) detail::guard_not_chain_tet(chain, t);

    // link classes: four of them, each in three star tetrahedra
    std::map<int, int> linkCount;
    std::map<int, int> linkLabel;
    for (auto [t, p] : vc.slots)
        for (int pp = 0; pp < 4; ++pp) {
            if (pp == p) continue;
            int c = tri.vertexClassAt(t, pp);
            linkCount[c]++;
            linkLabel[c] = tri.tet(t)[pp];
        }
    if (linkCount.size() != 4) fail(Errc::BadDegree, "vertex link is not a tetrahedron");
    for (auto& [c, cnt] : linkCount)
        if (cnt != 3) fail(Errc::BadDegree, "vertex link is not a tetrahedron");

    int t0 = vc.slots[0].first, pv = vc.slots[0].second;
    std::array<int, 4> order{};
    int w = 0;
    for (int p = 0; p < 4; ++p)
        if (p != pv) order[w++] = p;
    order[3] = pv;
    if (detail::perm4_parity(order) < 0) std::swap(order[0], order[1]);
    std::array<int, 3> xyz{};
    for (int k = 0; k < 3; ++k) xyz[k] = tri.tet(t0)[order[k]];
    int missingClass = -1;
    for (auto& [c, cnt] : linkCount) {
        bool inT0 = false;
        for (int k = 0; k < 3; ++k) inT0 |= (tri.vertexClassOfLabel(xyz[k]) == c);
        if (!inT0) missingClass = c;
    }
    Tetra newTet = {xyz[0], xyz[1], xyz[2], linkLabel.at(missingClass)};

    auto cc = class_coords(tri, geo);
    auto at = [&](int lbl) { return cc[tri.vertexClassOfLabel(lbl)]; };
    if (std::abs(six_volume(at(newTet[0]), at(newTet[1]), at(newTet[2]), at(newTet[3]))) <=
        kVolumeTolerance)
        fail(Errc::DegenerateResult, "the merged tetrahedron would be flat");

    SurgerySpec spec;
    spec.removedTets = {star[0], star[1], star[2], star[3]};
    std::sort(spec.removedTets.begin(), spec.removedTets.end());
    spec.newTets = {newTet};
    for (auto [t, p] : vc.slots) spec.rewires.push_back({FaceSlot{t, p}, 0});
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            // carry the link edges through the surviving star slots
            int ca = tri.vertexClassOfLabel(newTet[a]), cb = tri.vertexClassOfLabel(newTet[b]);
            for (auto [t, p] : vc.slots) {
                int pa = -1, pb = -1;
                for (int pp = 0; pp < 4; ++pp) {
                    if (pp == p) continue;
                    if (tri.vertexClassAt(t, pp) == ca) pa = pp;
                    if (tri.vertexClassAt(t, pp) == cb) pb = pp;
                }
                if (pa >= 0 && pb >= 0) {
                    spec.edgeCarry.push_back(
                        {tri.edgeClassAt(t, kSlotOfPair[pa][pb]), {0, kSlotOfPair[a][b]}});
                    break;
                }
            }
        }

    SurgeryResult sr = rebuild(tri, spec);
    Geometrization g2 = geo;
    for (int lbl : vc.labels) g2.coords.erase(lbl);
    MoveOutcome out{std::move(sr.tri),
                    DistinguishedChain{sr.tetRemap[chain.tetA], sr.tetRemap[chain.tetB],
                                       chain.labels},
                    std::move(g2), std::move(sr.edgeClassMap), MoveRecord{}};
    out.rec.kind = MoveKind::M41;
    out.rec.applied = true;
    out.rec.tetsBefore = tri.tetCount();
    out.rec.tetsAfter = out.tri.tetCount();
    out.rec.edgesBefore = tri.edgeClassCount();
    out.rec.edgesAfter = out.tri.edgeClassCount();
    return out;
}

// ---------------------------------------------------------------------------
// Fuzz harness: random applicable relative moves with invariant tracking.

struct FuzzReport {
    std::vector<MoveRecord> records;
    double invariantStart = 0;
    double invariantFinal = 0;
    double maxDrift = 0;           // relative to the starting invariant
    double maxMinorRatioError = 0;  // 2->3 minor identity, relative
    int applied = 0;
    int skipped = 0;
};

struct FuzzOptions {
    bool checkMinorRatio = true;
};

inline FuzzReport fuzz(Triangulation tri, DistinguishedChain chain, Geometrization geo,
                       int nMoves, std::uint64_t seed, FuzzOptions opts = {}) {
    std::mt19937_64 rng(seed);
    FuzzReport rep;
    InvariantComputation cur = invariant(tri, chain, geo);
    if (!cur.acyclic) fail(Errc::NotAcyclic, "fuzz start must have a defined invariant");
    rep.invariantStart = cur.value();
    rep.invariantFinal = rep.invariantStart;

    int safety = 10 * std::max(1, nMoves);
    while (rep.applied < nMoves && safety-- > 0) {
        // candidate enumeration
        struct Cand {
            MoveKind kind;
            FaceSlot face{};
            int edge = -1, tet = -1, vertex = -1;
        };
        std::vector<Cand> cands;
        ChainInfo info = validate_chain(tri, chain);
        for (const auto& g : tri.gluings()) {
            int t1 = g.from.tet, t2 = g.to.tet;
            if (t1 == t2) continue;
            if (t1 == chain.tetA || t1 == chain.tetB || t2 == chain.tetA || t2 == chain.tetB)
                continue;
            int q = tri.vertexClassAt(t1, g.from.face), r = tri.vertexClassAt(t2, g.to.face);
            if (q == r) continue;
            cands.push_back({MoveKind::M23, g.from, -1, -1, -1});
        }
        for (int e = 0; e < tri.edgeClassCount(); ++e) {
            if (tri.edgeDegree(e) != 3) continue;
            if (std::binary_search(info.boundaryEdges.begin(), info.boundaryEdges.end(), e))
                continue;
            auto star = tri.edgeStar(e);
            std::array<int, 3> ts{star[0].first, star[1].first, star[2].first};
            std::sort(ts.begin(), ts.end());
            if (std::unique(ts.begin(), ts.end()) != ts.end()) continue;
            bool chainTet = false;
            for (auto [t, s] : star) chainTet |= (t == chain.tetA || t == chain.tetB);
            if (!chainTet) cands.push_back({MoveKind::M32, {}, e, -1, -1});
        }
        for (int t = 0; t < tri.tetCount(); ++t)
            if (t != chain.tetA && t != chain.tetB) cands.push_back({MoveKind::M14, {}, -1, t, -1});
        for (int v = 0; v < tri.vertexClassCount(); ++v) {
            bool isChain = false;
            for (int k = 0; k < 4; ++k) isChain |= (info.vclass[k] == v);
            if (!isChain && tri.vertexClass(v).slots.size() == 4)
                cands.push_back({MoveKind::M41, {}, -1, -1, v});
        }
        if (cands.empty()) break;
        const Cand& c = cands[rng() % cands.size()];

        try {
            MoveOutcome mo = [&] {
                switch (c.kind) {
                    case MoveKind::M23: return move_2_3(tri, chain, geo, c.face);
                    case MoveKind::M32: return move_3_2(tri, chain, geo, c.edge);
                    case MoveKind::M14: return move_1_4(tri, chain, geo, c.tet, std::nullopt, rng());
                    case MoveKind::M41: return move_4_1(tri, chain, geo, c.vertex);
                }
                fail(Errc::InvalidSpec, "unreachable");
            }();
            InvariantComputation next = invariant(mo.tri, mo.chain, mo.geo);
            if (!next.acyclic) fail(Errc::NotAcyclic, "acyclicity lost after a move");

            mo.rec.invariantBefore = cur.value();
            mo.rec.invariantAfter = next.value();
            if (opts.checkMinorRatio && c.kind == MoveKind::M23) {
                // ratio of f3 minors over B u {QR} vs B equals dw_QR/dl_QR
                auto ccOld = class_coords(tri, geo);
                auto f3old = build_f3(build_F3(tri, tet_geometries(tri, ccOld)),
                                      ComplexIndex::make(tri, info).innerEdges);
                ChainInfo infoNew = validate_chain(mo.tri, mo.chain);
                ComplexIndex ixNew = ComplexIndex::make(mo.tri, infoNew);
                auto ccNew = class_coords(mo.tri, mo.geo);
                auto f3new = build_f3(build_F3(mo.tri, tet_geometries(mo.tri, ccNew)),
                                      ixNew.innerEdges);
                ComplexIndex ixOld = ComplexIndex::make(tri, info);
                std::vector<int> Bold = cur.tors.pivot;  // rows in old inner ordering
                std::vector<int> Bnew;
                for (int row : Bold) {
                    int newClass = mo.edgeClassMap[ixOld.innerEdges[row]];
                    Bnew.push_back(ixNew.rowOfEdge[newClass]);
                }
                int qrRow = ixNew.rowOfEdge[mo.rec.newEdgeClass];
                Bnew.push_back(qrRow);
                LogSigned ratio = log_det(principal_minor(f3new, Bnew)) /
                                  log_det(principal_minor(f3old, Bold));
                double target = f3new(qrRow, qrRow);
                mo.rec.minorRatioError = std::abs(ratio.value() - target) / std::abs(target);
                rep.maxMinorRatioError = std::max(rep.maxMinorRatioError, mo.rec.minorRatioError);
            }

            tri = std::move(mo.tri);
            chain = mo.chain;
            geo = std::move(mo.geo);
            cur = next;
            rep.records.push_back(mo.rec);
            ++rep.applied;
            rep.invariantFinal = cur.value();
            rep.maxDrift = std::max(rep.maxDrift,
                                    std::abs(cur.value() - rep.invariantStart) /
                                        std::abs(rep.invariantStart));
        } catch (const Error& e) {
            if (e.code() == Errc::DegenerateResult || e.code() == Errc::ResampleExhausted) {
                MoveRecord rec;
                rec.kind = c.kind;
                rec.applied = false;
                rec.note = e.what();
                rep.records.push_back(rec);
                ++rep.skipped;
                continue;
            }
            throw;
        }
    }
    return rep;
}

}  // namespace reggetor

#endif  // REGGETOR_PACHNER_HPP

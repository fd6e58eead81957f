#ifndef REGGETOR_TRIANGULATION_HPP
#define REGGETOR_TRIANGULATION_HPP

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reggetor/common.hpp"

namespace reggetor {

// A tetrahedron is an ordered 4-tuple of abstract vertex labels; the ordering
// is its orientation. Faces are indexed by the opposite vertex position.
using Tetra = std::array<int, 4>;

struct FaceSlot {
    int tet = -1;
    int face = -1;
    bool operator==(const FaceSlot& o) const { return tet == o.tet && face == o.face; }
};

// One gluing entry: "map" lists, for each vertex position of the from-face in
// increasing position order, the matched vertex position on the to-face.
struct GluingSpec {
    FaceSlot from, to;
    std::array<int, 3> map{};
};

// Edge slots of a tetrahedron, by position pairs.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeSlot = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline constexpr int kSlotOfPair[4][4] = {
    {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};

// Even-permutation completion of each edge slot: (i,j,k,m) is an even
// permutation of (0,1,2,3), so volumes computed on the renamed tuple keep the
// tetrahedron's orientation sign.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeCompletion = {
    {{2, 3}, {3, 1}, {1, 2}, {0, 3}, {2, 0}, {0, 1}}};

// The 3 positions of face f (positions != f), increasing.
inline constexpr std::array<std::array<int, 3>, 4> kFacePos = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
    std::vector<int> parent_;
};

inline int perm3_parity(const std::array<int, 3>& p) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (p[i] > p[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

inline int perm4_parity(const std::array<int, 4>& p) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace detail

/// Closed oriented 3-manifold triangulation given by face gluings.
/// Immutable after construction; construction validates the manifold
/// conditions and derives vertex/edge equivalence classes.
class Triangulation {
public:
    struct Neighbor {
        int tet = -1;
        int face = -1;
        std::array<int, 4> posmap{};  // position map, own face positions -> other tet
    };

    struct EdgeClass {
        int minSlot = 0;                             // canonical id source: tet*6+slot
        std::array<int, 2> endpoints{};              // vertex classes
        std::vector<std::pair<int, int>> slots;      // (tet, slot)
    };

    struct VertexClass {
        int minLabel = 0;
        std::vector<int> labels;
        std::vector<std::pair<int, int>> slots;  // (tet, position)
    };

    Triangulation(std::vector<Tetra> tets, std::vector<GluingSpec> gluings)
        : tets_(std::move(tets)), gluings_(std::move(gluings)) {
        build();
        validate();
    }

    int tetCount() const { return int(tets_.size()); }
    const std::vector<Tetra>& tets() const { return tets_; }
    const Tetra& tet(int t) const { return tets_[t]; }
    const std::vector<GluingSpec>& gluings() const { return gluings_; }

    const Neighbor& neighbor(int t, int f) const { return adj_[t][f]; }

    int vertexClassCount() const { return int(vclasses_.size()); }
    const VertexClass& vertexClass(int c) const { return vclasses_[c]; }
    int vertexClassOfLabel(int label) const {
        auto it = labelClass_.find(label);
        if (it == labelClass_.end()) fail(Errc::NotFound, "unknown vertex label");
        return it->second;
    }
    int vertexClassAt(int t, int pos) const { return vertexClassOfLabel(tets_[t][pos]); }

    int edgeClassCount() const { return int(eclasses_.size()); }
    const EdgeClass& edgeClass(int e) const { return eclasses_[e]; }
    int edgeClassAt(int t, int slot) const { return edgeClassOfSlot_[t][slot]; }
    int edgeDegree(int e) const { return int(eclasses_[e].slots.size()); }

    /// Tetrahedron incidences around an edge, in the cyclic order induced by
    /// successive face gluings. Length equals the edge degree.
    std::vector<std::pair<int, int>> edgeStar(int e) const {
        const auto& ec = eclasses_[e];
        auto [t0, s0] = ec.slots.front();
        std::vector<std::pair<int, int>> cycle;
        int t = t0, s = s0;
        // exit through the face omitting completion[0] first
        int exitFace = kEdgeCompletion[s][0];
        for (;;) {
            cycle.push_back({t, s});
            const Neighbor& nb = adj_[t][exitFace];
            int i = kEdgeSlot[s][0], j = kEdgeSlot[s][1];
            int ni = nb.posmap[i], nj = nb.posmap[j];
            int enteredFace = nb.face;
            t = nb.tet;
            s = kSlotOfPair[ni][nj];
            // the two faces of t containing slot s
            int fa = kEdgeCompletion[s][0], fb = kEdgeCompletion[s][1];
            exitFace = (fa == enteredFace) ? fb : fa;
            if (t == t0 && s == s0) break;
            if (cycle.size() > ec.slots.size()) break;  // not a single cycle
        }
        return cycle;
    }

    // Sum over edge classes of edge degree equals 6 * tetCount by construction.

private:
    void build() {
        const int T = tetCount();
        if (T == 0) fail(Errc::InvalidSpec, "empty triangulation");

        // face adjacency from the gluing list
        adj_.assign(T, {});
        std::vector<std::array<int, 4>> seen(T, {0, 0, 0, 0});
        auto record = [&](const FaceSlot& a, const FaceSlot& b, const std::array<int, 3>& m) {
            if (a.tet < 0 || a.tet >= T || a.face < 0 || a.face > 3)
                fail(Errc::InvalidSpec, "face slot out of range");
            if (a.tet == b.tet && a.face == b.face)
                fail(Errc::NotClosed, "face glued to itself");
            if (seen[a.tet][a.face]++)
                fail(Errc::NotClosed, "face slot appears in more than one gluing");
            Neighbor nb;
            nb.tet = b.tet;
            nb.face = b.face;
            nb.posmap.fill(-1);
            for (int k = 0; k < 3; ++k) nb.posmap[kFacePos[a.face][k]] = m[k];
            adj_[a.tet][a.face] = nb;
        };
        for (const auto& g : gluings_) {
            if (g.to.tet < 0 || g.to.tet >= T || g.to.face < 0 || g.to.face > 3)
                fail(Errc::InvalidSpec, "face slot out of range");
            record(g.from, g.to, g.map);
            // inverse direction
            std::array<int, 3> inv{};
            for (int k = 0; k < 3; ++k) {
                int toPos = g.map[k];
                int idx = -1;
                for (int l = 0; l < 3; ++l)
                    if (kFacePos[g.to.face][l] == toPos) idx = l;
                if (idx < 0) fail(Errc::InvalidSpec, "gluing map position not on to-face");
                inv[idx] = kFacePos[g.from.face][k];
            }
            record(g.to, g.from, inv);
        }
        for (int t = 0; t < T; ++t)
            for (int f = 0; f < 4; ++f)
                if (!seen[t][f]) fail(Errc::NotClosed, "uncovered face slot");

        // vertex classes: same label, plus gluing identifications
        std::vector<int> labels;
        for (const auto& tt : tets_)
            for (int v : tt) labels.push_back(v);
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        std::map<int, int> labelIdx;
        for (int i = 0; i < int(labels.size()); ++i) labelIdx[labels[i]] = i;

        detail::UnionFind vuf(int(labels.size()));
        for (int t = 0; t < T; ++t)
            for (int f = 0; f < 4; ++f) {
                const Neighbor& nb = adj_[t][f];
                for (int p : kFacePos[f])
                    vuf.unite(labelIdx[tets_[t][p]], labelIdx[tets_[nb.tet][nb.posmap[p]]]);
            }
        // canonical order by minimal (tet, position) occurrence
        std::map<int, int> rootToClass;
        std::vector<int> rootOrder;
        for (int t = 0; t < T; ++t)
            for (int p = 0; p < 4; ++p) {
                int r = vuf.find(labelIdx[tets_[t][p]]);
                if (!rootToClass.count(r)) {
                    rootToClass[r] = int(rootOrder.size());
                    rootOrder.push_back(r);
                }
            }
        vclasses_.assign(rootOrder.size(), {});
        labelClass_.clear();
        for (int i = 0; i < int(labels.size()); ++i) {
            int c = rootToClass.at(vuf.find(i));
            labelClass_[labels[i]] = c;
            vclasses_[c].labels.push_back(labels[i]);
        }
        for (auto& vc : vclasses_) {
            std::sort(vc.labels.begin(), vc.labels.end());
            vc.minLabel = vc.labels.front();
        }
        for (int t = 0; t < T; ++t)
            for (int p = 0; p < 4; ++p)
                vclasses_[labelClass_[tets_[t][p]]].slots.push_back({t, p});

        // edge classes: orbits of edge slots under the gluing groupoid
        detail::UnionFind euf(6 * T);
        for (int t = 0; t < T; ++t)
            for (int f = 0; f < 4; ++f) {
                const Neighbor& nb = adj_[t][f];
                const auto& fp = kFacePos[f];
                for (int a = 0; a < 3; ++a)
                    for (int b = a + 1; b < 3; ++b) {
                        int s = kSlotOfPair[fp[a]][fp[b]];
                        int ns = kSlotOfPair[nb.posmap[fp[a]]][nb.posmap[fp[b]]];
                        euf.unite(6 * t + s, 6 * nb.tet + ns);
                    }
            }
        edgeClassOfSlot_.assign(T, {});
        std::map<int, int> erootToClass;
        for (int t = 0; t < T; ++t)
            for (int s = 0; s < 6; ++s) {
                int r = euf.find(6 * t + s);
                auto it = erootToClass.find(r);
                int c;
                if (it == erootToClass.end()) {
                    c = int(eclasses_.size());
                    erootToClass[r] = c;
                    eclasses_.push_back({});
                    eclasses_[c].minSlot = 6 * t + s;
                    eclasses_[c].endpoints = {vertexClassAt(t, kEdgeSlot[s][0]),
                                              vertexClassAt(t, kEdgeSlot[s][1])};
                    if (eclasses_[c].endpoints[0] > eclasses_[c].endpoints[1])
                        std::swap(eclasses_[c].endpoints[0], eclasses_[c].endpoints[1]);
                } else {
                    c = it->second;
                }
                edgeClassOfSlot_[t][s] = c;
                eclasses_[c].slots.push_back({t, s});
            }
    }

    void validate() const {
        // gluings reverse the induced face orientation
        for (int t = 0; t < tetCount(); ++t)
            for (int f = 0; f < 4; ++f) {
                const Neighbor& nb = adj_[t][f];
                std::array<int, 3> img{};
                for (int k = 0; k < 3; ++k) img[k] = nb.posmap[kFacePos[f][k]];
                int rho = detail::perm3_parity(img);
                int sgn = ((f + nb.face) % 2 == 0) ? 1 : -1;
                if (rho * sgn != -1)
                    fail(Errc::OrientationClash,
                         "gluing preserves induced face orientation at tet " + std::to_string(t));
            }

        // Convention 1: all four vertex classes of a tetrahedron distinct
        for (int t = 0; t < tetCount(); ++t) {
            std::array<int, 4> c{};
            for (int p = 0; p < 4; ++p) c[p] = vertexClassAt(t, p);
            std::sort(c.begin(), c.end());
            if (std::unique(c.begin(), c.end()) != c.end())
                fail(Errc::DegenerateTet,
                     "repeated vertex class in tetrahedron " + std::to_string(t));
        }

        // edge links are single cycles
        for (int e = 0; e < edgeClassCount(); ++e) {
            auto cyc = edgeStar(e);
            if (cyc.size() != eclasses_[e].slots.size())
                fail(Errc::NonManifoldEdge,
                     "edge link is not a single cycle at edge class " + std::to_string(e));
        }

        // vertex links are 2-spheres: connected and Euler characteristic 2
        for (int v = 0; v < vertexClassCount(); ++v) {
            const auto& vc = vclasses_[v];
            int FL = int(vc.slots.size());
            std::map<std::pair<int, int>, int> idx;
            for (int i = 0; i < FL; ++i) idx[vc.slots[i]] = i;
            detail::UnionFind luf(FL);
            for (auto [t, p] : vc.slots) {
                for (int f = 0; f < 4; ++f) {
                    if (f == p) continue;  // faces containing position p
                    const Neighbor& nb = adj_[t][f];
                    luf.unite(idx.at({t, p}), idx.at({nb.tet, nb.posmap[p]}));
                }
            }
            int comps = 0;
            for (int i = 0; i < FL; ++i)
                if (luf.find(i) == i) ++comps;
            int VL = 0;
            for (int e = 0; e < edgeClassCount(); ++e)
                if (eclasses_[e].endpoints[0] == v || eclasses_[e].endpoints[1] == v) ++VL;
            int chi = VL - (3 * FL) / 2 + FL;
            if (comps != 1 || chi != 2)
                fail(Errc::NonManifoldVertex,
                     "vertex link is not a 2-sphere at class " + std::to_string(v));
        }
    }

    std::vector<Tetra> tets_;
    std::vector<GluingSpec> gluings_;
    std::vector<std::array<Neighbor, 4>> adj_;
    std::map<int, int> labelClass_;
    std::vector<VertexClass> vclasses_;
    std::vector<EdgeClass> eclasses_;
    std::vector<std::array<int, 6>> edgeClassOfSlot_;
};

// ---------------------------------------------------------------------------
// Distinguished framed-knot chain

enum class ChainKind { SameOrientation, OppositeOrientation };

/// Two tetrahedra on vertex classes A,B,C,D sharing exactly the AD and BC
/// edge classes. SameOrientation is the half-integer-framing pattern,
/// OppositeOrientation the integer one.
struct DistinguishedChain {
    int tetA = -1;
    int tetB = -1;
    std::array<int, 4> labels{};  // vertex labels playing A, B, C, D
};

struct ChainInfo {
    ChainKind kind = ChainKind::SameOrientation;
    std::array<int, 4> vclass{};          // classes of A, B, C, D
    std::vector<int> boundaryEdges;       // the 10 chain edge classes, ascending
    int edgeAD = -1, edgeBC = -1;         // the shared classes
    std::array<int, 6> edgesOfA{}, edgesOfB{};  // per-slot classes keyed by label pair
    std::array<std::array<int, 4>, 2> posOfLabel{};  // position of label k in tetA/tetB
    int orientParityA = 0, orientParityB = 0;        // vs (A,B,C,D) label order
};

namespace detail {

// slot of the edge joining label positions for labels (a,b) in 0..3 keyed by
// pair index in A,B,C,D order: AB, AC, AD, BC, BD, CD
inline constexpr std::array<std::array<int, 2>, 6> kLabelPair = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace detail

enum : int { LP_AB = 0, LP_AC = 1, LP_AD = 2, LP_BC = 3, LP_BD = 4, LP_CD = 5 };

/// Confirms the Fig-1a/1b pattern and derives kind and boundary edges.
inline ChainInfo validate_chain(const Triangulation& tri, const DistinguishedChain& chain) {
    if (chain.tetA < 0 || chain.tetA >= tri.tetCount() || chain.tetB < 0 ||
        chain.tetB >= tri.tetCount())
        fail(Errc::NotAChain, "chain tetrahedron id out of range");
    if (chain.tetA == chain.tetB) fail(Errc::NotAChain, "chain tetrahedra must be distinct");

    ChainInfo info;
    for (int k = 0; k < 4; ++k) info.vclass[k] = tri.vertexClassOfLabel(chain.labels[k]);
    {
        auto c = info.vclass;
        std::sort(c.begin(), c.end());
        if (std::unique(c.begin(), c.end()) != c.end())
            fail(Errc::NotAChain, "chain labels map to fewer than four vertex classes");
    }

    auto analyze = [&](int tet, std::array<int, 4>& posOf, std::array<int, 6>& edges, int& parity) {
        std::array<int, 4> perm{};
        for (int k = 0; k < 4; ++k) {
            posOf[k] = -1;
            for (int p = 0; p < 4; ++p)
                if (tri.vertexClassAt(tet, p) == info.vclass[k]) posOf[k] = p;
            if (posOf[k] < 0)
                fail(Errc::NotAChain, "chain tetrahedron misses a chain vertex class");
        }
        for (int p = 0; p < 4; ++p)
            for (int k = 0; k < 4; ++k)
                if (posOf[k] == p) perm[p] = k;
        parity = detail::perm4_parity(perm);
        for (int pair = 0; pair < 6; ++pair) {
            int a = posOf[detail::kLabelPair[pair][0]];
            int b = posOf[detail::kLabelPair[pair][1]];
            edges[pair] = tri.edgeClassAt(tet, kSlotOfPair[a][b]);
        }
    };
    analyze(chain.tetA, info.posOfLabel[0], info.edgesOfA, info.orientParityA);
    analyze(chain.tetB, info.posOfLabel[1], info.edgesOfB, info.orientParityB);

    if (info.edgesOfA[LP_AD] != info.edgesOfB[LP_AD] ||
        info.edgesOfA[LP_BC] != info.edgesOfB[LP_BC])
        fail(Errc::NotAChain, "chain tetrahedra do not share the AD and BC edge classes");
    info.edgeAD = info.edgesOfA[LP_AD];
    info.edgeBC = info.edgesOfA[LP_BC];

    std::vector<int> all = {info.edgesOfA[LP_AB], info.edgesOfA[LP_AC], info.edgesOfA[LP_BD],
                            info.edgesOfA[LP_CD], info.edgesOfB[LP_AB], info.edgesOfB[LP_AC],
                            info.edgesOfB[LP_BD], info.edgesOfB[LP_CD], info.edgeAD, info.edgeBC};
    std::sort(all.begin(), all.end());
    if (std::unique(all.begin(), all.end()) != all.end())
        fail(Errc::SharedEdgeCollision,
             "a chain edge is identified with another chain edge beyond the AD/BC sharing");
    info.boundaryEdges = all;

    info.kind = (info.orientParityA == info.orientParityB) ? ChainKind::SameOrientation
                                                           : ChainKind::OppositeOrientation;
    return info;
}

/// All edge classes except the 10 chain ones, ascending class id.
inline std::vector<int> inner_edges(const Triangulation& tri, const ChainInfo& info) {
    std::vector<int> out;
    for (int e = 0; e < tri.edgeClassCount(); ++e)
        if (!std::binary_search(info.boundaryEdges.begin(), info.boundaryEdges.end(), e))
            out.push_back(e);
    return out;
}

/// All vertex classes except A,B,C,D, ascending class id.
inline std::vector<int> inner_vertices(const Triangulation& tri, const ChainInfo& info) {
    std::vector<int> out;
    for (int v = 0; v < tri.vertexClassCount(); ++v)
        if (v != info.vclass[0] && v != info.vclass[1] && v != info.vclass[2] &&
            v != info.vclass[3])
            out.push_back(v);
    return out;
}

// ---------------------------------------------------------------------------
// Construction helper used by the catalog and framing modules: glue two
// tetrahedra along the face spanned by three shared labels, matching vertices
// of the same label.

inline GluingSpec glue_by_labels(const std::vector<Tetra>& tets, int t1, int t2,
                                 const std::array<int, 3>& faceLabels) {
    auto findFace = [&](int t) {
        int missing = -1;
        for (int p = 0; p < 4; ++p) {
            int lbl = tets[t][p];
            bool onFace = false;
            for (int fl : faceLabels) onFace |= (fl == lbl);
            if (!onFace) {
                if (missing >= 0) fail(Errc::InvalidSpec, "face labels ambiguous");
                missing = p;
            }
        }
        if (missing < 0) fail(Errc::InvalidSpec, "face labels not a face of the tetrahedron");
        return missing;
    };
    int f1 = findFace(t1), f2 = findFace(t2);
    GluingSpec g;
    g.from = {t1, f1};
    g.to = {t2, f2};
    for (int k = 0; k < 3; ++k) {
        int lbl = tets[t1][kFacePos[f1][k]];
        int toPos = -1;
        for (int p : kFacePos[f2])
            if (tets[t2][p] == lbl) toPos = p;
        if (toPos < 0) fail(Errc::InvalidSpec, "face labels do not match");
        g.map[k] = toPos;
    }
    return g;
}

// Positional variant: fromLabels[k] on t1 is matched to toLabels[k] on t2.
inline GluingSpec glue_matching(const std::vector<Tetra>& tets, int t1,
                                const std::array<int, 3>& fromLabels, int t2,
                                const std::array<int, 3>& toLabels) {
    auto faceOpposite = [&](int t, const std::array<int, 3>& lbls) {
        for (int p = 0; p < 4; ++p) {
            int lbl = tets[t][p];
            if (lbl != lbls[0] && lbl != lbls[1] && lbl != lbls[2]) return p;
        }
        fail(Errc::InvalidSpec, "labels are not a face");
    };
    int f1 = faceOpposite(t1, fromLabels), f2 = faceOpposite(t2, toLabels);
    GluingSpec g;
    g.from = {t1, f1};
    g.to = {t2, f2};
    for (int k = 0; k < 3; ++k) {
        int pos1 = kFacePos[f1][k];
        int lbl1 = tets[t1][pos1];
        int which = -1;
        for (int l = 0; l < 3; ++l)
            if (fromLabels[l] == lbl1) which = l;
        if (which < 0) fail(Errc::InvalidSpec, "from-labels inconsistent");
        int lbl2 = toLabels[which];
        int toPos = -1;
        for (int p : kFacePos[f2])
            if (tets[t2][p] == lbl2) toPos = p;
        if (toPos < 0) fail(Errc::InvalidSpec, "to-labels inconsistent");
        g.map[k] = toPos;
    }
    return g;
}

}  // namespace reggetor

#endif  // REGGETOR_TRIANGULATION_HPP

#ifndef REGGETOR_FRAMING_HPP
#define REGGETOR_FRAMING_HPP

#include "reggetor/surgery.hpp"
#include "reggetor/torsion.hpp"

namespace reggetor {

// Each half-revolution works on one pair of chain edges; the lines alternate,
// AB/CD first in the forward direction.
enum class FramingPair { AB_CD, AC_BD };

inline FramingPair other_pair(FramingPair p) {
    return p == FramingPair::AB_CD ? FramingPair::AC_BD : FramingPair::AB_CD;
}

struct FramingStep {
    int eps = 0;
    FramingPair pair = FramingPair::AB_CD;
    int newEdgeE = -1;      // class of the fresh AB-line (or AC-line) edge
    int newEdgeEstar = -1;  // class of the fresh CD-line (or BD-line) edge
    int midTet = -1;        // the turned-inside-out copy, the new chain tetrahedron
};

struct FramingState {
    int halfRevolutions = 0;
    FramingPair next = FramingPair::AB_CD;
    std::vector<FramingStep> history;
};

struct FramedSpace {
    Triangulation tri;
    DistinguishedChain chain;
};

/// One half-revolution of the framing: the chain tetrahedron tetA is turned
/// inside out and packed into a three-copy sandwich glued back into its slot.
/// Two fresh edges appear, the chain kind flips, and the everted middle copy
/// together with the untouched partner forms the new chain. Coordinates are
/// untouched: all three copies live on the A,B,C,D coordinates.
inline FramedSpace change_framing_triangulation(const Triangulation& tri,
                                                const DistinguishedChain& chain,
                                                FramingState& state) {
    ChainInfo info = validate_chain(tri, chain);
    const int X = chain.tetA;
    const auto& pos = info.posOfLabel[0];

    int la, lb, lc, ld;  // label indices of the working pair: (la,lb) / (lc,ld)
    if (state.next == FramingPair::AB_CD) {
        la = 0; lb = 1; lc = 2; ld = 3;
    } else {
        la = 0; lb = 2; lc = 1; ld = 3;
    }
    std::array<int, 4> lbl{};
    for (int k = 0; k < 4; ++k) lbl[k] = tri.tet(X)[pos[k]];

    Tetra mid = tri.tet(X);
    std::swap(mid[0], mid[1]);  // opposite orientation, same vertex names

    SurgerySpec spec;
    spec.removedTets = {X};
    spec.newTets = {tri.tet(X), mid, tri.tet(X)};  // front, mid, back

    auto faceLabelsWithout = [&](int k) {
        std::array<int, 3> out{};
        int w = 0;
        for (int j = 0; j < 4; ++j)
            if (j != k) out[w++] = lbl[j];
        return out;
    };
    // front <-> mid along the faces containing the (lc,ld) pair
    spec.internalGluings.push_back(glue_by_labels(spec.newTets, 0, 1, faceLabelsWithout(la)));
    spec.internalGluings.push_back(glue_by_labels(spec.newTets, 0, 1, faceLabelsWithout(lb)));
    // back <-> mid along the faces containing the (la,lb) pair
    spec.internalGluings.push_back(glue_by_labels(spec.newTets, 2, 1, faceLabelsWithout(lc)));
    spec.internalGluings.push_back(glue_by_labels(spec.newTets, 2, 1, faceLabelsWithout(ld)));

    // front keeps the ambient gluings of the faces containing (la,lb); back
    // keeps the (lc,ld) ones
    spec.rewires.push_back({FaceSlot{X, pos[lc]}, 0});
    spec.rewires.push_back({FaceSlot{X, pos[ld]}, 0});
    spec.rewires.push_back({FaceSlot{X, pos[la]}, 2});
    spec.rewires.push_back({FaceSlot{X, pos[lb]}, 2});

    SurgeryResult sr = rebuild(tri, spec);

    int midTet = sr.newTetIndex[1];
    auto slotOfLabels = [&](int t, int u, int v) {
        int pu = -1, pv = -1;
        for (int p = 0; p < 4; ++p) {
            if (sr.tri.tet(t)[p] == u) pu = p;
            if (sr.tri.tet(t)[p] == v) pv = p;
        }
        return kSlotOfPair[pu][pv];
    };

    FramingStep step;
    step.pair = state.next;
    step.eps = -info.orientParityA;  // +1 for a BACD-oriented turned tetrahedron
    step.midTet = midTet;
    step.newEdgeE = sr.tri.edgeClassAt(midTet, slotOfLabels(midTet, lbl[la], lbl[lb]));
    step.newEdgeEstar = sr.tri.edgeClassAt(midTet, slotOfLabels(midTet, lbl[lc], lbl[ld]));
    state.history.push_back(step);
    state.next = other_pair(state.next);
    ++state.halfRevolutions;

    DistinguishedChain nc;
    nc.tetA = midTet;
    nc.tetB = sr.tetRemap[chain.tetB];
    nc.labels = chain.labels;
    validate_chain(sr.tri, nc);
    return FramedSpace{std::move(sr.tri), nc};
}

/// Apply h forward half-revolutions starting from the given pair.
inline FramedSpace apply_half_revolutions(const Triangulation& tri,
                                          const DistinguishedChain& chain, int h,
                                          FramingState* stateOut = nullptr,
                                          FramingPair first = FramingPair::AB_CD) {
    FramingState st;
    st.next = first;
    FramedSpace cur{tri, chain};
    for (int i = 0; i < h; ++i) {
        FramedSpace nxt = change_framing_triangulation(cur.tri, cur.chain, st);
        cur = std::move(nxt);
    }
    if (stateOut) *stateOut = st;
    return cur;
}

// ---------------------------------------------------------------------------
// Matrix-level framing update (the G3 block rewrite)

/// Grows G3 by the two fresh edges of a half-revolution on the pair indexed
/// by (rowE, rowEstar): the coupling loses eps, the fresh rows couple with
/// eps to the old pair and with -eps to each other.
inline Eigen::MatrixXd change_framing_matrix(const Eigen::MatrixXd& G3, int rowE, int rowEstar,
                                             int eps) {
    const int n = int(G3.rows());
    if (rowE < 0 || rowE >= n || rowEstar < 0 || rowEstar >= n || rowE == rowEstar)
        fail(Errc::IndexClash, "framing rows invalid");
    if (eps != 1 && eps != -1) fail(Errc::InvalidSpec, "eps must be +-1");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n + 2, n + 2);
    out.topLeftCorner(n, n) = G3;
    out(rowE, rowEstar) -= eps;
    out(rowEstar, rowE) -= eps;
    out(rowE, n + 1) = eps;
    out(n + 1, rowE) = eps;
    out(rowEstar, n) = eps;
    out(n, rowEstar) = eps;
    out(n, n + 1) = -eps;
    out(n + 1, n) = -eps;
    return out;
}

/// Matrix-path invariant state: carries G3, the per-row edge lengths and the
/// chain-excluded rows through a sequence of framing updates. Valid for
/// triangulations without inner vertices (the catalog spaces).
struct MatrixFramingPath {
    Eigen::MatrixXd G3;
    std::vector<double> length;
    int rowAD = -1, rowBC = -1;
    std::array<int, 4> partner{};  // tetB's AB, CD, AC, BD rows
    int curAB = -1, curCD = -1, curAC = -1, curBD = -1;
    int parity = 0;  // orientation parity of the current sandwich-side tet
    FramingPair next = FramingPair::AB_CD;
    LogSigned prodNeg6V;  // over non-chain tetrahedra, grows with each step
    double sixVabcd = 0;
};

inline MatrixFramingPath matrix_path_begin(const Triangulation& tri,
                                           const DistinguishedChain& chain,
                                           const Geometrization& geo) {
    auto cc = class_coords(tri, geo);
    auto tg = tet_geometries(tri, cc);
    ChainInfo info = validate_chain(tri, chain);
    if (tri.vertexClassCount() != 4)
        fail(Errc::InvalidSpec, "matrix path requires a chain-vertices-only triangulation");

    MatrixFramingPath mp;
    auto F3 = build_F3(tri, tg);
    mp.length = all_edge_lengths(tri, cc);
    mp.sixVabcd = chain_six_volume(cc, info);
    mp.G3 = build_G3(F3, mp.length, mp.sixVabcd);
    mp.rowAD = info.edgeAD;
    mp.rowBC = info.edgeBC;
    mp.partner = {info.edgesOfB[LP_AB], info.edgesOfB[LP_CD], info.edgesOfB[LP_AC],
                  info.edgesOfB[LP_BD]};
    mp.curAB = info.edgesOfA[LP_AB];
    mp.curCD = info.edgesOfA[LP_CD];
    mp.curAC = info.edgesOfA[LP_AC];
    mp.curBD = info.edgesOfA[LP_BD];
    mp.parity = info.orientParityA;
    mp.prodNeg6V = LogSigned::one();
    for (int t = 0; t < tri.tetCount(); ++t) {
        if (t == chain.tetA || t == chain.tetB) continue;
        mp.prodNeg6V = mp.prodNeg6V * LogSigned::from(-tg[t].sixV);
    }
    return mp;
}

inline void matrix_path_step(MatrixFramingPath& mp) {
    const int n = int(mp.G3.rows());
    int eps = -mp.parity;
    if (mp.next == FramingPair::AB_CD) {
        mp.G3 = change_framing_matrix(mp.G3, mp.curAB, mp.curCD, eps);
        mp.length.push_back(mp.length[mp.curAB]);
        mp.length.push_back(mp.length[mp.curCD]);
        mp.curAB = n;
        mp.curCD = n + 1;
    } else {
        mp.G3 = change_framing_matrix(mp.G3, mp.curAC, mp.curBD, eps);
        mp.length.push_back(mp.length[mp.curAC]);
        mp.length.push_back(mp.length[mp.curBD]);
        mp.curAC = n;
        mp.curBD = n + 1;
    }
    // the two sandwich companions enter the volume product as (-)(+-6V)^2
    mp.prodNeg6V = mp.prodNeg6V * LogSigned::from(mp.sixVabcd).pow(2);
    mp.parity = -mp.parity;
    mp.next = other_pair(mp.next);
}

/// I from the current matrix state: (6V_ABCD)^(4+N1') / (prod'(-6V) det g3).
inline LogSigned matrix_path_invariant(const MatrixFramingPath& mp) {
    const int n = int(mp.G3.rows());
    std::vector<char> excluded(n, 0);
    for (int r : {mp.rowAD, mp.rowBC, mp.partner[0], mp.partner[1], mp.partner[2], mp.partner[3],
                  mp.curAB, mp.curCD, mp.curAC, mp.curBD})
        excluded[r] = 1;
    std::vector<int> inner;
    for (int i = 0; i < n; ++i)
        if (!excluded[i]) inner.push_back(i);
    LogSigned det = log_det(principal_minor(mp.G3, inner));
    if (det.zero()) return LogSigned{};
    return LogSigned::from(mp.sixVabcd).pow(4 + int(inner.size())) / (mp.prodNeg6V * det);
}

}  // namespace reggetor

#endif  // REGGETOR_FRAMING_HPP

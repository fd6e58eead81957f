#ifndef REGGETOR_SURGERY_HPP
#define REGGETOR_SURGERY_HPP

#include <map>
#include <set>

#include "reggetor/triangulation.hpp"

namespace reggetor {

/// Local rebuild of a triangulation: a set of tetrahedra is removed, new ones
/// are inserted, the freed boundary faces are rewired onto the new
/// tetrahedra, and everything is revalidated. Faces are matched through
/// vertex classes, so multi-label classes survive the surgery.
struct SurgerySpec {
    std::vector<int> removedTets;
    std::vector<Tetra> newTets;                  // labels; may contain one fresh label
    std::vector<GluingSpec> internalGluings;     // tet fields are local new-tet indices
    struct Rewire {
        FaceSlot oldSlot;  // a face of a removed tet whose partner must be re-attached
        int newTet = -1;   // local index carrying the same three vertex classes
    };
    std::vector<Rewire> rewires;
    // old edge class -> (local new tet, slot); resolves classes whose slots
    // all sat inside removed tetrahedra
    std::vector<std::pair<int, std::pair<int, int>>> edgeCarry;
};

struct SurgeryResult {
    Triangulation tri;
    std::vector<int> tetRemap;      // old tet -> new index, -1 if removed
    std::vector<int> newTetIndex;   // local new tet -> global index
    std::vector<int> edgeClassMap;  // old edge class -> new edge class, -1 if gone
};

namespace detail {

// position of a vertex class within a tetrahedron tuple (classes resolved by
// the lookup, which covers fresh labels of the new tets)
inline int position_of_class(const Tetra& tt, int vclass,
                             const std::map<int, int>& classOfLabel) {
    for (int p = 0; p < 4; ++p) {
        auto it = classOfLabel.find(tt[p]);
        if (it != classOfLabel.end() && it->second == vclass) return p;
    }
    fail(Errc::InvalidSpec, "vertex class not present in tetrahedron");
}

}  // namespace detail

inline SurgeryResult rebuild(const Triangulation& oldTri, const SurgerySpec& spec) {
    const int T = oldTri.tetCount();
    std::set<int> removed(spec.removedTets.begin(), spec.removedTets.end());
    if (removed.size() != spec.removedTets.size())
        fail(Errc::InvalidSpec, "duplicate removed tetrahedron");

    std::vector<int> remap(T, -1);
    std::vector<Tetra> tets;
    for (int t = 0; t < T; ++t) {
        if (removed.count(t)) continue;
        remap[t] = int(tets.size());
        tets.push_back(oldTri.tet(t));
    }
    std::vector<int> newIndex(spec.newTets.size());
    for (int k = 0; k < int(spec.newTets.size()); ++k) {
        newIndex[k] = int(tets.size());
        tets.push_back(spec.newTets[k]);
    }

    // class lookup covering old labels and fresh ones
    std::map<int, int> classOfLabel;
    for (int c = 0; c < oldTri.vertexClassCount(); ++c)
        for (int lbl : oldTri.vertexClass(c).labels) classOfLabel[lbl] = c;
    int freshClass = oldTri.vertexClassCount();
    for (const auto& tt : spec.newTets)
        for (int lbl : tt)
            if (!classOfLabel.count(lbl)) classOfLabel[lbl] = freshClass++;

    // resolve rewires: face of the local new tet carrying the same classes
    std::map<std::pair<int, int>, FaceSlot> rewired;  // old slot -> new global slot
    for (const auto& rw : spec.rewires) {
        std::array<int, 3> want{};
        const auto& fp = kFacePos[rw.oldSlot.face];
        for (int k = 0; k < 3; ++k)
            want[k] = classOfLabel.at(oldTri.tet(rw.oldSlot.tet)[fp[k]]);
        std::array<int, 3> sorted = want;
        std::sort(sorted.begin(), sorted.end());
        const Tetra& nt = spec.newTets[rw.newTet];
        int face = -1;
        for (int f = 0; f < 4 && face < 0; ++f) {
            std::array<int, 3> have{};
            for (int k = 0; k < 3; ++k) have[k] = classOfLabel.at(nt[kFacePos[f][k]]);
            std::sort(have.begin(), have.end());
            if (have == sorted) face = f;
        }
        if (face < 0) fail(Errc::InvalidSpec, "rewire target has no matching face");
        rewired[{rw.oldSlot.tet, rw.oldSlot.face}] = FaceSlot{newIndex[rw.newTet], face};
    }

    auto newPosOfOldPos = [&](const FaceSlot& oldSlot, const FaceSlot& rewiredSlot,
                              int oldPos) {
        int cls = classOfLabel.at(oldTri.tet(oldSlot.tet)[oldPos]);
        return detail::position_of_class(tets[rewiredSlot.tet], cls, classOfLabel);
    };

    std::vector<GluingSpec> gl;
    for (const auto& g : oldTri.gluings()) {
        bool fromGone = removed.count(g.from.tet), toGone = removed.count(g.to.tet);
        if (!fromGone && !toGone) {
            GluingSpec ng = g;
            ng.from.tet = remap[g.from.tet];
            ng.to.tet = remap[g.to.tet];
            gl.push_back(ng);
            continue;
        }
        if (fromGone && toGone) {
            auto ia = rewired.find({g.from.tet, g.from.face});
            auto ib = rewired.find({g.to.tet, g.to.face});
            if (ia == rewired.end() || ib == rewired.end()) continue;  // interior, dropped
            GluingSpec ng;
            ng.from = ia->second;
            ng.to = ib->second;
            for (int k = 0; k < 3; ++k) {
                int p = kFacePos[ng.from.face][k];
                // position on the old from-face with the same class
                int cls = classOfLabel.at(tets[ng.from.tet][p]);
                int oldP = detail::position_of_class(oldTri.tet(g.from.tet), cls, classOfLabel);
                int idx = -1;
                for (int l = 0; l < 3; ++l)
                    if (kFacePos[g.from.face][l] == oldP) idx = l;
                if (idx < 0) fail(Errc::InvalidSpec, "rewire position mismatch");
                ng.map[k] = newPosOfOldPos(g.to, ng.to, g.map[idx]);
            }
            gl.push_back(ng);
            continue;
        }
        // exactly one side removed: orient so the survivor is 'from'
        FaceSlot surv = fromGone ? g.to : g.from;
        FaceSlot gone = fromGone ? g.from : g.to;
        auto it = rewired.find({gone.tet, gone.face});
        if (it == rewired.end())
            fail(Errc::InvalidSpec, "removed face with surviving partner lacks a rewire");
        GluingSpec ng;
        ng.from = FaceSlot{remap[surv.tet], surv.face};
        ng.to = it->second;
        const auto& nb = oldTri.neighbor(surv.tet, surv.face);  // == gone side
        for (int k = 0; k < 3; ++k) {
            int p = kFacePos[surv.face][k];
            ng.map[k] = newPosOfOldPos(gone, ng.to, nb.posmap[p]);
        }
        gl.push_back(ng);
    }
    for (auto g : spec.internalGluings) {
        g.from.tet = newIndex[g.from.tet];
        g.to.tet = newIndex[g.to.tet];
        gl.push_back(g);
    }

    Triangulation nt(tets, gl);

    // old edge class -> new edge class
    std::vector<int> emap(oldTri.edgeClassCount(), -1);
    for (int e = 0; e < oldTri.edgeClassCount(); ++e) {
        for (auto [t, s] : oldTri.edgeClass(e).slots) {
            if (remap[t] >= 0) {
                emap[e] = nt.edgeClassAt(remap[t], s);
                break;
            }
        }
    }
    for (const auto& [e, where] : spec.edgeCarry)
        if (emap[e] < 0) emap[e] = nt.edgeClassAt(newIndex[where.first], where.second);

    return SurgeryResult{std::move(nt), std::move(remap), std::move(newIndex), std::move(emap)};
}

}  // namespace reggetor

#endif  // REGGETOR_SURGERY_HPP

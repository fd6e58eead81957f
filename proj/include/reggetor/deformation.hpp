#ifndef REGGETOR_DEFORMATION_HPP
#define REGGETOR_DEFORMATION_HPP

#include <Eigen/Dense>

#include "reggetor/geometry.hpp"
#include "reggetor/triangulation.hpp"

namespace reggetor {

/// Row/column bookkeeping for the deformation complex
///   0 -> (dx)' --f2--> (dl)' --f3--> (dw)' --f4--> +' so(3) -> 0
/// Rows of f3 are the inner edges, columns of f2 the inner-vertex coordinate
/// triples, both in canonical ascending class order.
struct ComplexIndex {
    std::vector<int> innerEdges;
    std::vector<int> innerVertices;
    std::vector<int> rowOfEdge;      // edge class -> row, -1 when not inner
    std::vector<int> tripleOfVertex; // vertex class -> triple index, -1 when chain vertex

    static ComplexIndex make(const Triangulation& tri, const ChainInfo& info) {
        ComplexIndex ix;
        ix.innerEdges = inner_edges(tri, info);
        ix.innerVertices = inner_vertices(tri, info);
        ix.rowOfEdge.assign(tri.edgeClassCount(), -1);
        for (int r = 0; r < int(ix.innerEdges.size()); ++r) ix.rowOfEdge[ix.innerEdges[r]] = r;
        ix.tripleOfVertex.assign(tri.vertexClassCount(), -1);
        for (int c = 0; c < int(ix.innerVertices.size()); ++c)
            ix.tripleOfVertex[ix.innerVertices[c]] = c;
        return ix;
    }

    int nInnerEdges() const { return int(innerEdges.size()); }
    int nInnerVertices() const { return int(innerVertices.size()); }
};

/// Full derivative matrix over all edges: F3(a,b) = d(omega_a)/d(l_b),
/// assembled uniformly from per-tetrahedron analytic dihedral gradients.
/// Multi-incidences (one tetrahedron meeting an edge class several times)
/// are handled by the per-slot accumulation.
inline Eigen::MatrixXd build_F3(const Triangulation& tri, const std::vector<TetGeometry>& tg) {
    const int n = tri.edgeClassCount();
    Eigen::MatrixXd F3 = Eigen::MatrixXd::Zero(n, n);
    for (int t = 0; t < tri.tetCount(); ++t) {
        auto dphi = dihedral_gradients(tg[t]);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
                F3(tri.edgeClassAt(t, a), tri.edgeClassAt(t, b)) -= dphi(a, b);
    }
    return F3;
}

/// Submatrix of F3 on the inner edges.
inline Eigen::MatrixXd build_f3(const Eigen::MatrixXd& F3, const std::vector<int>& innerEdges) {
    const int n = int(innerEdges.size());
    Eigen::MatrixXd f3(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f3(i, j) = F3(innerEdges[i], innerEdges[j]);
    return f3;
}

/// f2: differentials of edge lengths by inner-vertex coordinates. The row of
/// edge PQ carries -e_PQ in P's triple and +e_PQ in Q's, chain vertices
/// contributing nothing.
inline Eigen::MatrixXd build_f2(const Triangulation& tri, const std::vector<Vec3>& cc,
                                const ComplexIndex& ix) {
    Eigen::MatrixXd f2 = Eigen::MatrixXd::Zero(ix.nInnerEdges(), 3 * ix.nInnerVertices());
    for (int r = 0; r < ix.nInnerEdges(); ++r) {
        const auto& ec = tri.edgeClass(ix.innerEdges[r]);
        int P = ec.endpoints[0], Q = ec.endpoints[1];
        Vec3 u = cc[Q] - cc[P];
        double l = u.norm();
        if (l == 0.0) fail(Errc::DegenerateTet, "zero-length edge");
        u /= l;
        if (ix.tripleOfVertex[P] >= 0)
            for (int k = 0; k < 3; ++k) f2(r, 3 * ix.tripleOfVertex[P] + k) = -u[k];
        if (ix.tripleOfVertex[Q] >= 0)
            for (int k = 0; k < 3; ++k) f2(r, 3 * ix.tripleOfVertex[Q] + k) = u[k];
    }
    return f2;
}

/// f4 assembled independently from the unit vectors e_QR of the so(3)
/// relation at each inner vertex; equals -f2^T.
inline Eigen::MatrixXd build_f4(const Triangulation& tri, const std::vector<Vec3>& cc,
                                const ComplexIndex& ix) {
    Eigen::MatrixXd f4 = Eigen::MatrixXd::Zero(3 * ix.nInnerVertices(), ix.nInnerEdges());
    for (int col = 0; col < ix.nInnerEdges(); ++col) {
        const auto& ec = tri.edgeClass(ix.innerEdges[col]);
        for (int end = 0; end < 2; ++end) {
            int Q = ec.endpoints[end], R = ec.endpoints[1 - end];
            int blk = ix.tripleOfVertex[Q];
            if (blk < 0) continue;
            Vec3 u = cc[R] - cc[Q];
            u /= u.norm();
            for (int k = 0; k < 3; ++k) f4(3 * blk + k, col) = u[k];
        }
    }
    return f4;
}

/// Normalized full matrix G3 = 6V_ABCD diag(1/l) F3 diag(1/l), with 6V_ABCD
/// the oriented volume of the chain coordinates in label order A,B,C,D.
inline Eigen::MatrixXd build_G3(const Eigen::MatrixXd& F3, const std::vector<double>& length,
                                double sixV_abcd) {
    const int n = int(F3.rows());
    Eigen::MatrixXd G3(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G3(i, j) = sixV_abcd * F3(i, j) / (length[i] * length[j]);
    return G3;
}

inline std::vector<double> all_edge_lengths(const Triangulation& tri,
                                            const std::vector<Vec3>& cc) {
    std::vector<double> out(tri.edgeClassCount());
    for (int e = 0; e < tri.edgeClassCount(); ++e) out[e] = edge_length(cc, tri, e);
    return out;
}

inline double chain_six_volume(const std::vector<Vec3>& cc, const ChainInfo& info) {
    return six_volume(cc[info.vclass[0]], cc[info.vclass[1]], cc[info.vclass[2]],
                      cc[info.vclass[3]]);
}

}  // namespace reggetor

#endif  // REGGETOR_DEFORMATION_HPP

#ifndef REGGETOR_TORSION_HPP
#define REGGETOR_TORSION_HPP

#include <Eigen/Dense>
#include <optional>

#include "reggetor/deformation.hpp"

namespace reggetor {

constexpr double kPivotTol = 1e-8;  // relative to the largest initial diagonal

inline LogSigned log_det(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return LogSigned::one();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    LogSigned d = LogSigned::from(double(lu.permutationP().determinant()));
    auto diag = lu.matrixLU().diagonal();
    for (int i = 0; i < diag.size(); ++i) {
        if (diag[i] == 0.0) return LogSigned{};
        d = d * LogSigned::from(diag[i]);
    }
    return d;
}

// LU-based relative nonsingularity gate used when extending pivot sets.
inline bool plausibly_nonsingular(const Eigen::MatrixXd& m, double rel = 1e-10) {
    if (m.rows() == 0) return true;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    double mx = 0, mn = std::numeric_limits<double>::infinity();
    auto diag = lu.matrixLU().diagonal();
    for (int i = 0; i < diag.size(); ++i) {
        mx = std::max(mx, std::abs(diag[i]));
        mn = std::min(mn, std::abs(diag[i]));
    }
    return mx > 0 && mn > rel * std::max(1.0, mx);
}

inline Eigen::MatrixXd principal_minor(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (int i = 0; i < int(idx.size()); ++i)
        for (int j = 0; j < int(idx.size()); ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
}

/// Greedy symmetric pivoting on the Schur-complement diagonal; when the
/// diagonal gives out before targetRank (identically-zero diagonals occur on
/// collapsed catalog geometrizations), the set is completed by determinant
/// tests. Throws RankDeficit if no nondegenerate diagonal minor of the target
/// size exists.
inline std::vector<int> select_pivot_set(const Eigen::MatrixXd& f3, int targetRank,
                                         double tol = kPivotTol) {
    const int n = int(f3.rows());
    if (targetRank < 0 || targetRank > n) fail(Errc::RankDeficit, "target rank out of range");
    if (targetRank == n) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        if (!plausibly_nonsingular(f3))
            fail(Errc::RankDeficit, "f3 singular at full target rank");
        return all;
    }
    Eigen::MatrixXd S = f3;
    std::vector<char> active(n, 1);
    std::vector<int> B;
    double scale0 = 0;
    for (int i = 0; i < n; ++i) scale0 = std::max(scale0, std::abs(S(i, i)));
    while (int(B.size()) < targetRank) {
        int best = -1;
        double bestAbs = 0;
        for (int i = 0; i < n; ++i)
            if (active[i] && std::abs(S(i, i)) > bestAbs) {
                bestAbs = std::abs(S(i, i));
                best = i;
            }
        if (best < 0 || scale0 == 0 || bestAbs <= tol * scale0) break;
        B.push_back(best);
        active[best] = 0;
        for (int j = 0; j < n; ++j) {
            if (!active[j]) continue;
            for (int k = 0; k < n; ++k) {
                if (!active[k]) continue;
                S(j, k) -= S(j, best) * S(best, k) / S(best, best);
            }
        }
    }
    if (int(B.size()) < targetRank) {
        // completion by explicit minor tests
        for (int i = 0; i < n && int(B.size()) < targetRank; ++i) {
            if (!active[i]) continue;
            std::vector<int> trial = B;
            trial.push_back(i);
            if (plausibly_nonsingular(principal_minor(f3, trial))) {
                B = trial;
                active[i] = 0;
            }
        }
    }
    if (int(B.size()) < targetRank)
        fail(Errc::RankDeficit, "no nondegenerate diagonal minor of the target size");
    std::sort(B.begin(), B.end());
    return B;
}

inline int symmetric_rank_estimate(const Eigen::MatrixXd& f3, double rel = 1e-8) {
    if (f3.rows() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f3, Eigen::EigenvaluesOnly);
    double mx = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        mx = std::max(mx, std::abs(es.eigenvalues()[i]));
    int r = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i]) > rel * mx) ++r;
    return r;
}

struct TorsionResult {
    std::vector<int> pivot;   // row indices into the inner-edge ordering
    LogSigned detF3B;
    LogSigned detF2Bbar;
    LogSigned tau;
    bool acyclic = false;
    int rankEstimate = 0;
};

/// tau = (-1)^{N0'} (det f2|_Bbar)^2 / det f3|_B. B indexes rows of f3;
/// Bbar is its complement among the inner edges and selects rows of f2.
inline TorsionResult torsion(const Eigen::MatrixXd& f2, const Eigen::MatrixXd& f3,
                             const std::vector<int>& B, int nInnerVertices) {
    TorsionResult res;
    res.pivot = B;
    const int n = int(f3.rows());
    std::vector<char> inB(n, 0);
    for (int i : B) inB[i] = 1;
    std::vector<int> comp;
    for (int i = 0; i < n; ++i)
        if (!inB[i]) comp.push_back(i);
    if (int(comp.size()) != 3 * nInnerVertices)
        fail(Errc::RankDeficit, "pivot complement does not match 3*N0'");

    res.detF3B = log_det(principal_minor(f3, B));
    if (res.detF3B.zero()) fail(Errc::RankDeficit, "det f3|_B vanished");

    Eigen::MatrixXd minor2(comp.size(), f2.cols());
    for (int i = 0; i < int(comp.size()); ++i) minor2.row(i) = f2.row(comp[i]);
    res.detF2Bbar = log_det(minor2);
    if (nInnerVertices > 0 && res.detF2Bbar.zero())
        fail(Errc::SingularF2Minor, "det f2|_Bbar vanished");

    LogSigned sign = (nInnerVertices % 2 == 0) ? LogSigned::one() : LogSigned::one().negate();
    res.tau = sign * res.detF2Bbar.pow(2) / res.detF3B;
    res.acyclic = true;
    return res;
}

// ---------------------------------------------------------------------------

struct InvariantComputation {
    bool acyclic = false;
    std::string diagnostics;
    LogSigned I;
    TorsionResult tors;
    LogSigned prodInnerL2;   // product of squared inner edge lengths
    LogSigned prodNeg6V;     // product of (-6V) over non-chain tetrahedra
    LogSigned sixVabcd;      // 6V of the chain coordinates, label order
    int nInnerEdges = 0;
    int nInnerVertices = 0;
    ChainKind kind = ChainKind::SameOrientation;

    double value() const { return I.value(); }
};

/// Full invariant pipeline on a geometrized triangulation. Non-acyclic
/// complexes produce a structured report instead of an exception.
inline InvariantComputation invariant(const Triangulation& tri, const DistinguishedChain& chain,
                                      const Geometrization& geo) {
    auto cc = class_coords(tri, geo);
    auto tg = tet_geometries(tri, cc);
    for (int t = 0; t < tri.tetCount(); ++t)
        if (tg[t].degenerate())
            fail(Errc::DegenerateTet, "degenerate tetrahedron in geometrization");

    ChainInfo info = validate_chain(tri, chain);
    ComplexIndex ix = ComplexIndex::make(tri, info);

    InvariantComputation out;
    out.kind = info.kind;
    out.nInnerEdges = ix.nInnerEdges();
    out.nInnerVertices = ix.nInnerVertices();

    Eigen::MatrixXd F3 = build_F3(tri, tg);
    Eigen::MatrixXd f3 = build_f3(F3, ix.innerEdges);
    Eigen::MatrixXd f2 = build_f2(tri, cc, ix);

    int targetRank = ix.nInnerEdges() - 3 * ix.nInnerVertices();
    try {
        if (targetRank < 0) fail(Errc::RankDeficit, "more vertex than edge freedoms");
        auto B = select_pivot_set(f3, targetRank);
        out.tors = torsion(f2, f3, B, ix.nInnerVertices());
        out.tors.rankEstimate = symmetric_rank_estimate(f3);
    } catch (const Error& e) {
        if (e.code() != Errc::RankDeficit && e.code() != Errc::SingularF2Minor) throw;
        out.acyclic = false;
        out.diagnostics = e.what();
        out.tors.rankEstimate = symmetric_rank_estimate(f3);
        return out;
    }

    out.prodInnerL2 = LogSigned::one();
    for (int e : ix.innerEdges) out.prodInnerL2 = out.prodInnerL2 * LogSigned::from(edge_length(cc, tri, e)).pow(2);
    out.prodNeg6V = LogSigned::one();
    for (int t = 0; t < tri.tetCount(); ++t) {
        if (t == chain.tetA || t == chain.tetB) continue;
        out.prodNeg6V = out.prodNeg6V * LogSigned::from(-tg[t].sixV);
    }
    out.sixVabcd = LogSigned::from(chain_six_volume(cc, info));
    out.I = out.tors.tau * out.prodInnerL2 / out.prodNeg6V * out.sixVabcd.pow(4);
    out.acyclic = true;
    return out;
}

}  // namespace reggetor

#endif  // REGGETOR_TORSION_HPP

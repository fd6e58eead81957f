#ifndef REGGETOR_CATALOG_HPP
#define REGGETOR_CATALOG_HPP

#include <complex>
#include <numeric>

#include "reggetor/framing.hpp"

namespace reggetor {

struct CatalogSpace {
    Triangulation tri;
    DistinguishedChain chain;
    Geometrization geo;      // documented default coordinates
    std::string id;
    int baseFraming2 = 0;    // twice the calibrated framing label of the bare build
};

// ---------------------------------------------------------------------------
// Unknot in S^3: a six-tetrahedron filled torus thickening the AB/CD chain,
// closed up by the two-tetrahedron AD/BC chain. Ten of the twelve edge
// classes belong to the chain; the two inner ones never meet in a
// tetrahedron, so the bare build is not acyclic. Its calibrated framing
// label is 1/2: the first half-revolution lands on I = 1.
inline CatalogSpace s3_unknot() {
    enum : int { A = 0, B = 1, C = 2, D = 3 };
    std::vector<Tetra> tets = {
        {A, B, C, D},  // 0: chain-of-AB/CD first tet
        {A, B, C, D},  // 1: its partner
        {B, A, C, D},  // 2: thickens AB, opposite orientation
        {A, B, C, D},  // 3: closes the AB pillow
        {B, A, C, D},  // 4: thickens CD
        {A, B, C, D},  // 5: closes the CD pillow
        {B, A, C, D},  // 6: distinguished chain, tetA
        {B, A, C, D},  // 7: distinguished chain, tetB
    };
    std::vector<GluingSpec> gl;
    auto g = [&](int t1, int t2, std::array<int, 3> labels) {
        gl.push_back(glue_by_labels(tets, t1, t2, labels));
    };
    g(2, 0, {A, B, C});
    g(2, 1, {A, B, D});
    g(3, 2, {B, C, D});
    g(3, 2, {A, C, D});
    g(4, 0, {B, C, D});
    g(4, 1, {A, C, D});
    g(5, 4, {A, B, C});
    g(5, 4, {A, B, D});
    g(6, 0, {A, B, D});
    g(6, 5, {A, C, D});
    g(6, 1, {A, B, C});
    g(6, 5, {B, C, D});
    g(7, 3, {A, B, D});
    g(7, 0, {A, C, D});
    g(7, 3, {A, B, C});
    g(7, 1, {B, C, D});

    CatalogSpace sp{Triangulation(tets, gl), DistinguishedChain{6, 7, {A, B, C, D}},
                    Geometrization{}, "s3-unknot", 1};
    sp.geo.coords[A] = Vec3(0, 0, 1);
    sp.geo.coords[B] = Vec3(1, 0, 0);
    sp.geo.coords[C] = Vec3(0, 1, 0);
    sp.geo.coords[D] = Vec3(0, 0, -1);
    return sp;
}

// ---------------------------------------------------------------------------
// Lens space L(p,q) with the n-th unknot: the 2p-gonal bipyramid coned from
// its center A, both apexes carrying the class D, upper surface glued to the
// lower one twisted by q steps. 4p tetrahedra, N1 = 4p+4 edge classes, all
// four vertex classes on the chain.

struct LensSpec {
    int p = 0, q = 0, n = 0;

    void validate() const {
        if (p < 2 || q <= 0 || q >= p || std::gcd(p, q) != 1)
            fail(Errc::InvalidSpec, "lens parameters require 0 < q < p coprime, p >= 2");
        if (n <= 0 || n >= p) fail(Errc::InvalidSpec, "unknot class requires 1 <= n <= p-1");
    }
};

inline CatalogSpace lens_space(int p, int q, int n) {
    LensSpec{p, q, n}.validate();
    const int A = 0, Dup = 1, Ddn = 2;
    auto Bl = [&](int i) { return 10 + ((i % p) + p) % p; };
    auto Cl = [&](int i) { return 10 + p + ((i % p) + p) % p; };

    // tets: U_i, U'_i, L_i, L'_i at indices i, p+i, 2p+i, 3p+i
    std::vector<Tetra> tets(4 * p);
    for (int i = 0; i < p; ++i) {
        tets[i] = {Dup, A, Bl(i), Cl(i)};
        tets[p + i] = {Dup, A, Cl(i), Bl(i + 1)};
        tets[2 * p + i] = {Ddn, A, Cl(i), Bl(i)};
        tets[3 * p + i] = {Ddn, A, Bl(i + 1), Cl(i)};
    }
    std::vector<GluingSpec> gl;
    for (int i = 0; i < p; ++i) {
        int U = i, Us = p + i, L = 2 * p + i, Ls = 3 * p + i;
        gl.push_back(glue_by_labels(tets, U, Us, {A, Dup, Cl(i)}));
        gl.push_back(glue_by_labels(tets, Us, (i + 1) % p, {A, Dup, Bl(i + 1)}));
        gl.push_back(glue_by_labels(tets, L, Ls, {A, Ddn, Cl(i)}));
        gl.push_back(glue_by_labels(tets, Ls, 2 * p + (i + 1) % p, {A, Ddn, Bl(i + 1)}));
        gl.push_back(glue_by_labels(tets, U, L, {A, Bl(i), Cl(i)}));
        gl.push_back(glue_by_labels(tets, Us, Ls, {A, Cl(i), Bl(i + 1)}));
        // the lens twist: upper boundary onto the lower one rotated by q
        gl.push_back(glue_matching(tets, U, {Dup, Bl(i), Cl(i)}, 2 * p + (i + q) % p,
                                   {Ddn, Bl(i + q), Cl(i + q)}));
        gl.push_back(glue_matching(tets, Us, {Dup, Cl(i), Bl(i + 1)}, 3 * p + (i + q) % p,
                                   {Ddn, Cl(i + q), Bl(i + q + 1)}));
    }

    CatalogSpace sp{Triangulation(tets, gl), DistinguishedChain{0, n, {A, 10, 10 + p, Dup}},
                    Geometrization{}, "lens:" + std::to_string(p) + "," + std::to_string(q) +
                                          "," + std::to_string(n),
                    0};
    sp.geo.coords[A] = Vec3(0, 0, 1);
    sp.geo.coords[Dup] = Vec3(0, 0, -1);
    sp.geo.coords[10] = Vec3(1, 0, 0);  // class B
    sp.geo.coords[10 + p] = Vec3(std::cos(M_PI / p), std::sin(M_PI / p), 0.0);  // class C
    return sp;
}

// ---------------------------------------------------------------------------
// Number theory of the lens closed forms

/// The unique q*_n in 1..p-1 with q q*_n == n (mod p).
inline int q_star(int p, int q, int n) {
    LensSpec{p, q, n}.validate();
    for (int x = 1; x < p; ++x)
        if ((long long)q * x % p == n % p) return x;
    fail(Errc::InvalidSpec, "no modular solution; parameters not coprime");
}

/// Direct combinatorial count r_n . c_p: the number of indices i in 1..n-1
/// hit by kq mod p for k = 1..q*_n-1.
inline long long nu_direct(int p, int q, int n) {
    int qs = q_star(p, q, n);
    std::vector<char> hit(p, 0);
    for (int k = 1; k <= qs - 1; ++k) hit[(long long)k * q % p] = 1;
    long long cnt = 0;
    for (int i = 1; i <= n - 1; ++i) cnt += hit[i];
    return cnt;
}

/// The discrete-Fourier evaluation, with the k = 0 term resolved as the
/// product of the two difference-quotient limits.
inline long long nu_fourier(int p, int q, int n) {
    int qs = q_star(p, q, n);
    std::complex<double> sum((double)(n - 1) * (qs - 1), 0.0);
    const double w = 2.0 * M_PI / p;
    for (int k = 1; k < p; ++k) {
        auto zeta = [&](long long e) {
            double t = w * double(((e % p) + p) % p);
            return std::complex<double>(std::cos(t), std::sin(t));
        };
        std::complex<double> one(1.0, 0.0);
        std::complex<double> f1 = (one - zeta((long long)k * (1 - n))) / (one - zeta(k));
        std::complex<double> f2 =
            (one - zeta((long long)k * q * (qs - 1))) / (one - zeta(-(long long)k * q));
        sum += f1 * f2;
    }
    sum /= double(p);
    long long r = std::llround(sum.real());
    if (std::abs(sum.real() - double(r)) > 1e-6 || std::abs(sum.imag()) > 1e-6)
        fail(Errc::OracleMismatch, "Fourier sum did not converge to an integer");
    return r;
}

/// nu_n evaluated both ways; the two routes must agree exactly.
inline long long nu_n(int p, int q, int n) {
    long long a = nu_direct(p, q, n), b = nu_fourier(p, q, n);
    if (a != b) fail(Errc::OracleMismatch, "Fourier and direct nu_n disagree");
    return a;
}

inline long long lens_s(int p, int q, int n) { return (long long)n * q_star(p, q, n) - (long long)p * nu_n(p, q, n); }
inline long long lens_t(int p, int q, int n) { return p - lens_s(p, q, n); }

/// Framing recurrences: s and t after h half-revolutions (r = h/2).
inline long long lens_s_h(int p, int q, int n, int h) {
    long long s = lens_s(p, q, n);
    if (h % 2 == 0) {
        int m = h / 2;
        long long v = s - (long long)m * p;
        return (m % 2 == 0) ? v : -v;
    }
    int m = (h - 1) / 2;
    long long v = s - (long long)m * p - p;
    return ((m + 1) % 2 == 0) ? v : -v;
}

inline long long lens_t_h(int p, int q, int n, int h) {
    int m = h / 2;  // t changes only at even half-revolutions
    return lens_t(p, q, n) + (long long)m * p;
}

/// Exact invariant of the n-th unknot in L(p,q) at framing offset r = r2/2.
inline Rational closed_form_lens(int p, int q, int n, int r2) {
    if (r2 < 0) fail(Errc::InvalidSpec, "negative framing offsets are not calibrated");
    long long s = lens_s_h(p, q, n, r2);
    long long t = lens_t_h(p, q, n, r2);
    if (s == 0 || t == 0) return Rational::infinity();
    long long den = s * s * t * t * (long long)p * p;
    return (r2 % 2 == 0) ? Rational(-1, den) : Rational(1, den);
}

/// Exact invariant of the unknot in S^3 at absolute framing r = r2/2:
/// 1/m^4 at integers, -1/(m^2 (m+1)^2) at half-integers.
inline Rational closed_form_s3(int r2) {
    if (r2 % 2 == 0) {
        long long m = r2 / 2;
        if (m == 0) return Rational::infinity();
        return Rational(1, m * m * m * m);
    }
    long long m = (r2 - 1) / 2;
    if (m == 0 || m == -1) return Rational::infinity();
    return Rational(-1, m * m * (m + 1) * (m + 1));
}

// ---------------------------------------------------------------------------
// Exact integer matrices and determinants (the independent oracles)

using IMat = std::vector<std::vector<long long>>;

/// Fraction-free Bareiss elimination; exact for integer matrices whose
/// minors fit in 128-bit intermediates.
inline long long bareiss_det(IMat a) {
    const int n = int(a.size());
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    __int128 det = sign * m[n - 1][n - 1];
    return (long long)det;
}

/// Classical adjugate (transpose of the cofactor matrix), exact.
inline IMat adjugate(const IMat& a) {
    const int n = int(a.size());
    IMat out(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IMat minor(n - 1, std::vector<long long>(n - 1));
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor[rr][cc++] = a[r][c];
                }
                ++rr;
            }
            long long d = bareiss_det(minor);
            out[i][j] = ((i + j) % 2 == 0) ? d : -d;
        }
    return out;
}

/// S1 = (1 - E^q)(1 - E) and S2 = (1 - E^q)(1 - E^-1) with E the cyclic
/// shift; assembled additively so small p collapses terms correctly.
inline IMat lens_S1(int p, int q) {
    IMat m(p, std::vector<long long>(p, 0));
    for (int i = 0; i < p; ++i) {
        m[i][i] += 1;
        m[i][((i - 1) % p + p) % p] -= 1;
        m[i][((i - q) % p + p) % p] -= 1;
        m[i][((i - q - 1) % p + p) % p] += 1;
    }
    return m;
}

inline IMat lens_S2(int p, int q) {
    IMat m(p, std::vector<long long>(p, 0));
    for (int i = 0; i < p; ++i) {
        m[i][i] += 1;
        m[i][(i + 1) % p] -= 1;
        m[i][((i - q) % p + p) % p] -= 1;
        m[i][((i - q + 1) % p + p) % p] += 1;
    }
    return m;
}

/// Tri-diagonal framing extension of an S block after h half-revolutions;
/// `line` 1 extends S1 (updates at odd h, eps = +1), 2 extends S2 (even h,
/// eps = -1).
inline IMat lens_S_ext(int p, int q, int h, int line) {
    IMat base = (line == 1) ? lens_S1(p, q) : lens_S2(p, q);
    int a = (line == 1) ? (h + 1) / 2 : h / 2;  // number of turns on this line
    if (a == 0) return base;
    int n = p + a;
    IMat m(n, std::vector<long long>(n, 0));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m[i][j] = base[i][j];
    long long eps = (line == 1) ? 1 : -1;
    m[p - 1][p - 1] -= eps;
    for (int k = p - 1; k < n - 1; ++k) {
        m[k][k + 1] = eps;
        m[k + 1][k] = eps;
        if (k + 1 < n - 1)
            m[k + 1][k + 1] = -2 * eps;
        else
            m[k + 1][k + 1] = -eps;
    }
    return m;
}

inline IMat remove_row_col(const IMat& a, int r1, int r2) {
    const int n = int(a.size());
    IMat out;
    for (int i = 0; i < n; ++i) {
        if (i == r1 || i == r2) continue;
        std::vector<long long> row;
        for (int j = 0; j < n; ++j) {
            if (j == r1 || j == r2) continue;
            row.push_back(a[i][j]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

/// det of the reduced S block (rows/cols n and the last removed) after h
/// half-revolutions, as an exact integer; which = 1 gives s_n^(h),
/// which = 2 gives t_n^(h).
inline long long brute_det_oracle(int p, int q, int n, int h, int which) {
    LensSpec{p, q, n}.validate();
    IMat m = lens_S_ext(p, q, h, which);
    return bareiss_det(remove_row_col(m, n - 1, int(m.size()) - 1));
}

// ---------------------------------------------------------------------------

inline CatalogSpace catalog_by_id(const std::string& id) {
    if (id == "s3-unknot") return s3_unknot();
    if (id.rfind("lens:", 0) == 0) {
        int p = 0, q = 0, n = 0;
        if (std::sscanf(id.c_str(), "lens:%d,%d,%d", &p, &q, &n) != 3)
            fail(Errc::ParseError, "expected lens:p,q,n");
        return lens_space(p, q, n);
    }
    fail(Errc::NotFound, "unknown catalog id: " + id);
}

/// Invariant of a catalog space at absolute framing r = r2/2, produced by
/// forward half-revolutions from the calibrated base.
inline InvariantComputation invariant_with_framing(const CatalogSpace& sp, int r2,
                                                   FramingState* stateOut = nullptr) {
    int steps = r2 - sp.baseFraming2;
    if (steps < 0)
        fail(Errc::InvalidSpec, "framing below the calibrated base of " + sp.id);
    FramedSpace fr = apply_half_revolutions(sp.tri, sp.chain, steps, stateOut);
    return invariant(fr.tri, fr.chain, sp.geo);
}

}  // namespace reggetor

#endif  // REGGETOR_CATALOG_HPP

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "reggetor/catalog.hpp"
#include "reggetor/io.hpp"

using namespace reggetor;

TEST_CASE("lens triangulation counts") {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {5, 2}, {7, 1}, {7, 2}, {9, 4}}) {
        CatalogSpace sp = lens_space(p, q, 1);
        CAPTURE(p, q);
        CHECK(sp.tri.tetCount() == 4 * p);
        CHECK(sp.tri.edgeClassCount() == 4 * p + 4);  // order of G3 is (4p+4)x(4p+4)
        CHECK(sp.tri.vertexClassCount() == 4);
        int degSum = 0;
        for (int e = 0; e < sp.tri.edgeClassCount(); ++e) degSum += sp.tri.edgeDegree(e);
        CHECK(degSum == 6 * sp.tri.tetCount());
    }
}

TEST_CASE("lens p=7 has 32 edge classes") {
    CatalogSpace sp = lens_space(7, 1, 1);
    CHECK(sp.tri.edgeClassCount() == 32);
}

TEST_CASE("s3 unknot catalog counts") {
    CatalogSpace sp = s3_unknot();
    CHECK(sp.tri.tetCount() == 8);
    CHECK(sp.tri.vertexClassCount() == 4);
    // V - E + F - T = 0 forces E = V + T = 12 for the six-plus-chain build
    CHECK(sp.tri.edgeClassCount() == 12);
    ChainInfo info = validate_chain(sp.tri, sp.chain);
    CHECK(info.kind == ChainKind::SameOrientation);
    CHECK(info.boundaryEdges.size() == 10);
    CHECK(inner_edges(sp.tri, info).size() == 2);
    CHECK(inner_vertices(sp.tri, info).empty());
}

TEST_CASE("lens chain and inner counts") {
    for (auto [p, q, n] : std::vector<std::array<int, 3>>{{7, 1, 1}, {7, 2, 3}, {5, 2, 2}}) {
        auto [pp, qq, nn] = std::array<int, 3>{p, q, n};
        CatalogSpace sp = lens_space(pp, qq, nn);
        ChainInfo info = validate_chain(sp.tri, sp.chain);
        CHECK(info.kind == ChainKind::SameOrientation);
        CHECK(info.boundaryEdges.size() == 10);
        CHECK(int(inner_edges(sp.tri, info).size()) == 4 * pp - 6);
        CHECK(inner_vertices(sp.tri, info).empty());
    }
}

TEST_CASE("edge star of the axis is one 2p-cycle") {
    CatalogSpace sp = lens_space(5, 2, 1);
    ChainInfo info = validate_chain(sp.tri, sp.chain);
    auto star = sp.tri.edgeStar(info.edgeAD);
    CHECK(int(star.size()) == 2 * 5);
    CHECK(sp.tri.edgeDegree(info.edgeAD) == 10);
    // low-degree edge: AB classes have four incidences
    CHECK(sp.tri.edgeDegree(info.edgesOfA[LP_AB]) == 4);
    CHECK(int(sp.tri.edgeStar(info.edgesOfA[LP_AB]).size()) == 4);
}

TEST_CASE("orbit partitions are gluing-order independent") {
    CatalogSpace sp = lens_space(5, 2, 1);
    auto gl = sp.tri.gluings();
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 3; ++trial) {
        std::shuffle(gl.begin(), gl.end(), rng);
        Triangulation shuffled(sp.tri.tets(), gl);
        REQUIRE(shuffled.edgeClassCount() == sp.tri.edgeClassCount());
        for (int t = 0; t < sp.tri.tetCount(); ++t)
            for (int s = 0; s < 6; ++s) {
                // canonical ids are minimal-slot based, so partitions agree slotwise
                int a = sp.tri.edgeClassAt(t, s), b = shuffled.edgeClassAt(t, s);
                CHECK(sp.tri.edgeClass(a).minSlot == shuffled.edgeClass(b).minSlot);
            }
    }
}

TEST_CASE("uncovered face slot is rejected") {
    std::vector<Tetra> tets = {{0, 1, 2, 3}, {0, 1, 2, 3}};
    std::vector<GluingSpec> gl = {glue_by_labels(tets, 0, 1, {0, 1, 2})};
    CHECK_THROWS_MATCHES(Triangulation(tets, gl), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::NotClosed;
                         }));
}

TEST_CASE("single tetrahedron self-gluings violate Convention 1") {
    // gluing two faces of one tetrahedron must merge vertex classes
    std::vector<Tetra> tets = {{0, 1, 2, 3}};
    std::vector<GluingSpec> gl;
    gl.push_back(GluingSpec{{0, 0}, {0, 1}, {0, 2, 3}});  // face 123 -> face 023
    gl.push_back(GluingSpec{{0, 2}, {0, 3}, {0, 1, 2}});  // face 013 -> face 012
    bool degenerate = false;
    try {
        Triangulation t(tets, gl);
    } catch (const Error& e) {
        degenerate = e.code() == Errc::DegenerateTet || e.code() == Errc::OrientationClash;
    }
    CHECK(degenerate);
}

TEST_CASE("chain validation rejects unrelated tetrahedra") {
    CatalogSpace sp = lens_space(7, 1, 2);
    DistinguishedChain bad = sp.chain;
    bad.tetB = 7 + 1;  // an upper-prime tet: no shared BC class with U_0
    CHECK_THROWS_MATCHES(validate_chain(sp.tri, bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::NotAChain;
                         }));
    DistinguishedChain same = sp.chain;
    same.tetB = same.tetA;
    CHECK_THROWS_AS(validate_chain(sp.tri, same), Error);
}

TEST_CASE("triangulation json round trip") {
    CatalogSpace sp = lens_space(5, 3, 2);
    json j = to_json(sp.tri, sp.chain);
    TriangulationFile tf = parse_triangulation(j);
    Triangulation back(tf.tets, tf.gluings);
    REQUIRE(tf.chain.has_value());
    CHECK(back.tetCount() == sp.tri.tetCount());
    CHECK(back.edgeClassCount() == sp.tri.edgeClassCount());
    ChainInfo a = validate_chain(sp.tri, sp.chain);
    ChainInfo b = validate_chain(back, *tf.chain);
    CHECK(a.kind == b.kind);
    CHECK(a.boundaryEdges == b.boundaryEdges);
}

TEST_CASE("vertex links are spheres on catalog spaces") {
    // construction already validates; this re-checks the Euler characteristic
    CatalogSpace sp = lens_space(6, 1, 2);
    for (int v = 0; v < sp.tri.vertexClassCount(); ++v) {
        int FL = int(sp.tri.vertexClass(v).slots.size());
        int VL = 0;
        for (int e = 0; e < sp.tri.edgeClassCount(); ++e) {
            auto ep = sp.tri.edgeClass(e).endpoints;
            if (ep[0] == v || ep[1] == v) ++VL;
        }
        CHECK(VL - (3 * FL) / 2 + FL == 2);
    }
}

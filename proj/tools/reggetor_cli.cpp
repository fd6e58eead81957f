// Command-line front end: compute invariants of catalog spaces or
// triangulation files, run the Pachner fuzz harness, the exact oracle
// suites, and the complex identity checks.
//
// Exit codes: 0 ok, 1 input error, 2 non-acyclic, 3 oracle mismatch.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "reggetor/catalog.hpp"
#include "reggetor/io.hpp"

using namespace reggetor;

namespace {

struct Input {
    Triangulation tri;
    DistinguishedChain chain;
    Geometrization geo;
    json echo;          // canonical serialization for hashing
    bool isCatalog = false;
    int baseFraming2 = 0;
};

int parse_half_integer_twice(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        int num = 0, den = 0;
        if (std::sscanf(s.c_str(), "%d/%d", &num, &den) != 2 || (den != 1 && den != 2))
            fail(Errc::ParseError, "framing must be a half-integer like 3/2 or 1.5");
        return den == 2 ? num : 2 * num;
    }
    double v = std::stod(s);
    double twice = 2.0 * v;
    if (std::abs(twice - std::llround(twice)) > 1e-9)
        fail(Errc::ParseError, "framing must be a half-integer");
    return int(std::llround(twice));
}

Input resolve_input(const std::string& name, std::uint64_t seed) {
    if (name == "s3-unknot" || name.rfind("lens:", 0) == 0) {
        CatalogSpace sp = catalog_by_id(name);
        json echo = to_json(sp.tri, sp.chain);
        echo["catalog"] = sp.id;
        return Input{std::move(sp.tri), sp.chain, sp.geo, echo, true, sp.baseFraming2};
    }
    TriangulationFile tf = load_triangulation(name);
    if (!tf.chain) fail(Errc::InvalidSpec, "input file has no distinguished chain");
    Triangulation tri(tf.tets, tf.gluings);
    validate_chain(tri, *tf.chain);
    Geometrization geo = random_geometrization(tri, seed);
    return Input{std::move(tri), *tf.chain, std::move(geo), to_json(Triangulation(tf.tets, tf.gluings), tf.chain),
                 false, 0};
}

void emit(const json& payload, bool pretty, double wallMs) {
    if (pretty) {
        json j = payload;
        j["wallMs"] = wallMs;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << payload.dump() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euclidean-geometric torsion invariant of framed knots in triangulated 3-manifolds"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string inputName, framingStr;
    std::uint64_t seed = 1;
    int moves = 100, pmax = 12;
    bool pretty = false;
    app.add_flag("--pretty", pretty, "indented output with wall time");
    bool jsonFlag = false;
    app.add_flag("--json", jsonFlag, "compact deterministic output (default)");

    auto* cInv = app.add_subcommand("invariant", "compute the invariant");
    cInv->add_option("input", inputName)->required();
    cInv->add_option("--seed", seed);
    cInv->add_option("--framing", framingStr);

    auto* cFuzz = app.add_subcommand("fuzz", "random relative Pachner moves");
    cFuzz->add_option("input", inputName)->required();
    cFuzz->add_option("--seed", seed);
    cFuzz->add_option("--moves", moves);
    cFuzz->add_option("--framing", framingStr);

    auto* cOra = app.add_subcommand("oracles", "exact lens-space oracle suites");
    cOra->add_option("--pmax", pmax);

    auto* cChk = app.add_subcommand("check", "complex identity residuals");
    cChk->add_option("input", inputName)->required();
    cChk->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);
    auto t0 = std::chrono::steady_clock::now();
    auto wall = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    try {
        if (cInv->parsed()) {
            Input in = resolve_input(inputName, seed);
            InvariantComputation inv;
            std::string framingEcho = "base";
            if (in.isCatalog) {
                int r2 = framingStr.empty() ? in.baseFraming2 : parse_half_integer_twice(framingStr);
                int steps = r2 - in.baseFraming2;
                if (steps < 0) fail(Errc::InvalidSpec, "framing below the calibrated base");
                FramedSpace fr = apply_half_revolutions(in.tri, in.chain, steps);
                inv = invariant(fr.tri, fr.chain, in.geo);
                framingEcho = std::to_string(r2) + "/2";
            } else {
                int r2 = framingStr.empty() ? 0 : parse_half_integer_twice(framingStr);
                if (r2 < 0) fail(Errc::InvalidSpec, "negative framing offsets are not calibrated");
                FramedSpace fr = apply_half_revolutions(in.tri, in.chain, r2);
                inv = invariant(fr.tri, fr.chain, in.geo);
                framingEcho = "+" + std::to_string(r2) + "/2";
            }
            json rep;
            rep["schema"] = "reggetor-report/1";
            rep["command"] = "invariant";
            rep["input"] = inputName;
            rep["report"] = invariant_report(inv, seed, input_hash(in.echo), framingEcho);
            emit(rep, pretty, wall());
            return inv.acyclic ? 0 : 2;
        }

        if (cFuzz->parsed()) {
            Input in = resolve_input(inputName, seed);
            int r2 = framingStr.empty() ? in.baseFraming2 : parse_half_integer_twice(framingStr);
            int steps = in.isCatalog ? r2 - in.baseFraming2 : r2;
            if (steps < 0) fail(Errc::InvalidSpec, "framing below the calibrated base");
            FramedSpace fr = apply_half_revolutions(in.tri, in.chain, steps);
            FuzzReport fz = fuzz(fr.tri, fr.chain, in.geo, moves, seed);
            for (const auto& r : fz.records) std::cout << move_record_json(r).dump() << "\n";
            json rep;
            rep["schema"] = "reggetor-report/1";
            rep["command"] = "fuzz";
            rep["input"] = inputName;
            rep["inputHash"] = input_hash(in.echo);
            rep["seed"] = seed;
            rep["applied"] = fz.applied;
            rep["skipped"] = fz.skipped;
            rep["invariantStart"] = fz.invariantStart;
            rep["invariantFinal"] = fz.invariantFinal;
            rep["maxDrift"] = fz.maxDrift;
            rep["maxMinorRatioError"] = fz.maxMinorRatioError;
            emit(rep, pretty, wall());
            return 0;
        }

        if (cOra->parsed()) {
            int checks = 0;
            for (int p = 2; p <= pmax; ++p)
                for (int q = 1; q < p; ++q) {
                    if (std::gcd(p, q) != 1) continue;
                    for (int n = 1; n < p; ++n) {
                        long long nu = nu_n(p, q, n);  // asserts Fourier == direct count
                        long long s = (long long)n * q_star(p, q, n) - (long long)p * nu;
                        if (brute_det_oracle(p, q, n, 0, 1) != s)
                            fail(Errc::OracleMismatch, "det S1~ != s_n");
                        if (brute_det_oracle(p, q, n, 0, 2) != p - s)
                            fail(Errc::OracleMismatch, "det S2~ != t_n");
                        for (int m = 1; m <= 5 && p <= 12; ++m) {
                            if (brute_det_oracle(p, q, n, 2 * m, 1) != lens_s_h(p, q, n, 2 * m))
                                fail(Errc::OracleMismatch, "framing recurrence for s_n");
                            if (brute_det_oracle(p, q, n, 2 * m, 2) != lens_t_h(p, q, n, 2 * m))
                                fail(Errc::OracleMismatch, "framing recurrence for t_n");
                        }
                        ++checks;
                    }
                    if (p <= std::min(pmax, 12)) {
                        for (const IMat& S : {lens_S1(p, q), lens_S2(p, q)}) {
                            IMat adj = adjugate(S);
                            for (const auto& row : adj)
                                for (long long v : row)
                                    if (v != p) fail(Errc::OracleMismatch, "adjugate entry != p");
                        }
                        ++checks;
                    }
                }
            json rep;
            rep["schema"] = "reggetor-report/1";
            rep["command"] = "oracles";
            rep["pmax"] = pmax;
            rep["checks"] = checks;
            rep["status"] = "ok";
            emit(rep, pretty, wall());
            return 0;
        }

        if (cChk->parsed()) {
            Input in = resolve_input(inputName, seed);
            Geometrization geo =
                in.isCatalog ? random_geometrization(in.tri, seed) : in.geo;
            auto cc = class_coords(in.tri, geo);
            auto tg = tet_geometries(in.tri, cc);
            ChainInfo info = validate_chain(in.tri, in.chain);
            ComplexIndex ix = ComplexIndex::make(in.tri, info);
            auto F3 = build_F3(in.tri, tg);
            auto f3 = build_f3(F3, ix.innerEdges);
            auto f2 = build_f2(in.tri, cc, ix);
            auto f4 = build_f4(in.tri, cc, ix);
            double sym = (f3 - f3.transpose()).cwiseAbs().maxCoeff();
            double cmplx32 = ix.nInnerVertices() ? (f3 * f2).cwiseAbs().maxCoeff() : 0.0;
            double cmplx43 = ix.nInnerVertices() ? (f4 * f3).cwiseAbs().maxCoeff() : 0.0;
            double antisym =
                ix.nInnerVertices() ? (f4 + f2.transpose()).cwiseAbs().maxCoeff() : 0.0;
            double maxDeficit = 0;
            for (int e = 0; e < in.tri.edgeClassCount(); ++e)
                maxDeficit = std::max(maxDeficit, std::abs(deficit_angle(in.tri, tg, e)));
            json rep;
            rep["schema"] = "reggetor-report/1";
            rep["command"] = "check";
            rep["input"] = inputName;
            rep["inputHash"] = input_hash(in.echo);
            rep["seed"] = seed;
            rep["f3SymmetryResidual"] = sym;
            rep["f3f2Residual"] = cmplx32;
            rep["f4f3Residual"] = cmplx43;
            rep["f4PlusF2TResidual"] = antisym;
            rep["maxDeficitAngle"] = maxDeficit;
            emit(rep, pretty, wall());
            return 0;
        }
    } catch (const Error& e) {
        json err;
        err["error"] = errc_name(e.code());
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        if (e.code() == Errc::NotAcyclic) return 2;
        if (e.code() == Errc::OracleMismatch) return 3;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 1;
}

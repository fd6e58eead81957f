#ifndef REGGETOR_IO_HPP
#define REGGETOR_IO_HPP

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reggetor/pachner.hpp"
#include "reggetor/torsion.hpp"

namespace reggetor {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Triangulation file schema:
// { "tets": [[v,v,v,v],...],
//   "gluings": [{"from":[tet,face],"to":[tet,face],"map":[i,i,i]},...],
//   "chain": {"tets":[a,b],"labels":{"A":v,"B":v,"C":v,"D":v}} }

struct TriangulationFile {
    std::vector<Tetra> tets;
    std::vector<GluingSpec> gluings;
    std::optional<DistinguishedChain> chain;
};

inline TriangulationFile parse_triangulation(const json& j) {
    TriangulationFile tf;
    try {
        for (const auto& t : j.at("tets")) {
            if (t.size() != 4) fail(Errc::ParseError, "tetrahedron needs 4 vertex labels");
            tf.tets.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()});
        }
        for (const auto& g : j.at("gluings")) {
            GluingSpec gs;
            gs.from = {g.at("from")[0].get<int>(), g.at("from")[1].get<int>()};
            gs.to = {g.at("to")[0].get<int>(), g.at("to")[1].get<int>()};
            auto m = g.at("map");
            if (m.size() != 3) fail(Errc::ParseError, "gluing map needs 3 entries");
            gs.map = {m[0].get<int>(), m[1].get<int>(), m[2].get<int>()};
            tf.gluings.push_back(gs);
        }
        if (j.contains("chain")) {
            DistinguishedChain ch;
            const auto& c = j.at("chain");
            ch.tetA = c.at("tets")[0].get<int>();
            ch.tetB = c.at("tets")[1].get<int>();
            const auto& lbl = c.at("labels");
            ch.labels = {lbl.at("A").get<int>(), lbl.at("B").get<int>(), lbl.at("C").get<int>(),
                         lbl.at("D").get<int>()};
            tf.chain = ch;
        }
    } catch (const json::exception& e) {
        fail(Errc::ParseError, e.what());
    }
    return tf;
}

inline json to_json(const Triangulation& tri, const std::optional<DistinguishedChain>& chain) {
    json j;
    j["tets"] = json::array();
    for (const auto& t : tri.tets()) j["tets"].push_back({t[0], t[1], t[2], t[3]});
    j["gluings"] = json::array();
    for (const auto& g : tri.gluings()) {
        j["gluings"].push_back({{"from", {g.from.tet, g.from.face}},
                                {"to", {g.to.tet, g.to.face}},
                                {"map", {g.map[0], g.map[1], g.map[2]}}});
    }
    if (chain) {
        j["chain"] = {{"tets", {chain->tetA, chain->tetB}},
                      {"labels",
                       {{"A", chain->labels[0]},
                        {"B", chain->labels[1]},
                        {"C", chain->labels[2]},
                        {"D", chain->labels[3]}}}};
    }
    return j;
}

inline TriangulationFile load_triangulation(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::NotFound, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(Errc::ParseError, e.what());
    }
    return parse_triangulation(j);
}

// FNV-1a over the canonical serialization; identifies inputs in reports.
inline std::string input_hash(const json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

// ---------------------------------------------------------------------------
// Reports

inline json log_signed_json(const LogSigned& v) {
    return {{"sign", v.sign}, {"log10", v.sign == 0 ? 0.0 : v.logmag / std::log(10.0)}};
}

inline json invariant_report(const InvariantComputation& inv, std::uint64_t seed,
                             const std::string& hash, const std::string& framing) {
    json j;
    j["acyclic"] = inv.acyclic;
    j["innerEdges"] = inv.nInnerEdges;
    j["innerVertices"] = inv.nInnerVertices;
    j["chainKind"] =
        inv.kind == ChainKind::SameOrientation ? "same-orientation" : "opposite-orientation";
    j["rankEstimate"] = inv.tors.rankEstimate;
    j["seed"] = seed;
    j["inputHash"] = hash;
    j["framing"] = framing;
    if (!inv.acyclic) {
        j["invariant"] = nullptr;
        j["diagnostics"] = inv.diagnostics;
        return j;
    }
    j["invariant"] = inv.value();
    j["tau"] = inv.tors.tau.value();
    j["pivotSet"] = inv.tors.pivot;
    j["detF3B"] = log_signed_json(inv.tors.detF3B);
    j["detF2Bbar"] = log_signed_json(inv.tors.detF2Bbar);
    j["prodInnerL2"] = log_signed_json(inv.prodInnerL2);
    j["prodNeg6V"] = log_signed_json(inv.prodNeg6V);
    j["sixVabcd"] = inv.sixVabcd.value();
    return j;
}

inline json move_record_json(const MoveRecord& r) {
    json j;
    j["kind"] = move_kind_name(r.kind);
    j["applied"] = r.applied;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.applied) {
        j["tets"] = {r.tetsBefore, r.tetsAfter};
        j["edges"] = {r.edgesBefore, r.edgesAfter};
        j["invariantBefore"] = r.invariantBefore;
        j["invariantAfter"] = r.invariantAfter;
        if (r.newEdgeClass >= 0) j["newEdgeClass"] = r.newEdgeClass;
        if (r.newVertexLabel >= 0) j["newVertexLabel"] = r.newVertexLabel;
        if (r.minorRatioError >= 0) j["minorRatioError"] = r.minorRatioError;
    }
    return j;
}

}  // namespace reggetor

#endif  // REGGETOR_IO_HPP

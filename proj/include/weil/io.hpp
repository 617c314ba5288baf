#ifndef WEIL_IO_HPP
#define WEIL_IO_HPP

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "limits.hpp"

namespace weil {

// All documents carry this version tag.
inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

namespace detail {

inline void require_version(const Json& j, const char* what) {
    if (!j.is_object()) fail(errc::syntax_error, std::string(what) + ": expected an object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        fail(errc::syntax_error, std::string(what) + ": missing format_version");
    if (j["format_version"].get<int>() != kFormatVersion)
        fail(errc::syntax_error,
             std::string(what) + ": unsupported format_version " +
                 j["format_version"].dump());
}

} // namespace detail

// ---- algebra presentations -------------------------------------------------

inline Json algebra_to_json(const AlgebraPtr& w, const std::string& name = "") {
    Json j;
    j["format_version"] = kFormatVersion;
    if (!name.empty()) j["name"] = name;
    j["generators"] = w->n_gens();
    j["relations"] = w->relation_strings();
    return j;
}

inline AlgebraPtr algebra_from_json(const Json& j) {
    detail::require_version(j, "algebra document");
    if (!j.contains("generators") || !j["generators"].is_number_unsigned())
        fail(errc::syntax_error, "algebra document: missing generator count");
    if (!j.contains("relations") || !j["relations"].is_array())
        fail(errc::syntax_error, "algebra document: missing relations array");
    std::vector<std::string> rels;
    for (const auto& r : j["relations"]) {
        if (!r.is_string()) fail(errc::syntax_error, "algebra document: relation must be a string");
        rels.push_back(r.get<std::string>());
    }
    return WeilAlgebra::create(j["generators"].get<std::size_t>(), rels);
}

// ---- diagram descriptions ---------------------------------------------------

// Nodes are either algebra specs (strings, resolved by the caller) or inline
// presentations; edges give generator images as element strings.
inline WeilDiagram diagram_from_json(
    const Json& j, const std::function<AlgebraPtr(const std::string&)>& resolve) {
    detail::require_version(j, "diagram document");
    if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty())
        fail(errc::syntax_error, "diagram document: missing nodes array");
    if (!j.contains("edges") || !j["edges"].is_array())
        fail(errc::syntax_error, "diagram document: missing edges array");
    WeilDiagram d;
    for (const auto& n : j["nodes"]) {
        if (n.is_string())
            d.nodes.push_back(resolve(n.get<std::string>()));
        else if (n.is_object()) {
            Json inner = n;
            if (!inner.contains("format_version")) inner["format_version"] = kFormatVersion;
            d.nodes.push_back(algebra_from_json(inner));
        } else
            fail(errc::syntax_error, "diagram document: node must be a spec or presentation");
    }
    for (const auto& e : j["edges"]) {
        if (!e.is_object() || !e.contains("src") || !e.contains("dst") ||
            !e.contains("images") || !e["images"].is_array())
            fail(errc::syntax_error,
                 "diagram document: edge needs src, dst and an images array");
        const std::size_t src = e["src"].get<std::size_t>();
        const std::size_t dst = e["dst"].get<std::size_t>();
        if (src >= d.nodes.size() || dst >= d.nodes.size())
            fail(errc::syntax_error, "diagram document: edge endpoint out of range");
        std::vector<std::string> images;
        for (const auto& s : e["images"]) images.push_back(s.get<std::string>());
        d.edges.push_back(
            {src, dst, WeilMorphism::from_strings(d.nodes[src], d.nodes[dst], images)});
    }
    return d;
}

inline Json diagram_to_json(const WeilDiagram& d) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["nodes"] = Json::array();
    for (const auto& n : d.nodes) {
        Json node;
        node["generators"] = n->n_gens();
        node["relations"] = n->relation_strings();
        j["nodes"].push_back(node);
    }
    j["edges"] = Json::array();
    for (const auto& e : d.edges) {
        Json edge;
        edge["src"] = e.src;
        edge["dst"] = e.dst;
        edge["images"] = Json::array();
        for (const auto& img : e.phi.gen_images()) edge["images"].push_back(img.str());
        j["edges"].push_back(edge);
    }
    return j;
}

// ---- chart cones -------------------------------------------------------------

namespace detail {

inline Rat rat_from_json(const Json& v) {
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    fail(errc::syntax_error,
         "expected an integer or a rational string, got " + v.dump());
}

inline std::optional<OpenBox> box_from_json(const Json& node) {
    if (!node.contains("box")) return std::nullopt;
    const Json& b = node["box"];
    if (!b.is_array()) fail(errc::syntax_error, "box must be an array of [lo, hi] pairs");
    OpenBox box;
    for (const auto& iv : b) {
        if (!iv.is_array() || iv.size() != 2)
            fail(errc::syntax_error, "box interval must be a [lo, hi] pair");
        box.intervals.emplace_back(rat_from_json(iv[0]), rat_from_json(iv[1]));
    }
    return box;
}

inline ChartNode chart_node_from_json(const Json& node) {
    if (!node.is_object() || !node.contains("arity"))
        fail(errc::syntax_error, "chart node needs an arity");
    ChartNode out;
    out.arity = node["arity"].get<std::size_t>();
    out.box = box_from_json(node);
    if (out.box && out.box->dim() != out.arity)
        fail(errc::syntax_error, "chart box dimension does not match its arity");
    return out;
}

inline std::vector<std::string> string_list(const Json& v, const char* what) {
    if (!v.is_array()) fail(errc::syntax_error, std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.get<std::string>());
    return out;
}

} // namespace detail

// Schema: { format_version, apex: {arity, box?}, nodes: [{arity, box?}...],
//           edges: [{src, dst, components: [expr...]}...],
//           legs: [[expr...] ...] } with one leg per node.
inline ChartCone chart_cone_from_json(const Json& j) {
    detail::require_version(j, "cone document");
    if (!j.contains("apex") || !j.contains("nodes") || !j.contains("legs"))
        fail(errc::syntax_error, "cone document: needs apex, nodes and legs");
    ChartCone cone;
    cone.apex = detail::chart_node_from_json(j["apex"]);
    for (const auto& n : j["nodes"])
        cone.diagram.nodes.push_back(detail::chart_node_from_json(n));
    if (j.contains("edges"))
        for (const auto& e : j["edges"]) {
            if (!e.is_object() || !e.contains("src") || !e.contains("dst") ||
                !e.contains("components"))
                fail(errc::syntax_error,
                     "cone document: edge needs src, dst and components");
            const std::size_t src = e["src"].get<std::size_t>();
            const std::size_t dst = e["dst"].get<std::size_t>();
            if (src >= cone.diagram.nodes.size() || dst >= cone.diagram.nodes.size())
                fail(errc::syntax_error, "cone document: edge endpoint out of range");
            const auto comps = detail::string_list(e["components"], "edge components");
            if (comps.size() != cone.diagram.nodes[dst].arity)
                fail(errc::syntax_error,
                     "cone document: edge component count does not match its target");
            cone.diagram.edges.push_back(
                {src, dst,
                 SmoothMap::from_strings(comps, cone.diagram.nodes[src].arity,
                                         cone.diagram.nodes[src].box)});
        }
    const Json& legs = j["legs"];
    if (!legs.is_array() || legs.size() != cone.diagram.nodes.size())
        fail(errc::syntax_error, "cone document: needs exactly one leg per node");
    for (std::size_t r = 0; r < legs.size(); ++r) {
        const auto comps = detail::string_list(legs[r], "leg components");
        if (comps.size() != cone.diagram.nodes[r].arity)
            fail(errc::syntax_error,
                 "cone document: leg component count does not match its node");
        cone.legs.push_back(
            SmoothMap::from_strings(comps, cone.apex.arity, cone.apex.box));
    }
    return cone;
}

// ---- law reports ------------------------------------------------------------

inline Json report_to_json(const std::vector<LawReport>& reports) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["results"] = Json::array();
    for (const auto& r : reports) {
        Json e;
        e["law"] = r.law;
        e["paper_ref"] = r.statement;
        e["status"] = r.pass ? "pass" : "fail";
        e["seed"] = r.seed;
        e["trials"] = r.trials;
        e["probes"] = r.probes;
        if (!r.pass) e["counterexample"] = r.counterexample;
        j["results"].push_back(e);
    }
    return j;
}

// ---- sessions ----------------------------------------------------------------

struct SessionDocument {
    struct NamedAlgebra {
        std::string name;
        AlgebraPtr w;
    };
    struct NamedMorphism {
        std::string name;
        std::string source, target;
        std::vector<std::string> images;
    };
    std::vector<NamedAlgebra> algebras;
    std::vector<NamedMorphism> morphisms;
};

inline Json session_to_json(const SessionDocument& s) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["algebras"] = Json::array();
    for (const auto& a : s.algebras) {
        Json e;
        e["name"] = a.name;
        e["generators"] = a.w->n_gens();
        e["relations"] = a.w->relation_strings();
        j["algebras"].push_back(e);
    }
    j["morphisms"] = Json::array();
    for (const auto& m : s.morphisms) {
        Json e;
        e["name"] = m.name;
        e["source"] = m.source;
        e["target"] = m.target;
        e["images"] = m.images;
        j["morphisms"].push_back(e);
    }
    return j;
}

inline SessionDocument session_from_json(const Json& j) {
    detail::require_version(j, "session document");
    SessionDocument s;
    if (j.contains("algebras"))
        for (const auto& e : j["algebras"]) {
            if (!e.is_object() || !e.contains("name"))
                fail(errc::syntax_error, "session document: algebra entry needs a name");
            Json inner = e;
            inner["format_version"] = kFormatVersion;
            s.algebras.push_back({e["name"].get<std::string>(), algebra_from_json(inner)});
        }
    if (j.contains("morphisms"))
        for (const auto& e : j["morphisms"]) {
            if (!e.is_object() || !e.contains("name") || !e.contains("source") ||
                !e.contains("target") || !e.contains("images"))
                fail(errc::syntax_error,
                     "session document: morphism entry needs name, source, target, images");
            SessionDocument::NamedMorphism m;
            m.name = e["name"].get<std::string>();
            m.source = e["source"].get<std::string>();
            m.target = e["target"].get<std::string>();
            for (const auto& s2 : e["images"]) m.images.push_back(s2.get<std::string>());
            s.morphisms.push_back(std::move(m));
        }
    return s;
}

} // namespace weil

#endif

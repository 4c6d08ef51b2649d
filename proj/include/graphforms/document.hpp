#ifndef GRAPHFORMS_DOCUMENT_HPP
#define GRAPHFORMS_DOCUMENT_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphforms/builders.hpp"
#include "graphforms/cover.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/neumann.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

using Json = nlohmann::json;

namespace detail {

/// Format with up to 17 significant digits, enough to reproduce any double
/// exactly on re-parse.
inline std::string number_repr(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

inline void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                    out += buffer;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

inline void dump_value(std::string& out, const Json& j, int depth) {
    const std::string pad(static_cast<size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + "  ";
                append_escaped(out, it.key());
                out += ": ";
                dump_value(out, it.value(), depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump_value(out, j[i], depth + 1);
            }
            out += ']';
            return;
        }
        case Json::value_t::string: append_escaped(out, j.get<std::string>()); return;
        case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned: out += j.dump(); return;
        case Json::value_t::number_float: out += number_repr(j.get<double>()); return;
        default: out += "null"; return;
    }
}

} // namespace detail

/// Serialize a document: sorted object keys, two-space indentation, numbers
/// with 17 significant digits so every value survives a round trip.
inline std::string dump_document(const Json& doc) {
    std::string out;
    detail::dump_value(out, doc, 0);
    out += '\n';
    return out;
}

inline Json parse_document(const std::string& text, const std::string& what = "document") {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(what + ": not a valid document");
    return doc;
}

inline Json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read input file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str(), path);
}

inline void store_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write output file: " + path);
    out << text;
    if (!out.good()) throw ParseError("failed while writing output file: " + path);
}

namespace detail {

inline const Json& require_field(const Json& j, const char* field, const std::string& what) {
    if (!j.is_object()) throw ParseError(what + ": expected an object");
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(what + ": missing field '" + field + "'");
    return *it;
}

inline int as_int(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
    return j.get<int>();
}

inline std::string as_string(const Json& j, const std::string& what) {
    if (!j.is_string()) throw ParseError(what + ": expected a string");
    return j.get<std::string>();
}

inline double as_double(const Json& j, const std::string& what) {
    if (!j.is_number()) throw ParseError(what + ": expected a number");
    return j.get<double>();
}

inline std::vector<int> as_int_list(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected a list");
    std::vector<int> out;
    for (const Json& x : j) out.push_back(as_int(x, what));
    return out;
}

inline Eigen::VectorXd as_vector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected a list of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = as_double(j[i], what);
    return out;
}

inline Json vector_field(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

} // namespace detail

inline Json to_document(const WeightedGraph& g) {
    Json doc;
    doc["type"] = "weighted_graph";
    doc["vertex_count"] = g.vertex_count();
    doc["vertex_measure"] = detail::vector_field(g.vertex_measure());
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back(Json::array({e.tail, e.head, e.conductance}));
    doc["edges"] = edges;
    return doc;
}

inline Json to_document(const BuilderSpec& spec) {
    Json doc;
    doc["type"] = "builder_spec";
    doc["family"] = family_name(spec.family);
    doc["level_or_size"] = spec.level_or_size;
    if (spec.renormalization) doc["renormalization"] = *spec.renormalization;
    if (spec.family == GraphFamily::tree) doc["tree_arity"] = spec.tree_arity;
    if (spec.family == GraphFamily::metric_graph) {
        Json edges = Json::array();
        for (const MetricEdge& e : spec.metric_graph_edges)
            edges.push_back(Json::array({e.tail, e.head, e.resistance}));
        doc["metric_graph_edges"] = edges;
        doc["subdivision"] = spec.subdivision;
    }
    return doc;
}

inline Json to_document(const Cover& cover) {
    Json doc;
    doc["type"] = "cover";
    Json sets = Json::array();
    for (const auto& s : cover.sets) {
        Json one = Json::array();
        for (int v : s) one.push_back(v);
        sets.push_back(one);
    }
    doc["sets"] = sets;
    Json labels = Json::array();
    for (int k = 0; k < cover.size(); ++k) labels.push_back(cover.set_label(k));
    doc["labels"] = labels;
    return doc;
}

inline BuilderSpec builder_spec_from_document(const Json& doc) {
    const std::string what = "builder_spec";
    BuilderSpec spec;
    try {
        spec.family = family_from_name(
            detail::as_string(detail::require_field(doc, "family", what), what));
    } catch (const PreconditionError& e) {
        throw ParseError(what + ": " + e.what());
    }
    spec.level_or_size = detail::as_int(detail::require_field(doc, "level_or_size", what), what);
    if (doc.contains("renormalization"))
        spec.renormalization = detail::as_double(doc["renormalization"], what);
    if (doc.contains("tree_arity")) spec.tree_arity = detail::as_int(doc["tree_arity"], what);
    if (doc.contains("subdivision")) spec.subdivision = detail::as_int(doc["subdivision"], what);
    if (doc.contains("metric_graph_edges")) {
        const Json& edges = doc["metric_graph_edges"];
        if (!edges.is_array()) throw ParseError(what + ": metric_graph_edges must be a list");
        for (const Json& e : edges) {
            if (!e.is_array() || e.size() != 3)
                throw ParseError(what + ": each metric edge is [tail, head, resistance]");
            spec.metric_graph_edges.push_back({detail::as_int(e[0], what),
                                               detail::as_int(e[1], what),
                                               detail::as_double(e[2], what)});
        }
    }
    return spec;
}

/// Accepts either an explicit weighted_graph document or a builder_spec
/// document, distinguished by the "type" field.
inline WeightedGraph graph_from_document(const Json& doc) {
    const std::string what = "graph";
    const std::string type = detail::as_string(detail::require_field(doc, "type", what), what);
    if (type == "builder_spec") return build(builder_spec_from_document(doc));
    if (type != "weighted_graph")
        throw ParseError(what + ": unknown document type '" + type + "'");

    const int n = detail::as_int(detail::require_field(doc, "vertex_count", what), what);
    Eigen::VectorXd measure =
        doc.contains("vertex_measure")
            ? detail::as_vector(doc["vertex_measure"], what + ".vertex_measure")
            : Eigen::VectorXd::Ones(std::max(n, 0));
    const Json& edges = detail::require_field(doc, "edges", what);
    if (!edges.is_array()) throw ParseError(what + ": edges must be a list");
    std::vector<Edge> parsed;
    for (const Json& e : edges) {
        if (!e.is_array() || e.size() != 3)
            throw ParseError(what + ": each edge is [tail, head, conductance]");
        parsed.push_back(
            {detail::as_int(e[0], what), detail::as_int(e[1], what), detail::as_double(e[2], what)});
    }
    return WeightedGraph(n, std::move(parsed), std::move(measure));
}

/// A 1-form document is either {"type": "one_form", "values": [...]} or a
/// bare list of edge values.
inline OneForm form_from_document(const Json& doc, const WeightedGraph& g) {
    const std::string what = "one_form";
    Eigen::VectorXd values;
    if (doc.is_array()) {
        values = detail::as_vector(doc, what);
    } else {
        values = detail::as_vector(detail::require_field(doc, "values", what), what);
    }
    if (values.size() != g.edge_count())
        throw ParseError(what + ": expected one value per edge");
    return values;
}

inline Cover cover_from_document(const Json& doc) {
    const std::string what = "cover";
    Cover cover;
    const Json& sets = detail::require_field(doc, "sets", what);
    if (!sets.is_array()) throw ParseError(what + ": sets must be a list of vertex lists");
    for (const Json& s : sets) cover.sets.push_back(detail::as_int_list(s, what));
    if (doc.contains("labels")) {
        const Json& labels = doc["labels"];
        if (!labels.is_array()) throw ParseError(what + ": labels must be a list");
        for (const Json& l : labels) {
            if (!l.is_string()) throw ParseError(what + ": labels must be strings");
            cover.labels.push_back(l.get<std::string>());
        }
    }
    return cover;
}

inline NeumannData neumann_from_document(const Json& doc) {
    const std::string what = "neumann_data";
    NeumannData data;
    data.boundary = detail::as_int_list(detail::require_field(doc, "boundary", what), what);
    data.fluxes = detail::as_vector(detail::require_field(doc, "fluxes", what), what);
    return data;
}

} // namespace graphforms

#endif

#pragma once

#include "coneoff.hpp"
#include "scalar.hpp"
#include "small_cancellation.hpp"
#include "space.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace hypersc {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "hypersc-report/1";
inline constexpr const char* kVersion = "1.0.0";

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(ErrorCode::malformed, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(ErrorCode::malformed, std::string("invalid JSON: ") + e.what());
    }
}

inline const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(ErrorCode::malformed, std::string("missing field '") + key + "'");
    return j.at(key);
}

inline std::string require_string(const Json& j, const char* what) {
    if (!j.is_string()) throw InputError(ErrorCode::malformed, std::string(what) + " must be a string");
    return j.get<std::string>();
}

struct SpaceDoc {
    std::vector<std::string> vertices;
    std::vector<std::tuple<std::string, std::string, Json>> edges;
};

inline SpaceDoc parse_space_doc(const Json& j) {
    SpaceDoc doc;
    const Json& vs = require(j, "vertices");
    const Json& es = require(j, "edges");
    if (!vs.is_array() || !es.is_array()) throw InputError(ErrorCode::malformed, "vertices and edges must be arrays");
    for (const auto& v : vs) doc.vertices.push_back(require_string(v, "vertex id"));
    for (const auto& e : es) {
        if (!e.is_array() || e.size() != 3) throw InputError(ErrorCode::malformed, "edge must be [u, v, weight]");
        const Json& w = e[2];
        if (!w.is_number() && !w.is_string()) throw InputError(ErrorCode::malformed, "edge weight must be a number or string");
        doc.edges.emplace_back(require_string(e[0], "edge endpoint"), require_string(e[1], "edge endpoint"), w);
    }
    return doc;
}

// Exact arithmetic is chosen when every weight is an integer or a string.
inline bool doc_is_exact(const SpaceDoc& doc) {
    for (const auto& e : doc.edges) {
        const Json& w = std::get<2>(e);
        if (w.is_number_float()) return false;
    }
    return true;
}

inline Rational weight_rational(const Json& w) {
    if (w.is_string()) return parse_rational(w.get<std::string>());
    if (w.is_number_integer()) return Rational(w.get<long long>());
    return ScalarTraits<Rational>::from_double(w.get<double>());
}

inline double weight_double(const Json& w) {
    if (w.is_string()) return parse_rational(w.get<std::string>()).convert_to<double>();
    return w.get<double>();
}

inline FiniteLengthSpace<Rational> space_exact(const SpaceDoc& doc) {
    std::vector<std::tuple<std::string, std::string, Rational>> es;
    for (const auto& [a, b, w] : doc.edges) es.emplace_back(a, b, weight_rational(w));
    return FiniteLengthSpace<Rational>::from_graph(doc.vertices, es);
}

inline FiniteLengthSpace<double> space_double(const SpaceDoc& doc) {
    std::vector<std::tuple<std::string, std::string, double>> es;
    for (const auto& [a, b, w] : doc.edges) es.emplace_back(a, b, weight_double(w));
    return FiniteLengthSpace<double>::from_graph(doc.vertices, es);
}

template <class T>
Subset subset_from_ids(const FiniteLengthSpace<T>& s, const std::vector<std::string>& ids) {
    std::vector<std::size_t> out;
    for (const auto& id : ids) out.push_back(s.index(id));
    if (out.empty()) throw InputError(ErrorCode::invalid_argument, "empty subset");
    return make_subset(std::move(out));
}

inline std::vector<std::string> split_list(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::vector<std::string> subset_ids_from_json(const Json& j) {
    const Json& arr = j.is_array() ? j : require(j, "subset");
    if (!arr.is_array()) throw InputError(ErrorCode::malformed, "subset must be an array");
    std::vector<std::string> ids;
    for (const auto& v : arr) ids.push_back(require_string(v, "subset member"));
    return ids;
}

struct ConeOffDoc {
    FiniteLengthSpace<double> base;
    double rho = 0;
    std::vector<Subset> subsets;
};

inline ConeOffDoc parse_coneoff_doc(const Json& j) {
    ConeOffDoc d;
    d.base = space_double(parse_space_doc(require(j, "base")));
    const Json& rho = require(j, "rho");
    d.rho = weight_double(rho);
    const Json& atts = require(j, "attachments");
    if (!atts.is_array()) throw InputError(ErrorCode::malformed, "attachments must be an array");
    for (const auto& a : atts) d.subsets.push_back(subset_from_ids(d.base, subset_ids_from_json(a)));
    return d;
}

inline LabelledGraph parse_labelled_graph(const Json& j) {
    std::vector<std::string> vs;
    for (const auto& v : require(j, "vertices")) vs.push_back(require_string(v, "vertex id"));
    std::vector<std::tuple<std::string, std::string, std::string>> es;
    const Json& edges = require(j, "edges");
    if (!edges.is_array()) throw InputError(ErrorCode::malformed, "edges must be an array");
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 3) throw InputError(ErrorCode::malformed, "edge must be [u, v, label]");
        es.emplace_back(require_string(e[0], "edge endpoint"), require_string(e[1], "edge endpoint"),
                        require_string(e[2], "edge label"));
    }
    return make_labelled_graph(std::move(vs), es);
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += hex[md[i] >> 4], out += hex[md[i] & 15];
    return out;
}

inline Json num(const Rational& q) { return q.str(); }

inline Json num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

template <class T>
Json num(const Extended<T>& e) {
    if (e.infinite) return "inf";
    return num(e.value);
}

template <class T>
Json ids_json(const FiniteLengthSpace<T>& s, const Subset& y) {
    Json out = Json::array();
    for (std::size_t i : y) out.push_back(s.id(i));
    return out;
}

struct Report {
    std::string command;
    Json inputs = Json::object();
    Json results = Json::object();
    Json certification = Json::object();
    std::vector<std::string> warnings;
    std::string digest_source;  // concatenated input files and arguments
};

inline Json report_json(const Report& r) {
    Json j;
    j["schema"] = kReportSchema;
    j["version"] = kVersion;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    j["inputs_digest"] = sha256_hex(r.digest_source);
    j["results"] = r.results;
    j["certification"] = r.certification;
    j["warnings"] = r.warnings;
    return j;
}

inline void flatten_text(const Json& j, const std::string& prefix, std::ostringstream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

inline std::string render_report(const Report& r, const std::string& format) {
    Json j = report_json(r);
    if (format == "json") return j.dump(2) + "\n";
    std::ostringstream out;
    flatten_text(j, "", out);
    return out.str();
}

}  // namespace hypersc

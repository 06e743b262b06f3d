#pragma once

// JSON input formats and report emission.
//
// chart file:
//   { "label": "E1", "fiber_vars": ["x"], "base_vars": ["t"],
//     "phi": ["x^2"], "f": ["t - x^2"], "expected_codim": 1 }
// atlas file:
//   { "model_vars": ["x"], "base_vars": ["t"], "phi": ["x^2"],
//     "charts": [{"map": ["x"]}, {"map": ["x + 1"]}],
//     "nerve": [[0], [1], [0, 1]] }
//
// Reports are deterministic: ordered keys, no timestamps, exact rationals
// rendered as strings.

#include <fstream>
#include <variant>

#include "json.hpp"

#include "atlas.hpp"

namespace kdr {

using Json = nlohmann::ordered_json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw InputError(std::string("parse error in ") + path + ": " + ex.what());
    }
}

inline std::vector<std::string> string_list(const Json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array())
        throw InputError("missing or non-array field '" + key + "'");
    std::vector<std::string> out;
    for (auto& v : j[key]) out.push_back(v.get<std::string>());
    return out;
}

inline Chart chart_from_json(const Json& j) {
    auto fiber = string_list(j, "fiber_vars");
    auto base = string_list(j, "base_vars");
    auto phi = string_list(j, "phi");
    auto f = string_list(j, "f");
    std::string label = j.value("label", std::string("chart"));
    std::optional<int> codim;
    if (j.contains("expected_codim")) codim = j["expected_codim"].get<int>();
    try {
        return make_chart(fiber, base, phi, f, label, codim);
    } catch (const ParseError& ex) {
        throw InputError(std::string("chart '") + label + "': " + ex.what());
    }
}

inline AtlasSpec atlas_from_json(const Json& j) {
    AtlasSpec spec;
    spec.model_ring = make_ring(string_list(j, "model_vars"));
    spec.base_vars = string_list(j, "base_vars");
    try {
        for (auto& s : string_list(j, "phi")) spec.phi.push_back(parse_poly(spec.model_ring, s));
        if (!j.contains("charts") || !j["charts"].is_array())
            throw InputError("missing 'charts'");
        for (auto& cj : j["charts"]) {
            AtlasChartMap m;
            for (auto& s : string_list(cj, "map"))
                m.images.push_back(parse_poly(spec.model_ring, s));
            if (m.images.size() != spec.model_ring->nvars())
                throw InputError("chart map arity does not match model_vars");
            spec.charts.push_back(std::move(m));
        }
        if (!j.contains("nerve") || !j["nerve"].is_array()) throw InputError("missing 'nerve'");
        for (auto& kj : j["nerve"]) {
            Subset K;
            for (auto& v : kj) K.push_back(v.get<int>());
            std::sort(K.begin(), K.end());
            spec.nerve.insert(K);
        }
        validate_atlas(spec);
    } catch (const ParseError& ex) {
        throw InputError(std::string("atlas: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw InputError(std::string("atlas: ") + ex.what());
    }
    return spec;
}

using SpecVariant = std::variant<Chart, AtlasSpec>;

inline SpecVariant load_spec(const std::string& path) {
    Json j = load_json_file(path);
    if (j.contains("model_vars")) return atlas_from_json(j);
    return chart_from_json(j);
}

// ---- reports --------------------------------------------------------------

class Report {
public:
    Report(std::string command, std::string input) {
        doc_["command"] = std::move(command);
        doc_["input"] = std::move(input);
        doc_["options"] = Json::object();
        doc_["checks"] = Json::array();
        doc_["tables"] = Json::object();
    }

    void option(const std::string& key, const Json& value) { doc_["options"][key] = value; }

    void check(const std::string& name, bool pass, const std::string& detail = "") {
        Json c;
        c["name"] = name;
        c["pass"] = pass;
        if (!detail.empty()) c["detail"] = detail;
        doc_["checks"].push_back(c);
        ++checks_;
        if (!pass) ++failures_;
    }

    Json& table(const std::string& name) { return doc_["tables"][name]; }

    int failures() const { return failures_; }
    int checks() const { return checks_; }

    Json finish() const {
        Json out = doc_;
        out["summary"] = Json{{"checks", checks_}, {"failures", failures_}};
        return out;
    }

    std::string text() const {
        std::ostringstream os;
        os << "== " << doc_["command"].get<std::string>() << " " << doc_["input"].get<std::string>()
           << "\n";
        for (auto& c : doc_["checks"]) {
            os << (c["pass"].get<bool>() ? "[ pass ] " : "[ FAIL ] ") << c["name"].get<std::string>();
            if (c.contains("detail")) os << "  -- " << c["detail"].get<std::string>();
            os << "\n";
        }
        for (auto& [name, tbl] : doc_["tables"].items()) {
            os << "-- " << name << "\n";
            os << tbl.dump(2) << "\n";
        }
        os << "checks: " << checks_ << ", failures: " << failures_ << "\n";
        return os.str();
    }

    void write(const std::string& dir, const std::string& stem) const {
        std::ofstream js(dir + "/" + stem + ".json");
        js << finish().dump(2) << "\n";
        std::ofstream tx(dir + "/" + stem + ".txt");
        tx << text();
    }

private:
    Json doc_;
    int checks_ = 0;
    int failures_ = 0;
};

inline Json hilbert_json(const std::vector<long long>& cumulative) {
    Json j;
    j["cumulative"] = cumulative;
    j["exact"] = exact_degree_dims(cumulative);
    return j;
}

} // namespace kdr

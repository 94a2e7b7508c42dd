/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"

namespace cvsynth {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
    }
}

const json& required(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

UMat parse_matrix(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim * dim)) {
        throw ParseError(where + ": matrix must list " + std::to_string(dim * dim) + " [re, im] pairs");
    }
    UMat m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const json& e = j[static_cast<std::size_t>(r * dim + c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ParseError(where + ": matrix entries must be [re, im] number pairs");
            }
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

json dump_matrix(const UMat& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
    }
    return out;
}

int parse_dim(const json& root) {
    const json& d = required(root, "dim", "gate set");
    if (!d.is_number_integer() || d.get<int>() < 2) throw ParseError("gate set: dim must be an integer >= 2");
    return d.get<int>();
}

std::vector<BasisElement> parse_suffixes(const json& root, int dim) {
    std::vector<BasisElement> out;
    auto it = root.find("suffixes");
    if (it == root.end()) return out;
    if (!it->is_array()) throw ParseError("gate set: suffixes must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
        const json& e = (*it)[k];
        const std::string where = "suffix " + std::to_string(k);
        reject_unknown(e, {"label", "matrix"}, where);
        BasisElement b;
        b.label = required(e, "label", where).get<std::string>();
        b.matrix = parse_matrix(required(e, "matrix", where), dim, "suffix '" + b.label + "'");
        b.vcount_weight = 0;
        if (unitarity_residual(b.matrix) > Tolerances::validation) {
            throw ValidationError("suffix '" + b.label + "' is not unitary");
        }
        out.push_back(std::move(b));
    }
    return out;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("gate set: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

GateSet parse_gateset(const std::string& text) {
    const json root = parse_json(text);
    reject_unknown(root, {"dim", "elements", "suffixes"}, "gate set");
    const int dim = parse_dim(root);
    const json& elements = required(root, "elements", "gate set");
    if (!elements.is_array()) throw ParseError("gate set: elements must be an array");
    std::vector<BasisElement> basis;
    try {
        for (std::size_t k = 0; k < elements.size(); ++k) {
            const json& e = elements[k];
            const std::string where = "element " + std::to_string(k);
            reject_unknown(e, {"label", "inverse", "weight", "matrix"}, where);
            BasisElement b;
            b.label = required(e, "label", where).get<std::string>();
            b.inverse_label = required(e, "inverse", where).get<std::string>();
            b.vcount_weight = e.value("weight", 1);
            b.matrix = parse_matrix(required(e, "matrix", where), dim, "element '" + b.label + "'");
            basis.push_back(std::move(b));
        }
        return GateSet(dim, std::move(basis), parse_suffixes(root, dim));
    } catch (const json::exception& e) {
        throw ParseError(std::string("gate set: ") + e.what());
    }
}

GateSet load_gateset(const std::filesystem::path& path) {
    GateSet gs = parse_gateset(read_file(path));
    gs.metadata["source"] = path.string();
    return gs;
}

std::vector<BasisElement> load_suffixes(const std::filesystem::path& path) {
    const json root = parse_json(read_file(path));
    reject_unknown(root, {"dim", "suffixes"}, "suffix file");
    try {
        auto out = parse_suffixes(root, parse_dim(root));
        if (out.empty()) throw ParseError("suffix file lists no suffixes");
        return out;
    } catch (const json::exception& e) {
        throw ParseError(std::string("suffix file: ") + e.what());
    }
}

std::string dump_gateset(const GateSet& gs) {
    json root;
    root["dim"] = gs.dim();
    root["elements"] = json::array();
    for (const auto& e : gs.basis()) {
        root["elements"].push_back(
            {{"label", e.label}, {"inverse", e.inverse_label}, {"weight", e.vcount_weight}, {"matrix", dump_matrix(e.matrix)}});
    }
    root["suffixes"] = json::array();
    for (const auto& e : gs.suffixes()) {
        root["suffixes"].push_back({{"label", e.label}, {"matrix", dump_matrix(e.matrix)}});
    }
    return root.dump(2) + "\n";
}

}  // namespace cvsynth

namespace cvsynth {

UMat parse_unitary(const std::string& text) {
    const json root = parse_json(text);
    reject_unknown(root, {"dim", "matrix"}, "unitary");
    try {
        const int dim = parse_dim(root);
        UMat m = parse_matrix(required(root, "matrix", "unitary"), dim, "unitary");
        if (unitarity_residual(m) > Tolerances::validation) throw ValidationError("unitary: matrix is not unitary");
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("unitary: ") + e.what());
    }
}

UMat load_unitary(const std::filesystem::path& path) { return parse_unitary(read_file(path)); }

std::string dump_unitary(const UMat& m) {
    json root;
    root["dim"] = m.rows();
    root["matrix"] = dump_matrix(m);
    return root.dump(2) + "\n";
}

}  // namespace cvsynth

#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalg/ainf.hpp"

namespace coalg {

using json = nlohmann::ordered_json;

/// Thrown on malformed structure files; the what() string carries the field
/// path or byte position so errors are diagnosable line by line.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline Rational coeff_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        auto q = parse_rational(j.get<std::string>());
        if (!q) throw ParseError(where + ": malformed rational literal '" + j.get<std::string>() + "'");
        return *q;
    }
    throw ParseError(where + ": coefficient must be an integer or a \"p/q\" string");
}

inline void reject_unknown_fields(const json& j, const std::set<std::string>& allowed,
                                  const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
}

}  // namespace detail

/// Parses a structure description. Schema:
///   name: string, connected: true, generators: [{id, degree}],
///   differential: [{on, terms: [{coeff, word}]}],
///   cooperations: { "<r>": [{on, terms: [{coeff, word}]}] },
///   expected_primitive (optional bool).
/// Words list generator ids; "1" denotes the counit element. Every stored
/// cooperation must satisfy |psi_r(c)| = |c| + r - 2, the differential drops
/// degree by one, and duplicate or unknown ids are rejected.
inline AInfCoalgebra parse_structure_json(const json& doc) {
    detail::reject_unknown_fields(
        doc, {"name", "connected", "generators", "differential", "cooperations", "expected_primitive"},
        "structure");
    AInfCoalgebra A;
    A.name = doc.contains("name") ? doc.at("name").get<std::string>() : "unnamed";
    if (!doc.contains("connected") || !doc.at("connected").is_boolean() ||
        !doc.at("connected").get<bool>())
        throw ParseError("structure: only connected structures are supported (connected: true)");
    if (!doc.contains("generators") || !doc.at("generators").is_array())
        throw ParseError("structure: missing generators array");

    std::vector<Generator> gens;
    for (const auto& g : doc.at("generators")) {
        detail::reject_unknown_fields(g, {"id", "degree"}, "generators");
        if (!g.contains("id") || !g.contains("degree"))
            throw ParseError("generators: each entry needs id and degree");
        const std::string id = g.at("id").get<std::string>();
        const int degree = g.at("degree").get<int>();
        if (id == "1") throw ParseError("generators: '1' is reserved for the counit element");
        if (degree < 1) throw ParseError("generators: '" + id + "' must have degree >= 1");
        gens.push_back({id, degree});
    }
    try {
        A.space = GradedSpace::connected(std::move(gens));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("generators: ") + e.what());
    }

    auto parse_assignment = [&](const json& entry, int r, const std::string& where) {
        detail::reject_unknown_fields(entry, {"on", "terms"}, where);
        if (!entry.contains("on") || !entry.contains("terms"))
            throw ParseError(where + ": each entry needs 'on' and 'terms'");
        const std::string on = entry.at("on").get<std::string>();
        const int g = A.space.index_of(on);
        if (g < 0 || on == "1") throw ParseError(where + ": unknown generator '" + on + "'");
        Element value;
        for (const auto& term : entry.at("terms")) {
            detail::reject_unknown_fields(term, {"coeff", "word"}, where);
            if (!term.contains("coeff") || !term.contains("word"))
                throw ParseError(where + ": each term needs 'coeff' and 'word'");
            const Rational c = detail::coeff_from_json(term.at("coeff"), where);
            if (!term.at("word").is_array() || static_cast<int>(term.at("word").size()) != r)
                throw ParseError(where + ": word length must equal the arity " + std::to_string(r));
            TensorWord w;
            for (const auto& letter : term.at("word")) {
                const int idx = A.space.index_of(letter.get<std::string>());
                if (idx < 0)
                    throw ParseError(where + ": unknown id '" + letter.get<std::string>() +
                                     "' in word");
                w.push_back(idx);
            }
            value.add(w, c);
        }
        // Degree homogeneity.
        const int expect = A.space.degree(g) + r - 2;
        for (const auto& [w, c] : value)
            if (word_degree(A.space, w) != expect)
                throw ParseError(where + ": degree violation on '" + on + "': |" +
                                 show_word(A.space, w) + "| != " + std::to_string(expect));
        if (A.ops[r].count(g)) throw ParseError(where + ": duplicate assignment on '" + on + "'");
        if (!value.is_zero()) A.ops[r][g] = std::move(value);
    };

    if (doc.contains("differential")) {
        for (const auto& entry : doc.at("differential")) parse_assignment(entry, 1, "differential");
    }
    if (doc.contains("cooperations")) {
        if (!doc.at("cooperations").is_object())
            throw ParseError("cooperations: must map arity strings to assignment lists");
        for (const auto& [key, list] : doc.at("cooperations").items()) {
            int r = 0;
            try {
                r = std::stoi(key);
            } catch (...) {
                throw ParseError("cooperations: bad arity key '" + key + "'");
            }
            if (r < 2) throw ParseError("cooperations: arity keys start at 2");
            for (const auto& entry : list) parse_assignment(entry, r, "cooperations[" + key + "]");
            A.max_arity = std::max(A.max_arity, r);
        }
    }
    A.validate();
    return A;
}

inline AInfCoalgebra parse_structure_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax: ") + e.what());
    }
    return parse_structure_json(doc);
}

inline AInfCoalgebra parse_structure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open structure file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_structure_text(ss.str());
}

/// Canonical serialization; parse(serialize(A)) reproduces A.
inline json serialize_structure(const AInfCoalgebra& A) {
    json doc;
    doc["name"] = A.name;
    doc["connected"] = true;
    json gens = json::array();
    for (int g = 0; g < A.space.size(); ++g) {
        if (g == A.space.counit()) continue;
        gens.push_back({{"id", A.space.gen(g).id}, {"degree", A.space.degree(g)}});
    }
    doc["generators"] = std::move(gens);
    auto dump_table = [&](int r) {
        json list = json::array();
        auto itr = A.ops.find(r);
        if (itr == A.ops.end()) return list;
        for (const auto& [g, value] : itr->second) {
            json terms = json::array();
            for (const auto& [w, c] : value) {
                json word = json::array();
                for (int idx : w) word.push_back(A.space.gen(idx).id);
                json term;
                term["coeff"] = (denominator(c) == 1) ? json(static_cast<long long>(numerator(c)))
                                                      : json(to_string(c));
                term["word"] = std::move(word);
                terms.push_back(std::move(term));
            }
            list.push_back({{"on", A.space.gen(g).id}, {"terms", std::move(terms)}});
        }
        return list;
    };
    json diff = dump_table(1);
    if (!diff.empty()) doc["differential"] = std::move(diff);
    json coops = json::object();
    for (const auto& [r, table] : A.ops) {
        if (r < 2 || table.empty()) continue;
        coops[std::to_string(r)] = dump_table(r);
    }
    doc["cooperations"] = std::move(coops);
    return doc;
}

// ---------------------------------------------------------------------------
// Built-in structures
// ---------------------------------------------------------------------------

/// Three degree-2 classes and one degree-5 class; the arity-3 cooperation
/// sends the top class to x (x) y (x) z.
inline AInfCoalgebra builtin_example1() {
    AInfCoalgebra A;
    A.name = "example1";
    A.space = GradedSpace::connected({{"x", 2}, {"y", 2}, {"z", 2}, {"w", 5}});
    A.max_arity = 3;
    const int one = 0;
    for (int g = 1; g <= 4; ++g) {
        Element d2;
        d2.add(TensorWord{one, g}, 1);
        d2.add(TensorWord{g, one}, 1);
        A.ops[2][g] = d2;
    }
    A.ops[3][4] = Element::single(TensorWord{1, 2, 3});
    A.validate();
    return A;
}

/// The same graded space with the primitive coproduct only (all higher
/// cooperations zero).
inline AInfCoalgebra builtin_example2() {
    AInfCoalgebra A;
    A.name = "example2";
    A.space = GradedSpace::connected({{"x", 2}, {"y", 2}, {"z", 2}, {"w", 5}});
    A.max_arity = 2;
    const int one = 0;
    for (int g = 1; g <= 4; ++g) {
        Element d2;
        d2.add(TensorWord{one, g}, 1);
        d2.add(TensorWord{g, one}, 1);
        A.ops[2][g] = d2;
    }
    A.validate();
    return A;
}

inline std::optional<AInfCoalgebra> builtin_structure(const std::string& name) {
    if (name == "example1") return builtin_example1();
    if (name == "example2") return builtin_example2();
    return std::nullopt;
}

/// Loads a named built-in or a structure file path.
inline AInfCoalgebra load_structure(const std::string& name_or_path) {
    if (auto b = builtin_structure(name_or_path)) return *b;
    return parse_structure_file(name_or_path);
}

}  // namespace coalg

#pragma once

// Workspace documents (lattice, s-map, observable JSON; experiment and time
// series CSV), their serialization, and report rendering.

#include "omlprob/causality.hpp"
#include "omlprob/error.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/observable.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/smap.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <tuple>
#include <variant>
#include <vector>

namespace omlprob::io {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

enum class DocumentKind { Lattice, SMap, Observable, Experiment, TimeSeries };

inline std::string_view to_string(DocumentKind k) {
    switch (k) {
        case DocumentKind::Lattice: return "lattice";
        case DocumentKind::SMap: return "smap";
        case DocumentKind::Observable: return "observable";
        case DocumentKind::Experiment: return "experiment";
        case DocumentKind::TimeSeries: return "timeseries";
    }
    return "";
}

/// Explicit tables by name: `leq[i][j]` means elements[i] <= elements[j].
struct ExplicitLattice {
    std::vector<std::string> elements;
    std::vector<std::vector<bool>> leq;
    std::map<std::string, std::string> ortho;

    friend bool operator==(const ExplicitLattice&, const ExplicitLattice&) = default;
};

struct LatticeDocument {
    std::variant<ExplicitLattice, HorizontalSumSpec> form;

    bool is_horizontal_sum() const { return std::holds_alternative<HorizontalSumSpec>(form); }
};

inline bool operator==(const LatticeDocument& a, const LatticeDocument& b) { return a.form == b.form; }

using NamedTable = std::map<std::string, std::map<std::string, Rational>>;

struct SMapDocument {
    std::string lattice;  // reference to a lattice file, may be empty
    std::optional<NamedTable> atom_table;
    std::map<std::string, Rational> marginal;
    std::optional<NamedTable> full_table;

    friend bool operator==(const SMapDocument&, const SMapDocument&) = default;
};

struct ObservableDocument {
    std::string lattice;
    std::vector<std::pair<Rational, std::string>> support;

    friend bool operator==(const ObservableDocument&, const ObservableDocument&) = default;
};

struct ExperimentDocument {
    // rows in file order
    std::vector<std::tuple<std::string, std::string, std::uint64_t>> rows;

    ExperimentCounts counts() const {
        ExperimentCounts c;
        for (const auto& [a, b, n] : rows) c.add(a, b, n);
        return c;
    }
    friend bool operator==(const ExperimentDocument&, const ExperimentDocument&) = default;
};

struct TimeSeriesDocument {
    std::vector<std::string> t;
    std::vector<Rational> x;
    std::vector<Rational> y;

    friend bool operator==(const TimeSeriesDocument&, const TimeSeriesDocument&) = default;
};

struct WorkspaceDocument {
    DocumentKind kind = DocumentKind::Lattice;
    std::string schema_version = kSchemaVersion;
    std::variant<LatticeDocument, SMapDocument, ObservableDocument, ExperimentDocument, TimeSeriesDocument> payload;

    friend bool operator==(const WorkspaceDocument& a, const WorkspaceDocument& b) {
        return a.kind == b.kind && a.schema_version == b.schema_version && a.payload == b.payload;
    }
};

// ---------------------------------------------------------------------------
// JSON helpers

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ParseError, where + ": " + what, {where});
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field \"") + key + "\"");
    return obj.at(key);
}

inline std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

inline Rational as_rational(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return parse_rational(std::to_string(v.get<long long>()));
        if (v.is_number_unsigned()) return parse_rational(std::to_string(v.get<unsigned long long>()));
        if (v.is_number_float()) return rational_from_double(v.get<double>());
    } catch (const RationalParseError& e) {
        fail(where, e.what());
    }
    fail(where, "expected a rational (\"num/den\", decimal string, or number)");
}

inline std::vector<std::string> as_string_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], where + "/" + std::to_string(i)));
    return out;
}

inline NamedTable as_table(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where, "expected an object of objects");
    NamedTable out;
    for (const auto& [row, cols] : v.items()) {
        if (!cols.is_object()) fail(where + "/" + row, "expected an object");
        for (const auto& [col, value] : cols.items()) out[row][col] = as_rational(value, where + "/" + row + "/" + col);
    }
    return out;
}

inline json table_json(const NamedTable& t) {
    json out = json::object();
    for (const auto& [row, cols] : t) {
        json r = json::object();
        for (const auto& [col, value] : cols) r[col] = omlprob::to_string(value);
        out[row] = r;
    }
    return out;
}

inline void check_schema(const json& doc) {
    if (doc.is_object() && doc.contains("schema_version")) {
        std::string v = doc["schema_version"].is_string() ? doc["schema_version"].get<std::string>() : doc["schema_version"].dump();
        if (v != kSchemaVersion) {
            throw Error(ErrorCode::SchemaVersionUnsupported, "schema_version " + v + " is not supported", {v});
        }
    }
}

inline LatticeDocument lattice_from_json(const json& doc) {
    std::string kind = as_string(field(doc, "kind", "/"), "/kind");
    LatticeDocument out;
    if (kind == "explicit") {
        ExplicitLattice e;
        e.elements = as_string_list(field(doc, "elements", "/"), "/elements");
        const json& leq = field(doc, "leq", "/");
        if (!leq.is_array() || leq.size() != e.elements.size()) fail("/leq", "expected one row per element");
        for (std::size_t i = 0; i < leq.size(); ++i) {
            const json& row = leq[i];
            std::string where = "/leq/" + std::to_string(i);
            if (!row.is_array() || row.size() != e.elements.size()) fail(where, "expected one entry per element");
            std::vector<bool> bits;
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j].is_boolean()) {
                    bits.push_back(row[j].get<bool>());
                } else if (row[j].is_number_integer() && (row[j] == 0 || row[j] == 1)) {
                    bits.push_back(row[j] == 1);
                } else {
                    fail(where + "/" + std::to_string(j), "expected a boolean");
                }
            }
            e.leq.push_back(std::move(bits));
        }
        const json& ortho = field(doc, "ortho", "/");
        if (ortho.is_object()) {
            for (const auto& [k, v] : ortho.items()) e.ortho[k] = as_string(v, "/ortho/" + k);
        } else if (ortho.is_array() && ortho.size() == e.elements.size()) {
            for (std::size_t i = 0; i < ortho.size(); ++i) e.ortho[e.elements[i]] = as_string(ortho[i], "/ortho/" + std::to_string(i));
        } else {
            fail("/ortho", "expected an element -> complement object");
        }
        out.form = std::move(e);
    } else if (kind == "horizontal_sum") {
        HorizontalSumSpec spec;
        const json& blocks = field(doc, "blocks", "/");
        if (!blocks.is_array()) fail("/blocks", "expected an array");
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            std::string where = "/blocks/" + std::to_string(i);
            NamedBlockSpec b;
            b.name = blocks[i].contains("name") ? as_string(blocks[i]["name"], where + "/name") : "B" + std::to_string(i + 1);
            b.atoms = as_string_list(field(blocks[i], "atoms", where), where + "/atoms");
            spec.blocks.push_back(std::move(b));
        }
        out.form = std::move(spec);
    } else {
        throw Error(ErrorCode::UnknownKind, "unknown lattice kind \"" + kind + "\"", {kind});
    }
    return out;
}

inline json lattice_to_json(const LatticeDocument& d) {
    json out;
    out["schema_version"] = kSchemaVersion;
    if (const auto* e = std::get_if<ExplicitLattice>(&d.form)) {
        out["kind"] = "explicit";
        out["elements"] = e->elements;
        json leq = json::array();
        for (const auto& row : e->leq) {
            json r = json::array();
            for (bool b : row) r.push_back(b);
            leq.push_back(r);
        }
        out["leq"] = leq;
        out["ortho"] = e->ortho;
    } else {
        const auto& spec = std::get<HorizontalSumSpec>(d.form);
        out["kind"] = "horizontal_sum";
        json blocks = json::array();
        for (const auto& b : spec.blocks) blocks.push_back({{"name", b.name}, {"atoms", b.atoms}});
        out["blocks"] = blocks;
    }
    return out;
}

inline SMapDocument smap_from_json(const json& doc) {
    SMapDocument out;
    if (doc.contains("lattice")) out.lattice = as_string(doc["lattice"], "/lattice");
    if (doc.contains("atom_table")) out.atom_table = as_table(doc["atom_table"], "/atom_table");
    if (doc.contains("full_table")) out.full_table = as_table(doc["full_table"], "/full_table");
    if (doc.contains("marginal")) {
        const json& m = doc["marginal"];
        if (!m.is_object()) fail("/marginal", "expected an object");
        for (const auto& [k, v] : m.items()) out.marginal[k] = as_rational(v, "/marginal/" + k);
    }
    if (!out.atom_table && !out.full_table) fail("/", "s-map needs \"atom_table\" or \"full_table\"");
    return out;
}

inline json smap_to_json(const SMapDocument& d) {
    json out;
    out["schema_version"] = kSchemaVersion;
    if (!d.lattice.empty()) out["lattice"] = d.lattice;
    if (d.atom_table) out["atom_table"] = table_json(*d.atom_table);
    if (d.full_table) out["full_table"] = table_json(*d.full_table);
    if (!d.marginal.empty()) {
        json m = json::object();
        for (const auto& [k, v] : d.marginal) m[k] = omlprob::to_string(v);
        out["marginal"] = m;
    }
    return out;
}

inline ObservableDocument observable_from_json(const json& doc) {
    ObservableDocument out;
    if (doc.contains("lattice")) out.lattice = as_string(doc["lattice"], "/lattice");
    const json& support = field(doc, "support", "/");
    if (!support.is_array()) fail("/support", "expected an array");
    for (std::size_t i = 0; i < support.size(); ++i) {
        std::string where = "/support/" + std::to_string(i);
        out.support.emplace_back(as_rational(field(support[i], "value", where), where + "/value"),
                                 as_string(field(support[i], "element", where), where + "/element"));
    }
    return out;
}

inline json observable_to_json(const ObservableDocument& d) {
    json out;
    out["schema_version"] = kSchemaVersion;
    if (!d.lattice.empty()) out["lattice"] = d.lattice;
    json support = json::array();
    for (const auto& [v, e] : d.support) support.push_back({{"value", omlprob::to_string(v)}, {"element", e}});
    out["support"] = support;
    return out;
}

// CSV

inline std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline ExperimentDocument experiment_from_csv(const std::vector<std::vector<std::string>>& rows) {
    ExperimentDocument out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::string where = "line " + std::to_string(i + 1);
        if (rows[i].size() != 3) fail(where, "expected first,second,count");
        const std::string& c = rows[i][2];
        if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos) fail(where, "count must be a non-negative integer");
        out.rows.emplace_back(rows[i][0], rows[i][1], std::stoull(c));
    }
    return out;
}

inline TimeSeriesDocument timeseries_from_csv(const std::vector<std::vector<std::string>>& rows) {
    TimeSeriesDocument out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::string where = "line " + std::to_string(i + 1);
        if (rows[i].size() != 3) fail(where, "expected t,x,y");
        try {
            out.t.push_back(rows[i][0]);
            out.x.push_back(parse_rational(rows[i][1]));
            out.y.push_back(parse_rational(rows[i][2]));
        } catch (const RationalParseError& e) {
            fail(where, e.what());
        }
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parse / serialize

/// Parses document text. CSV is recognised by its header; JSON documents by
/// their fields ("kind" for lattices, "atom_table"/"full_table" for s-maps,
/// "support" for observables).
inline WorkspaceDocument parse_text(const std::string& text) {
    WorkspaceDocument doc;
    std::string head = detail::trim(text.substr(0, text.find('\n')));
    if (!head.empty() && head.front() != '{' && head.front() != '[') {
        auto rows = detail::read_csv(text);
        std::vector<std::string> header = rows.empty() ? std::vector<std::string>{} : rows.front();
        if (header == std::vector<std::string>{"first", "second", "count"}) {
            doc.kind = DocumentKind::Experiment;
            doc.payload = detail::experiment_from_csv(rows);
        } else if (header == std::vector<std::string>{"t", "x", "y"}) {
            doc.kind = DocumentKind::TimeSeries;
            doc.payload = detail::timeseries_from_csv(rows);
        } else {
            throw Error(ErrorCode::UnknownKind, "unrecognised CSV header \"" + head + "\"", {head});
        }
        return doc;
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what(),
                    {"byte " + std::to_string(e.byte)});
    }
    if (!j.is_object()) detail::fail("/", "expected a JSON object");
    detail::check_schema(j);
    if (j.contains("kind")) {
        doc.kind = DocumentKind::Lattice;
        doc.payload = detail::lattice_from_json(j);
    } else if (j.contains("atom_table") || j.contains("full_table")) {
        doc.kind = DocumentKind::SMap;
        doc.payload = detail::smap_from_json(j);
    } else if (j.contains("support")) {
        doc.kind = DocumentKind::Observable;
        doc.payload = detail::observable_from_json(j);
    } else {
        throw Error(ErrorCode::UnknownKind, "cannot tell what kind of document this is");
    }
    return doc;
}

inline WorkspaceDocument parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string(), {path.string()});
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_text(ss.str());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) {
            throw Error(ErrorCode::ParseError, path.string() + ": " + e.what(), e.witness());
        }
        throw;
    }
}

inline std::string serialize(const WorkspaceDocument& doc) {
    switch (doc.kind) {
        case DocumentKind::Lattice: return detail::lattice_to_json(std::get<LatticeDocument>(doc.payload)).dump(2) + "\n";
        case DocumentKind::SMap: return detail::smap_to_json(std::get<SMapDocument>(doc.payload)).dump(2) + "\n";
        case DocumentKind::Observable:
            return detail::observable_to_json(std::get<ObservableDocument>(doc.payload)).dump(2) + "\n";
        case DocumentKind::Experiment: {
            std::string out = "first,second,count\n";
            for (const auto& [a, b, n] : std::get<ExperimentDocument>(doc.payload).rows) {
                out += a + "," + b + "," + std::to_string(n) + "\n";
            }
            return out;
        }
        case DocumentKind::TimeSeries: {
            const auto& ts = std::get<TimeSeriesDocument>(doc.payload);
            std::string out = "t,x,y\n";
            for (std::size_t i = 0; i < ts.t.size(); ++i) {
                out += ts.t[i] + "," + omlprob::to_string(ts.x[i]) + "," + omlprob::to_string(ts.y[i]) + "\n";
            }
            return out;
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Documents <-> library objects

inline FiniteOml build_lattice(const LatticeDocument& doc) {
    if (const auto* spec = std::get_if<HorizontalSumSpec>(&doc.form)) return horizontal_sum(*spec);
    const auto& e = std::get<ExplicitLattice>(doc.form);
    RawOml raw;
    raw.names = e.elements;
    raw.leq = e.leq;
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < e.elements.size(); ++i) pos[e.elements[i]] = i;
    raw.ortho.resize(e.elements.size());
    for (std::size_t i = 0; i < e.elements.size(); ++i) {
        auto it = e.ortho.find(e.elements[i]);
        if (it == e.ortho.end()) {
            throw Error(ErrorCode::MalformedTables, "no complement given for " + e.elements[i], {e.elements[i]});
        }
        auto target = pos.find(it->second);
        if (target == pos.end()) {
            throw Error(ErrorCode::UnknownElement, "complement " + it->second + " is not an element", {it->second});
        }
        raw.ortho[i] = target->second;
    }
    return validate_oml(raw);
}

inline LatticeDocument explicit_document(const FiniteOml& l) {
    ExplicitLattice e;
    RawOml raw = l.raw();
    e.elements = raw.names;
    e.leq = raw.leq;
    for (std::size_t i = 0; i < raw.names.size(); ++i) e.ortho[raw.names[i]] = raw.names[raw.ortho[i]];
    return {std::move(e)};
}

inline SMap build_smap(const LatticeRef& lattice, const SMapDocument& doc) {
    const FiniteOml& l = *lattice;
    if (doc.full_table) {
        const std::size_t n = l.size();
        std::vector<std::optional<Rational>> cells(n * n);
        for (const auto& [row, cols] : *doc.full_table) {
            ElementId a = l.at(row);
            for (const auto& [col, v] : cols) cells[a.index * n + l.at(col).index] = v;
        }
        std::vector<Rational> table(n * n);
        for (ElementId a : l.elements()) {
            for (ElementId b : l.elements()) {
                auto& c = cells[a.index * n + b.index];
                if (!c) {
                    throw Error(ErrorCode::MalformedTables, "full_table misses (" + l.name(a) + ", " + l.name(b) + ")",
                                {l.name(a), l.name(b)});
                }
                table[a.index * n + b.index] = *c;
            }
        }
        return validate_smap(lattice, std::move(table));
    }
    std::map<std::pair<ElementId, ElementId>, Rational> pairs;
    for (const auto& [row, cols] : *doc.atom_table) {
        ElementId a = l.at(row);
        for (const auto& [col, v] : cols) {
            ElementId b = l.at(col);
            if (!l.is_atom(a) || !l.is_atom(b)) {
                throw Error(ErrorCode::MalformedTables, "atom_table entry (" + row + ", " + col + ") is not an atom pair",
                            {row, col});
            }
            pairs[{a, b}] = v;
        }
    }
    std::map<ElementId, Rational> marginal;
    for (const auto& [name, v] : doc.marginal) marginal[l.at(name)] = v;
    return extend_smap_from_atom_table(lattice, pairs, marginal);
}

inline SMapDocument full_table_document(const SMap& p, std::string lattice_ref = {}) {
    const FiniteOml& l = p.lattice();
    SMapDocument d;
    d.lattice = std::move(lattice_ref);
    NamedTable t;
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) t[l.name(a)][l.name(b)] = p(a, b);
    }
    d.full_table = std::move(t);
    return d;
}

inline SMapDocument atom_table_document(const SMap& p, std::string lattice_ref = {}) {
    const FiniteOml& l = p.lattice();
    SMapDocument d;
    d.lattice = std::move(lattice_ref);
    NamedTable t;
    for (ElementId a : l.atoms()) {
        for (ElementId b : l.atoms()) t[l.name(a)][l.name(b)] = p(a, b);
        d.marginal[l.name(a)] = p(a, a);
    }
    d.atom_table = std::move(t);
    return d;
}

inline Observable build_observable(const LatticeRef& lattice, const ObservableDocument& doc) {
    return validate_observable(lattice, doc.support);
}

inline ObservableDocument observable_document(const Observable& x, std::string lattice_ref = {}) {
    ObservableDocument d;
    d.lattice = std::move(lattice_ref);
    for (const auto& s : x.support()) d.support.emplace_back(s.value, x.lattice().name(s.element));
    return d;
}

// ---------------------------------------------------------------------------
// Reports

/// Command outcome. Text and JSON renderings come from the same facts.
struct Report {
    std::string command;
    std::vector<std::string> summary;
    json details = json::object();
    int exit_status = 0;

    json to_json() const {
        json out;
        out["command"] = command;
        out["summary"] = summary;
        out["details"] = details;
        out["exit_status"] = exit_status;
        return out;
    }

    std::string render_json() const { return to_json().dump(2) + "\n"; }

    std::string render_text() const {
        std::string out;
        for (const auto& line : summary) out += line + "\n";
        flatten(details, "", out);
        return out;
    }

private:
    static void flatten(const json& v, const std::string& prefix, std::string& out) {
        if (v.is_object()) {
            for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
        } else if (v.is_array()) {
            if (v.empty()) out += "  " + prefix + ": []\n";
            for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
        } else {
            out += "  " + prefix + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        }
    }
};

}  // namespace omlprob::io

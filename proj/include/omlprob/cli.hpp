#pragma once

// Command-line front end. `run` parses one command line, executes one
// pipeline and renders a Report; main() in tools/ is a thin wrapper so the
// test suites can drive the same code in-process.

#include "omlprob/causality.hpp"
#include "omlprob/io.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/observable.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/smap.hpp"
#include "omlprob/state.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace omlprob::cli {

namespace fs = std::filesystem;
using io::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

/// Bad flag combinations found after CLI11 has parsed the line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Args {
    bool json = false;
    std::string lattice;
    std::string smap;
    std::vector<std::string> obs;
    std::string tol = "1/100";
    std::string cause;
    std::string effect;
    std::optional<std::uint64_t> seed;
    std::string exp1;
    std::string exp2;
    std::string series;
    std::string out;
    bool noise = false;
    std::size_t length = 50;
    std::vector<std::string> positional;
};

/// Fixture directory: $OMLPROB_FIXTURES when set, else the compiled-in default.
inline fs::path fixture_dir(const fs::path& fallback) {
    if (const char* env = std::getenv("OMLPROB_FIXTURES"); env != nullptr && *env != '\0') return env;
    return fallback;
}

class Session {
public:
    Session(Args args, fs::path fixtures) : a_(std::move(args)), fixtures_(std::move(fixtures)) {}

    const Args& args() const { return a_; }

    /// `ref` as given, then relative to `base`, then in the fixture directory.
    fs::path resolve(const std::string& ref, const fs::path& base = {}) const {
        fs::path p(ref);
        if (fs::exists(p)) return p;
        if (!base.empty() && p.is_relative() && fs::exists(base / p)) return base / p;
        if (p.is_relative() && fs::exists(fixtures_ / p)) return fixtures_ / p;
        throw Error(ErrorCode::ParseError, "cannot open " + ref, {ref});
    }

    io::WorkspaceDocument load(const std::string& ref, io::DocumentKind expected, fs::path* where = nullptr,
                               const fs::path& base = {}) const {
        fs::path path = resolve(ref, base);
        if (where != nullptr) *where = path;
        io::WorkspaceDocument doc = io::parse_file(path);
        if (doc.kind != expected) {
            throw Error(ErrorCode::UnknownKind,
                        path.string() + " is a " + std::string(io::to_string(doc.kind)) + " document, expected " +
                            std::string(io::to_string(expected)),
                        {path.string()});
        }
        return doc;
    }

    io::LatticeDocument lattice_document(const std::string& ref, const fs::path& base = {}) const {
        return std::get<io::LatticeDocument>(load(ref, io::DocumentKind::Lattice, nullptr, base).payload);
    }

    /// The lattice every other document of this invocation is read against:
    /// --lattice when given, else the reference inside the first document
    /// that carries one.
    LatticeRef lattice() {
        if (lattice_) return lattice_;
        std::string ref = a_.lattice;
        fs::path base;
        if (ref.empty() && !a_.smap.empty()) {
            fs::path where;
            auto doc = std::get<io::SMapDocument>(load(a_.smap, io::DocumentKind::SMap, &where).payload);
            ref = doc.lattice;
            base = where.parent_path();
        }
        if (ref.empty() && !a_.obs.empty()) {
            fs::path where;
            auto doc = std::get<io::ObservableDocument>(load(a_.obs.front(), io::DocumentKind::Observable, &where).payload);
            ref = doc.lattice;
            base = where.parent_path();
        }
        if (ref.empty()) throw UsageError("no lattice: pass --lattice or a document that names one");
        lattice_ = share(io::build_lattice(lattice_document(ref, base)));
        return lattice_;
    }

    void use_lattice(LatticeRef l) { lattice_ = std::move(l); }

    SMap smap() {
        if (a_.smap.empty()) throw UsageError("--smap is required");
        auto doc = std::get<io::SMapDocument>(load(a_.smap, io::DocumentKind::SMap).payload);
        return io::build_smap(lattice(), doc);
    }

    Observable observable(std::size_t i) {
        if (a_.obs.size() <= i) throw UsageError("this command needs " + std::to_string(i + 1) + " --obs argument(s)");
        auto doc = std::get<io::ObservableDocument>(load(a_.obs[i], io::DocumentKind::Observable).payload);
        return io::build_observable(lattice(), doc);
    }

    Rational tolerance() const {
        try {
            return parse_rational(a_.tol);
        } catch (const std::exception&) {
            throw UsageError("--tol expects a rational, got \"" + a_.tol + "\"");
        }
    }

private:
    Args a_;
    fs::path fixtures_;
    LatticeRef lattice_;
};

// ---------------------------------------------------------------------------
// JSON fragments

inline json q(const Rational& v) { return to_string(v); }

inline json names(const FiniteOml& l, std::span<const ElementId> items) {
    json out = json::array();
    for (ElementId e : items) out.push_back(l.name(e));
    return out;
}

inline json support_json(const Observable& x) {
    json out = json::array();
    for (const auto& s : x.support()) out.push_back({{"value", q(s.value)}, {"element", x.lattice().name(s.element)}});
    return out;
}

inline std::string support_text(const Observable& x) {
    std::string out;
    for (const auto& s : x.support()) {
        if (!out.empty()) out += ", ";
        out += "(" + to_string(s.value) + ", " + x.lattice().name(s.element) + ")";
    }
    return "[" + out + "]";
}

inline json checks_json(const PropertyReport& r) {
    json out = json::array();
    for (const auto& c : r.checks) {
        json item = {{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}};
        if (!c.witness.empty()) item["witness"] = c.witness;
        out.push_back(item);
    }
    return out;
}

inline json blocks_json(const FiniteOml& l) {
    json out = json::array();
    for (const Block& b : l.blocks()) {
        out.push_back({{"members", names(l, b.members)}, {"atoms", names(l, b.atoms)}, {"boolean", b.is_boolean}});
    }
    return out;
}

inline json verdict_json(const FiniteOml& l, const GrangerVerdict& v) {
    json w = json::array();
    for (const auto& x : v.witnesses) {
        w.push_back({{"effect_event", l.name(x.effect_event)},
                     {"conditioning_event", l.name(x.conditioning_event)},
                     {"conditional", q(x.conditional)},
                     {"unconditional", q(x.unconditional)}});
    }
    return {{"causes", v.causes}, {"direction", v.cause + " -> " + v.effect}, {"witnesses", w}, {"annotations", v.annotations}};
}

inline std::string verdict_line(const FiniteOml& l, const GrangerVerdict& v) {
    std::string line = v.cause + " -> " + v.effect + ": causes: " + (v.causes ? "true" : "false");
    if (!v.witnesses.empty()) {
        const auto& w = v.witnesses.front();
        line += " (witness f(" + l.name(w.effect_event) + "|" + l.name(w.conditioning_event) + ") = " +
                to_string(w.conditional) + " vs mu(" + l.name(w.effect_event) + ") = " + to_string(w.unconditional) + ")";
    }
    return line;
}

inline std::string classification_text(Causality c) {
    switch (c) {
        case Causality::Symmetric: return "symmetric, not causal";
        case Causality::Causal: return "causal, not strongly causal";
        case Causality::StronglyCausal: return "strongly causal";
    }
    return "";
}

inline json classification_json(const SMap& p, const CausalityReport& r) {
    const FiniteOml& l = p.lattice();
    json causal = json::array();
    for (const auto& w : r.causal_witnesses) {
        causal.push_back({{"a", l.name(w.a)}, {"b", l.name(w.b)}, {"p_ab", q(w.p_ab)}, {"p_ba", q(w.p_ba)}});
    }
    json dependence = json::array();
    for (const auto& w : r.dependence_witnesses) {
        dependence.push_back({{"dependent", l.name(w.dependent)},
                              {"on", l.name(w.on)},
                              {"p_dependent_on", q(w.dependent_lhs)},
                              {"product", q(w.dependent_rhs)},
                              {"p_on_dependent", q(w.independent_lhs)}});
    }
    json jp = json::array();
    for (auto [a, b] : r.jauch_piron_notes) jp.push_back({l.name(a), l.name(b)});
    return {{"classification", std::string(to_string(r.classification))},
            {"ordered_pairs_scanned", r.ordered_pairs_scanned},
            {"indeterminate_pairs", r.indeterminate_pairs},
            {"causal_pairs", causal},
            {"one_way_dependences", dependence},
            {"certain_pairs", jp}};
}

// ---------------------------------------------------------------------------
// Commands

inline io::Report cmd_validate(Session& s, const std::string& name) {
    LatticeRef l = s.lattice();
    HorizontalSumCheck h = is_horizontal_sum(*l);
    io::Report r{name};
    r.summary.push_back("valid OML, " + std::to_string(l->blocks().size()) + " blocks, horizontal sum: " +
                        (h.is_sum ? "yes" : "no"));
    r.details = {{"elements", l->size()},
                 {"atoms", names(*l, l->atoms())},
                 {"blocks", l->blocks().size()},
                 {"horizontal_sum", h.is_sum}};
    if (!h.note.empty()) r.details["note"] = h.note;
    return r;
}

inline io::Report cmd_blocks(Session& s) {
    LatticeRef l = s.lattice();
    io::Report r{"blocks"};
    r.summary.push_back(std::to_string(l->blocks().size()) + " blocks");
    for (const Block& b : l->blocks()) r.summary.push_back("  " + l->format_set(b.members));
    r.details = {{"blocks", blocks_json(*l)}};
    return r;
}

inline io::Report cmd_hsum(Session& s) {
    LatticeRef l = s.lattice();
    HorizontalSumCheck h = is_horizontal_sum(*l);
    io::Report r{"hsum"};
    r.summary.push_back(std::string("horizontal sum: ") + (h.is_sum ? "yes" : "no"));
    r.details = {{"horizontal_sum", h.is_sum}, {"blocks", l->blocks().size()}};
    if (h.witness_blocks) {
        r.details["witness_blocks"] = {h.witness_blocks->first, h.witness_blocks->second};
        r.details["shared_elements"] = names(*l, h.intersection);
    }
    if (!h.note.empty()) r.details["note"] = h.note;
    return r;
}

inline io::Report cmd_smap_validate(Session& s) {
    SMap p = s.smap();
    const FiniteOml& l = p.lattice();
    State m = mu(p);
    io::Report r{"smap validate"};
    r.summary.push_back("valid s-map on " + std::to_string(l.size()) + " elements");
    json marginal = json::object();
    for (ElementId a : l.atoms()) marginal[l.name(a)] = q(m(a));
    r.details = {{"elements", l.size()}, {"marginal", marginal}};
    return r;
}

inline io::Report cmd_smap_classify(Session& s) {
    SMap p = s.smap();
    CausalityReport c = classify_causality(p);
    io::Report r{"smap classify"};
    r.summary.push_back(classification_text(c.classification));
    r.details = classification_json(p, c);
    return r;
}

inline io::Report cmd_smap_properties(Session& s) {
    SMap p = s.smap();
    PropertyReport pr = check_properties(p);
    io::Report r{"smap properties"};
    for (const auto& c : pr.checks) r.summary.push_back(std::string(c.passed ? "pass " : "FAIL ") + c.name);
    r.details = {{"checks", checks_json(pr)}, {"all_passed", pr.all_passed()}};
    r.exit_status = pr.all_passed() ? kExitOk : kExitInvalid;
    return r;
}

inline io::Report cmd_cond(Session& s) {
    const auto& pos = s.args().positional;
    if (pos.size() != 2) throw UsageError("cond expects two element names: A B for f(A|B)");
    SMap p = s.smap();
    const FiniteOml& l = p.lattice();
    ElementId a = l.at(pos[0]), b = l.at(pos[1]);
    if (b == l.bottom()) throw UsageError("cannot condition on the bottom element");
    ConditionalState f = conditional_from_smap(p);
    bool fallback = std::find(f.fallback_used().begin(), f.fallback_used().end(), b) != f.fallback_used().end();
    IndependenceResult ind = is_independent(p, a, b);
    io::Report r{"cond"};
    r.summary.push_back("f(" + pos[0] + "|" + pos[1] + ") = " + to_string(f(a, b)));
    r.summary.push_back(pos[0] + " given " + pos[1] + ": " + std::string(to_string(ind.verdict)));
    r.details = {{"conditional", q(f(a, b))},
                 {"mu", q(p(a, a))},
                 {"independence", std::string(to_string(ind.verdict))},
                 {"p_ab", q(ind.lhs)},
                 {"product", q(ind.rhs)},
                 {"fallback_state", fallback}};
    return r;
}

inline io::Report cmd_expect(Session& s) {
    SMap p = s.smap();
    Observable x = s.observable(0);
    State m = mu(p);
    io::Report r{"expect"};
    r.summary.push_back("E(x) = " + to_string(expectation(p, x)));
    json dist = json::object();
    for (const auto& [v, w] : distribution(m, x)) dist[to_string(v)] = q(w);
    r.details = {{"expectation", q(expectation(p, x))}, {"distribution", dist}};
    return r;
}

inline io::Report cmd_condexpect(Session& s) {
    SMap p = s.smap();
    Observable x = s.observable(0);
    Observable y = s.observable(1);
    Projection z = conditional_expectation(p, x, range(y));
    const FiniteOml& l = p.lattice();
    io::Report r{"condexpect"};
    r.summary.push_back("E(x|R(y)) = " + support_text(z.value));
    r.details = {{"support", support_json(z.value)},
                 {"expectation", q(expectation(p, z.value))},
                 {"fallback_atoms", names(l, z.fallback_atoms)}};
    return r;
}

inline io::Report cmd_oplus(Session& s) {
    SMap p = s.smap();
    Observable x = s.observable(0);
    Observable y = s.observable(1);
    Projection z = oplus(p, x, y);
    PropertyReport pr = check_oplus_properties(p, x, y);
    const FiniteOml& l = p.lattice();
    io::Report r{"oplus"};
    r.summary.push_back("oplus(x,y) = " + support_text(z.value));
    for (const auto& c : pr.checks) r.summary.push_back(std::string(c.passed ? "pass " : "FAIL ") + c.name);
    r.details = {{"support", support_json(z.value)},
                 {"expectation", q(expectation(p, z.value))},
                 {"fallback_atoms", names(l, z.fallback_atoms)},
                 {"checks", checks_json(pr)}};
    r.exit_status = pr.all_passed() ? kExitOk : kExitInvalid;
    return r;
}

inline io::Report cmd_obs_validate(Session& s) {
    Observable x = s.observable(0);
    io::Report r{"obs validate"};
    r.summary.push_back("valid observable, " + std::to_string(x.support().size()) + " support points");
    r.summary.push_back(support_text(x));
    json spec = json::array();
    for (const auto& v : spectrum(x)) spec.push_back(q(v));
    r.details = {{"support", support_json(x)}, {"spectrum", spec}};
    return r;
}

inline ProcessLattice process_lattice(Session& s) {
    if (s.args().lattice.empty()) throw UsageError("--lattice with series@stamp block names is required");
    std::string ref = s.args().lattice == "fixture" ? "l1_process.json" : s.args().lattice;
    io::LatticeDocument doc = s.lattice_document(ref);
    const auto* spec = std::get_if<HorizontalSumSpec>(&doc.form);
    if (spec == nullptr) {
        throw Error(ErrorCode::UnknownSeriesOrStamp, "a process lattice must be a horizontal_sum with series@stamp block names");
    }
    ProcessLattice pl = process_lattice_from_named_blocks(*spec);
    s.use_lattice(pl.lattice);
    return pl;
}

inline io::Report cmd_granger_test(Session& s) {
    if (s.args().cause.empty() || s.args().effect.empty()) throw UsageError("--cause and --effect are required");
    ProcessLattice pl = process_lattice(s);
    SMap p = s.smap();
    GrangerVerdict v = granger_causes(p, pl, parse_slot(s.args().effect), parse_slot(s.args().cause));
    io::Report r{"granger test"};
    r.summary.push_back(verdict_line(p.lattice(), v));
    r.details = verdict_json(p.lattice(), v);
    return r;
}

inline io::Report cmd_granger_fit(Session& s) {
    if (s.args().exp1.empty() || s.args().exp2.empty()) throw UsageError("--exp1 and --exp2 are required");
    ProcessLattice pl = process_lattice(s);
    auto e1 = std::get<io::ExperimentDocument>(s.load(s.args().exp1, io::DocumentKind::Experiment).payload);
    auto e2 = std::get<io::ExperimentDocument>(s.load(s.args().exp2, io::DocumentKind::Experiment).payload);
    SMap p = fit_smap_from_experiments(pl, e1.counts(), e2.counts(), s.tolerance());
    const FiniteOml& l = p.lattice();
    CausalityReport c = classify_causality(p);
    GrangerVerdict forward = granger_causes(p, pl, pl.slots[1], pl.slots[0]);
    GrangerVerdict backward = granger_causes(p, pl, pl.slots[0], pl.slots[1]);

    io::SMapDocument table = io::atom_table_document(p, s.args().lattice);
    io::Report r{"granger fit"};
    r.summary.push_back("fitted s-map: " + classification_text(c.classification));
    r.summary.push_back(verdict_line(l, forward));
    r.summary.push_back(verdict_line(l, backward));
    json atoms = json::object();
    for (const auto& [row, cols] : *table.atom_table) {
        for (const auto& [col, v] : cols) atoms[row][col] = q(v);
    }
    json marginal = json::object();
    for (const auto& [k, v] : table.marginal) marginal[k] = q(v);
    r.details = {{"atom_table", atoms},
                 {"marginal", marginal},
                 {"classification", std::string(to_string(c.classification))},
                 {"verdicts", json::array({verdict_json(l, forward), verdict_json(l, backward)})}};
    if (!s.args().out.empty()) {
        io::WorkspaceDocument doc{io::DocumentKind::SMap, io::kSchemaVersion, table};
        std::ofstream out(s.args().out, std::ios::binary);
        if (!out) throw Error(ErrorCode::ParseError, "cannot write " + s.args().out, {s.args().out});
        out << io::serialize(doc);
        r.details["written"] = s.args().out;
    }
    return r;
}

inline io::Report cmd_granger_classic(Session& s) {
    const Args& a = s.args();
    std::vector<Rational> x, y;
    std::string source;
    if (!a.series.empty()) {
        auto ts = std::get<io::TimeSeriesDocument>(s.load(a.series, io::DocumentKind::TimeSeries).payload);
        x = ts.x;
        y = ts.y;
        source = a.series;
    } else if (a.seed) {
        SeriesPair sp = a.noise ? noise_series(*a.seed, a.length) : coupled_series(*a.seed, a.length);
        x = sp.x;
        y = sp.y;
        source = std::string(a.noise ? "noise" : "coupled") + " seed " + std::to_string(*a.seed);
    } else {
        throw UsageError("granger classic needs --series or --seed");
    }
    ClassicalGrangerReport c = classical_granger_lag1(x, y);
    io::Report r{"granger classic"};
    r.summary.push_back("X -> Y: " + std::string(c.verdict ? "true" : "false") + " (" + c.label + ")");
    r.summary.push_back("sigma2 restricted = " + to_string(c.sigma2_restricted) + ", full = " + to_string(c.sigma2_full));
    r.details = {{"source", source},
                 {"label", c.label},
                 {"observations", c.observations},
                 {"rss_restricted", q(c.rss_restricted)},
                 {"rss_full", q(c.rss_full)},
                 {"sigma2_restricted", q(c.sigma2_restricted)},
                 {"sigma2_full", q(c.sigma2_full)},
                 {"verdict", c.verdict}};
    return r;
}

// ---------------------------------------------------------------------------
// Entry point

inline void print_error(std::ostream& out, std::ostream& err, bool as_json, const std::string& command,
                        const std::string& code, const std::string& message, const std::vector<std::string>& witness,
                        int status) {
    if (as_json) {
        json e = {{"command", command},
                  {"error", {{"code", code}, {"message", message}, {"witness", witness}}},
                  {"exit_status", status}};
        out << e.dump(2) << "\n";
    } else {
        err << "error: " << message << "\n";
        if (!witness.empty()) {
            err << "witness:";
            for (const auto& w : witness) err << " " << w;
            err << "\n";
        }
    }
}

/// Runs one command line (argv[0] included). Output goes to `out`, errors to
/// `err` (or `out` as JSON with --json). Returns the exit status.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err,
               const fs::path& default_fixtures) {
    Args a;
    CLI::App app{"Exact probability on finite orthomodular lattices", "omlprob"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", a.json, "machine-readable output");
    app.add_option("--lattice", a.lattice, "lattice document");
    app.add_option("--smap", a.smap, "s-map document");
    app.add_option("--obs", a.obs, "observable document (repeatable)");
    app.add_option("--tol", a.tol, "tolerance for the marginal gate")->capture_default_str();
    app.add_option("--cause", a.cause, "cause slot series@stamp");
    app.add_option("--effect", a.effect, "effect slot series@stamp");
    app.add_option("--seed", a.seed, "generator seed");

    auto positional_lattice = [&](CLI::App* sub) {
        sub->add_option("file", a.lattice, "lattice document (same as --lattice)");
        sub->fallthrough();
    };
    auto* validate = app.add_subcommand("validate", "validate a lattice and report its blocks");
    positional_lattice(validate);
    auto* blocks = app.add_subcommand("blocks", "list the blocks of a lattice");
    positional_lattice(blocks);
    auto* hsum = app.add_subcommand("hsum", "decide whether a lattice is a horizontal sum");
    positional_lattice(hsum);

    auto* smap = app.add_subcommand("smap", "s-map commands");
    smap->require_subcommand(1);
    smap->fallthrough();
    auto* smap_validate = smap->add_subcommand("validate", "validate an s-map")->fallthrough();
    auto* smap_classify = smap->add_subcommand("classify", "symmetric, causal or strongly causal")->fallthrough();
    auto* smap_properties = smap->add_subcommand("properties", "check p1-p4, marginal and Jauch-Piron")->fallthrough();

    auto* cond = app.add_subcommand("cond", "conditional state f(A|B)");
    cond->add_option("events", a.positional, "A B")->expected(2);
    cond->fallthrough();
    auto* expect = app.add_subcommand("expect", "expectation of an observable")->fallthrough();
    auto* condexpect = app.add_subcommand("condexpect", "E(x|R(y)) for --obs x --obs y")->fallthrough();
    auto* oplus_cmd = app.add_subcommand("oplus", "summability operator for --obs x --obs y")->fallthrough();
    auto* obs = app.add_subcommand("obs", "observable commands");
    obs->require_subcommand(1);
    obs->fallthrough();
    auto* obs_validate = obs->add_subcommand("validate", "validate an observable")->fallthrough();

    auto* granger = app.add_subcommand("granger", "causality over a process lattice");
    granger->require_subcommand(1);
    granger->fallthrough();
    auto* g_fit = granger->add_subcommand("fit", "fit an s-map from two order-swapped experiments")->fallthrough();
    g_fit->add_option("--exp1", a.exp1, "counts, first variable measured first");
    g_fit->add_option("--exp2", a.exp2, "counts, second variable measured first");
    g_fit->add_option("--out", a.out, "write the fitted s-map document here");
    auto* g_test = granger->add_subcommand("test", "exact predicate F(effect|cause) != F(effect)")->fallthrough();
    auto* g_classic = granger->add_subcommand("classic", "lag-1 least-squares reference")->fallthrough();
    g_classic->add_option("--series", a.series, "t,x,y CSV");
    g_classic->add_flag("--noise", a.noise, "with --seed: independent noise instead of y_t = x_(t-1)");
    g_classic->add_option("--length", a.length, "with --seed: series length")->capture_default_str();

    std::vector<const char*> raw;
    for (const auto& s : argv) raw.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    std::string command;
    for (CLI::App* sub = &app; !sub->get_subcommands().empty();) {
        sub = sub->get_subcommands().front();
        command += (command.empty() ? "" : " ") + sub->get_name();
    }

    Session s(a, fixture_dir(default_fixtures));
    io::Report report;
    try {
        if (*validate) report = cmd_validate(s, "validate");
        else if (*blocks) report = cmd_blocks(s);
        else if (*hsum) report = cmd_hsum(s);
        else if (*smap_validate) report = cmd_smap_validate(s);
        else if (*smap_classify) report = cmd_smap_classify(s);
        else if (*smap_properties) report = cmd_smap_properties(s);
        else if (*cond) report = cmd_cond(s);
        else if (*expect) report = cmd_expect(s);
        else if (*condexpect) report = cmd_condexpect(s);
        else if (*oplus_cmd) report = cmd_oplus(s);
        else if (*obs_validate) report = cmd_obs_validate(s);
        else if (*g_fit) report = cmd_granger_fit(s);
        else if (*g_test) report = cmd_granger_test(s);
        else if (*g_classic) report = cmd_granger_classic(s);
        else throw UsageError("unknown command");
    } catch (const UsageError& e) {
        print_error(out, err, a.json, command, "UsageError", e.what(), {}, kExitUsage);
        if (!a.json) err << "run `omlprob " << command << " --help` for usage\n";
        return kExitUsage;
    } catch (const Error& e) {
        print_error(out, err, a.json, command, std::string(error_name(e.code())), e.what(), e.witness(), kExitInvalid);
        return kExitInvalid;
    }
    out << (a.json ? report.render_json() : report.render_text());
    return report.exit_status;
}

}  // namespace omlprob::cli

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "report.hpp"
#include "whitehead/forms.hpp"
#include "whitehead/ktheory.hpp"

using namespace cli;

namespace {

enum Exit { kOk = 0, kMath = 1, kUsage = 2, kUnsupported = 3, kPrecision = 4, kUndecided = 5 };

struct Verb {
    std::string name;
    std::string help;
    std::vector<std::pair<std::string, std::string>> options;  // name, default ("" = none)
    std::vector<std::string> positional;
    std::function<void(Report&, const Context&)> run;
};

const std::vector<Verb>& verbs() {
    static const std::vector<Verb> v{
        {"sk1", "SK1 of a Platonov algebra (a1, t1)_n (x) (a2, t2)_n over k((t1))((t2))",
         {{"config", ""}, {"field", ""}, {"n", ""}, {"a1", ""}, {"a2", ""}}, {}, run_sk1},
        {"invariant", "KMRT invariant of an SL1 element, or the invariant descriptors",
         {{"kind", ""}, {"field", "Q"}, {"algebra", "symbol(-1;-1;2) (*) symbol(2;5;2)"}, {"element", "1"}, {"involution", "auto"}, {"v", "auto"}},
         {"kind"}, run_invariant},
        {"residue", "iterated tame residues of a symbol", {{"field", ""}, {"symbol", ""}, {"mod", ""}, {"at", "all"}, {"sign", "1"}}, {}, run_residue},
        {"form", "quadratic form report: isotropy, kernel, invariants, I-level", {{"field", "Q"}, {"form", ""}, {"let", ""}}, {}, run_form},
        {"wittvec", "Witt vector arithmetic", {{"p", ""}, {"l", ""}, {"field", ""}, {"op", "add"}, {"lhs", ""}, {"rhs", ""}}, {}, run_wittvec},
        {"lift", "lift palg(a;b) (*) palg(c;d) to (4a+1,b) (x) (4c+1,d)", {{"field", "F(2)"}, {"lift-field", "Q"}, {"algebra", ""}}, {}, run_lift},
        {"bounds", "Kahn bound nbar(n) or the torsion exponent m", {{"n", ""}, {"factors", ""}}, {}, run_bounds},
        {"centre", "centre formulas: symbol {a,b,c,d} and SK1 witness, or the lifted Pfister value",
         {{"field", ""}, {"algebra", ""}, {"zeta", "auto"}, {"values", ""}}, {}, run_centre},
        {"selftest", "embedded oracle suites", {}, {}, run_selftest},
    };
    return v;
}

std::string quote(const std::string& s) {
    if (!s.empty() && s.find_first_of(" \t\"'(){};*\\$<>|&") == std::string::npos) return s;
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

// Loads {"verb": ..., "options": {...}} as an argument vector.
std::vector<std::string> args_from_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw whitehead::UsageError("cannot read input document " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw whitehead::UsageError(std::string("malformed input document: ") + e.what());
    }
    if (!doc.contains("verb") || !doc["verb"].is_string()) throw whitehead::UsageError("input document needs a \"verb\"");
    std::vector<std::string> args{doc["verb"].get<std::string>()};
    const Verb* verb = nullptr;
    for (const auto& v : verbs())
        if (v.name == args[0]) verb = &v;
    if (!verb) throw whitehead::UsageError("unknown verb '" + args[0] + "'");
    if (doc.contains("options")) {
        for (const auto& p : verb->positional)
            if (doc["options"].contains(p)) args.push_back(doc["options"][p].get<std::string>());
        for (const auto& [k, v] : doc["options"].items()) {
            if (std::find(verb->positional.begin(), verb->positional.end(), k) != verb->positional.end()) continue;
            args.push_back("--" + k);
            args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    return args;
}

// sk1 --config: {"field": "Qp(17)" | "p": 17, "n": 2, "a1": "3", "a2": "17"}
void load_config(Report& r) {
    auto it = r.input.find("config");
    if (it == r.input.end()) return;
    const std::string path = it->second;
    r.input.erase(it);
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw whitehead::UsageError("cannot read config " + path);
    json c;
    try {
        c = json::parse(in);
    } catch (const json::exception& e) {
        throw whitehead::UsageError(std::string("malformed config: ") + e.what());
    }
    auto str = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    for (const auto& [k, v] : c.items()) {
        if (k == "p") {
            if (r.input["field"].empty()) r.input["field"] = "Qp(" + str(v) + ")";
        } else if (k == "field" || k == "n" || k == "a1" || k == "a2") {
            if (r.input[k].empty()) r.input[k] = str(v);
        } else {
            throw whitehead::UsageError("unknown config key '" + k + "'");
        }
    }
}

std::string render_text(const Report& r) {
    std::string out;
    for (const auto& l : r.text) out += l + "\n";
    for (const auto& c : r.certificates) out += "[" + c["provenance"].get<std::string>() + "] " + c["claim"].get<std::string>() + "\n";
    return out;
}

json conventions(const Report& r) {
    return {{"pfister", whitehead::kPfisterConvention},
            {"residue", whitehead::kResidueConvention},
            {"residue_sign", r.input.count("sign") ? r.input.at("sign") : "1"},
            {"roots_of_unity", r.roots},
            {"named_constants", "p = residue prime, u = least integer unit that is not an m-th power"}};
}

void emit(const std::string& s, bool to_err = false) {
    std::FILE* f = to_err ? stderr : stdout;
    std::fwrite(s.data(), 1, s.size(), f);
    std::fflush(f);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    bool as_json = std::find(args.begin(), args.end(), "--json") != args.end();
    auto fail = [&](int code, const std::string& kind, const std::string& msg, const std::string& verb) {
        if (as_json)
            emit(json{{"schema", 1}, {"verb", verb}, {"error", {{"kind", kind}, {"message", msg}}}, {"exit_code", code}}.dump(2) + "\n");
        else
            emit(kind + ": " + msg + "\n", true);
        return code;
    };

    // --input FILE replaces the verb and its options by a canonical input document
    for (size_t i = 0; i < args.size(); ++i)
        if (args[i] == "--input") {
            if (i + 1 >= args.size()) return fail(kUsage, "usage", "--input needs a file", "");
            std::vector<std::string> doc;
            try {
                doc = args_from_document(args[i + 1]);
            } catch (const whitehead::UsageError& e) {
                return fail(kUsage, "usage", e.what(), "");
            }
            std::vector<std::string> rest;
            for (size_t j = 0; j < args.size(); ++j)
                if (j != i && j != i + 1) rest.push_back(args[j]);
            rest.insert(rest.end(), doc.begin(), doc.end());
            args = rest;
            break;
        }

    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--json" || args[i] == "--require-certificate") continue;
        if (args[i] == "--seed") {
            ++i;
            continue;
        }
        if (args[i].rfind("-", 0) == 0) break;
        bool known = false;
        for (const auto& v : verbs()) known = known || v.name == args[i];
        if (!known) return fail(kUsage, "usage", "unknown verb '" + args[i] + "'", "");
        break;
    }

    CLI::App app{"whitehead: SK1, reduced Whitehead group invariants and their value groups"};
    app.require_subcommand(1);
    app.fallthrough();
    bool require_cert = false;
    uint64_t seed = 1;
    app.add_flag("--json", as_json, "machine-readable report");
    app.add_flag("--require-certificate", require_cert, "exit 5 when any claim is undecided");
    app.add_option("--seed", seed, "seed for sampled checks");

    std::map<std::string, Options> values;
    std::map<std::string, CLI::App*> subs;
    for (const auto& v : verbs()) {
        auto* sub = app.add_subcommand(v.name, v.help);
        subs[v.name] = sub;
        Options& o = values[v.name];
        for (const auto& [name, def] : v.options) {
            o[name] = def;
            const bool pos = std::find(v.positional.begin(), v.positional.end(), name) != v.positional.end();
            auto* opt = sub->add_option(pos ? name : "--" + name, o[name], name);
            if (!def.empty()) opt->capture_default_str();
        }
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kUsage, "usage", e.what(), "");
    }

    const Verb* verb = nullptr;
    for (const auto& v : verbs())
        if (subs[v.name]->parsed()) verb = &v;
    Report r;
    r.verb = verb->name;
    r.input = values[verb->name];
    r.positional = verb->positional;
    Context ctx{seed};
    if (verb->name == "selftest") r.input["seed"] = std::to_string(seed);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        load_config(r);
        verb->run(r, ctx);
    } catch (const whitehead::UsageError& e) {
        return fail(kUsage, "usage", e.what(), r.verb);
    } catch (const whitehead::UnsupportedTower& e) {
        return fail(kUnsupported, "unsupported tower", e.what(), r.verb);
    } catch (const whitehead::PrecisionExhausted& e) {
        return fail(kPrecision, "precision exhausted", e.what(), r.verb);
    } catch (const whitehead::Undecided& e) {
        if (require_cert) return fail(kUndecided, "undecided", e.what(), r.verb);
        r.result = {{"status", "undecided"}, {"reason", e.what()}};
        r.undecided = true;
        r.line(std::string("undecided: ") + e.what());
    } catch (const whitehead::MathError& e) {
        return fail(kMath, "math error", e.what(), r.verb);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    // canonical echo: every option with its resolved value; empty ones dropped
    Options canon;
    for (const auto& [k, v] : r.input)
        if (!v.empty()) canon[k] = v;
    std::string command = "whitehead " + r.verb;
    for (const auto& p : r.positional)
        if (canon.count(p)) command += " " + quote(canon[p]);
    for (const auto& [k, v] : canon)
        if (std::find(r.positional.begin(), r.positional.end(), k) == r.positional.end()) command += " --" + k + " " + quote(v);

    const int code = r.failed ? kMath : (require_cert && r.undecided ? kUndecided : kOk);
    if (as_json) {
        json doc{{"schema", 1},
                 {"verb", r.verb},
                 {"input", {{"verb", r.verb}, {"options", canon}}},
                 {"command", command},
                 {"result", r.result},
                 {"certificates", r.certificates},
                 {"conventions", conventions(r)},
                 {"undecided", r.undecided},
                 {"exit_code", code},
                 {"timing_ms", ms}};
        emit(doc.dump(2) + "\n");
    } else {
        emit(render_text(r));
    }
    return code;
}

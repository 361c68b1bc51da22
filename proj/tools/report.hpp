// Report assembly shared by the verbs of the command-line tool.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "whitehead/invariants.hpp"

namespace cli {

using json = nlohmann::json;
using Options = std::map<std::string, std::string>;

struct Report {
    std::string verb;
    Options input;            // resolved inputs, defaults made explicit
    std::vector<std::string> positional;  // option names passed positionally, in order
    json result = json::object();
    json certificates = json::array();
    json roots = json::array();
    std::vector<std::string> text;
    bool undecided = false;
    bool failed = false;      // selftest failures

    void certify(const std::string& claim, const whitehead::Certificate& c);
    void certify(const std::string& claim, whitehead::Provenance p, const std::string& detail);
    void line(const std::string& s) { text.push_back(s); }
    void root(const whitehead::FieldPtr& F, int64_t m);
};

struct Context {
    uint64_t seed = 1;
};

// Each verb reads its options (already resolved) and fills the report.
void run_sk1(Report& r, const Context& ctx);
void run_invariant(Report& r, const Context& ctx);
void run_residue(Report& r, const Context& ctx);
void run_form(Report& r, const Context& ctx);
void run_wittvec(Report& r, const Context& ctx);
void run_lift(Report& r, const Context& ctx);
void run_bounds(Report& r, const Context& ctx);
void run_centre(Report& r, const Context& ctx);
void run_selftest(Report& r, const Context& ctx);

// Named constants p (residue prime) and u (least unit that is not an m-th power) for
// towers over Q_p; empty otherwise.
std::map<std::string, whitehead::Elem> standard_symbols(const whitehead::FieldPtr& F, int64_t m);

}  // namespace cli

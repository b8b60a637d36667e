// config.cpp — Strict JSON scenario loading: exact keys, typed fields, anchored errors

#include "spintrans/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spintrans/hamiltonian.hpp"

namespace spintrans {
namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" (quoted) in the config text;
// 0 when the key never appears literally (e.g. it came from an override).
int line_of_key(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const std::size_t pos = text.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

struct Context {
    const std::string& text;
    const std::string& label;

    [[noreturn]] void fail(const std::string& anchor_key, const std::string& msg) const {
        std::ostringstream os;
        os << label;
        if (const int line = line_of_key(text, anchor_key); line > 0) os << ":" << line;
        os << ": " << msg;
        throw config_error(os.str());
    }

    void check_keys(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) const {
        for (const auto& [key, value] : obj.items()) {
            bool known = false;
            for (const char* name : allowed) known = known || key == name;
            if (!known) {
                const std::string path = section.empty() ? key : section + "." + key;
                fail(key, "unknown key \"" + path + "\"");
            }
        }
    }

    double number(const json& obj, const std::string& section, const std::string& key,
                  double fallback, bool required = false) const {
        if (!obj.contains(key)) {
            if (required) fail(section, "missing required key \"" + section + "." + key + "\"");
            return fallback;
        }
        if (!obj.at(key).is_number()) {
            fail(key, "\"" + section + "." + key + "\" must be a number");
        }
        return obj.at(key).get<double>();
    }

    int integer(const json& obj, const std::string& section, const std::string& key,
                int fallback) const {
        if (!obj.contains(key)) return fallback;
        if (!obj.at(key).is_number_integer()) {
            fail(key, "\"" + section + "." + key + "\" must be an integer");
        }
        return obj.at(key).get<int>();
    }

    const json* object(const json& root, const std::string& key) const {
        if (!root.contains(key)) return nullptr;
        if (!root.at(key).is_object()) fail(key, "\"" + key + "\" must be an object");
        return &root.at(key);
    }
};

void apply_override(json& root, const Override& o) {
    json* cur = &root;
    std::string rest = o.path;
    for (std::size_t dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
        const std::string head = rest.substr(0, dot);
        rest = rest.substr(dot + 1);
        if (head.empty() || rest.empty()) {
            throw config_error("override \"" + o.path + "\": empty path segment");
        }
        if (!cur->contains(head)) (*cur)[head] = json::object();
        cur = &(*cur)[head];
        if (!cur->is_object()) {
            throw config_error("override \"" + o.path + "\": \"" + head +
                               "\" is not an object");
        }
    }
    // Values parse as JSON when they can (numbers, lists, booleans), else as strings.
    json value = json::parse(o.value, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = o.value;
    (*cur)[rest] = std::move(value);
}

SystemSpec read_system(const Context& ctx, const json* obj) {
    SystemSpec spec;
    spec.omega_big.assign(1, 0.0);
    if (obj == nullptr) return spec;
    ctx.check_keys(*obj, "system",
                   {"n_chains", "chain_len", "omega0", "j_coupling", "r_index", "omega_big"});
    spec.n_chains = ctx.integer(*obj, "system", "n_chains", 1);
    spec.chain_len = ctx.integer(*obj, "system", "chain_len", 1);
    spec.omega0 = ctx.number(*obj, "system", "omega0", 1.0);
    spec.j_coupling = ctx.number(*obj, "system", "j_coupling", 0.1);
    spec.r_index = ctx.integer(*obj, "system", "r_index", 1);

    // One number broadcasts to every chain; a list sets couplings per chain.
    spec.omega_big.assign(static_cast<std::size_t>(std::max(spec.n_chains, 0)), 0.0);
    if (obj->contains("omega_big")) {
        const json& v = obj->at("omega_big");
        if (v.is_number()) {
            spec.omega_big.assign(static_cast<std::size_t>(std::max(spec.n_chains, 0)),
                                  v.get<double>());
        } else if (v.is_array()) {
            spec.omega_big.clear();
            for (const json& entry : v) {
                if (!entry.is_number()) {
                    ctx.fail("omega_big", "\"system.omega_big\" entries must be numbers");
                }
                spec.omega_big.push_back(entry.get<double>());
            }
        } else {
            ctx.fail("omega_big", "\"system.omega_big\" must be a number or a list");
        }
    }
    return spec;
}

SinkSpec read_sink(const Context& ctx, const json* obj, const SystemSpec& spec) {
    SinkSpec sink{0.0, spec.chain_len};
    if (obj == nullptr) return sink;
    ctx.check_keys(*obj, "sink", {"gamma_sink", "attach_site"});
    sink.gamma_sink = ctx.number(*obj, "sink", "gamma_sink", 0.0);
    sink.attach_site = ctx.integer(*obj, "sink", "attach_site", spec.chain_len);
    return sink;
}

SpectralDensity read_reservoir(const Context& ctx, const json* obj,
                               std::vector<std::string>& warnings) {
    if (obj == nullptr) {
        ctx.fail("reservoir", "missing required object \"reservoir\"");
    }
    std::string kind = "lorentzian";
    if (obj->contains("kind")) {
        if (!obj->at("kind").is_string()) {
            ctx.fail("kind", "\"reservoir.kind\" must be a string");
        }
        kind = obj->at("kind").get<std::string>();
    }

    std::vector<LorentzianTerm> terms;
    if (kind == "lorentzian") {
        ctx.check_keys(*obj, "reservoir", {"kind", "omega_c", "gamma"});
        LorentzianTerm term;
        term.weight = 1.0;
        term.omega_c = ctx.number(*obj, "reservoir", "omega_c", 0.0, /*required=*/true);
        term.gamma = ctx.number(*obj, "reservoir", "gamma", 0.0, /*required=*/true);
        if (!(term.gamma > 0.0)) ctx.fail("gamma", "\"reservoir.gamma\" must be > 0");
        return SpectralDensity::lorentzian(term.omega_c, term.gamma);
    }
    if (kind != "sum") {
        ctx.fail("kind", "\"reservoir.kind\" must be \"lorentzian\" or \"sum\"");
    }
    ctx.check_keys(*obj, "reservoir", {"kind", "terms"});
    if (!obj->contains("terms") || !obj->at("terms").is_array() || obj->at("terms").empty()) {
        ctx.fail("terms", "\"reservoir.terms\" must be a non-empty list of [weight, "
                          "omega_c, gamma] triples");
    }
    double weight_sum = 0.0;
    for (const json& entry : obj->at("terms")) {
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number() ||
            !entry[1].is_number() || !entry[2].is_number()) {
            ctx.fail("terms", "\"reservoir.terms\" entries must be [weight, omega_c, "
                              "gamma] number triples");
        }
        LorentzianTerm term{entry[0].get<double>(), entry[1].get<double>(),
                            entry[2].get<double>()};
        if (term.weight < 0.0) ctx.fail("terms", "\"reservoir.terms\" weights must be >= 0");
        if (!(term.gamma > 0.0)) ctx.fail("terms", "\"reservoir.terms\" widths must be > 0");
        weight_sum += term.weight;
        terms.push_back(term);
    }
    if (!(weight_sum > 0.0)) {
        ctx.fail("terms", "\"reservoir.terms\" weights must not all vanish");
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "reservoir weights rescaled to unit sum (configured sum = " << weight_sum
           << ")";
        warnings.push_back(os.str());
    }
    return SpectralDensity::sum(std::move(terms));
}

RunConfig read_run(const Context& ctx, const json* obj) {
    if (obj == nullptr) ctx.fail("run", "missing required object \"run\"");
    ctx.check_keys(*obj, "run",
                   {"t_final", "sample_count", "abs_tol", "rel_tol", "initial_site"});
    RunConfig run;
    run.t_final = ctx.number(*obj, "run", "t_final", 0.0, /*required=*/true);
    run.sample_count = ctx.integer(*obj, "run", "sample_count", run.sample_count);
    run.abs_tol = ctx.number(*obj, "run", "abs_tol", run.abs_tol);
    run.rel_tol = ctx.number(*obj, "run", "rel_tol", run.rel_tol);
    run.initial_site = ctx.integer(*obj, "run", "initial_site", run.initial_site);
    return run;
}

}  // namespace

Override parse_override(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
        throw config_error("override \"" + text + "\": expected key=value");
    }
    return Override{text.substr(0, eq), text.substr(eq + 1)};
}

Scenario parse_scenario(const std::string& text, const std::string& label,
                        const std::vector<Override>& overrides) {
    json root;
    try {
        root = json::parse(text, nullptr, /*allow_exceptions=*/true,
                           /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        // e.what() already carries "parse error at line L, column C"; drop the tag.
        std::string what = e.what();
        if (const std::size_t cut = what.find("] "); cut != std::string::npos) {
            what = what.substr(cut + 2);
        }
        throw config_error(label + ": " + what);
    }
    if (!root.is_object()) {
        throw config_error(label + ": top level must be an object");
    }
    for (const Override& o : overrides) apply_override(root, o);

    const Context ctx{text, label};
    ctx.check_keys(root, "", {"system", "sink", "reservoir", "run"});

    Scenario scenario;
    scenario.system = read_system(ctx, ctx.object(root, "system"));
    scenario.sink = read_sink(ctx, ctx.object(root, "sink"), scenario.system);
    scenario.reservoir = read_reservoir(ctx, ctx.object(root, "reservoir"),
                                        scenario.warnings);
    scenario.run = read_run(ctx, ctx.object(root, "run"));

    ValidationReport report = validate_spec(scenario.system, scenario.sink);
    const ValidationReport run_report = validate_run(scenario.run);
    report.violations.insert(report.violations.end(), run_report.violations.begin(),
                             run_report.violations.end());
    if (scenario.run.initial_site > scenario.system.chain_len) {
        report.violations.push_back("initial_site out of range");
    }
    if (!report.ok()) {
        // Each violation message starts with the offending key; anchor on the first.
        const std::string& first = report.violations.front();
        const std::string key = first.substr(0, first.find(' '));
        ctx.fail(key, "invalid configuration: " + report.joined());
    }

    // The extended dimension is fixed by the config; reject oversize systems here so
    // the failure reads as a configuration problem.
    const int n_pm = extract_pseudomodes(scenario.reservoir).size();
    const int dim = state_dimension(scenario.system, n_pm);
    if (dim > kDimensionCap) {
        std::ostringstream os;
        os << "dimension cap exceeded: extended dimension " << dim << " > " << kDimensionCap;
        ctx.fail("system", os.str());
    }
    return scenario;
}

Scenario load_scenario(const std::string& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path, overrides);
}

}  // namespace spintrans

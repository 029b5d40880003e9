#include "jinxin/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "jinxin/errors.hpp"

namespace jinxin {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_real(const std::string& text) {
    const std::string s = trim(text);
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParameterError("expected a number, got '" + s + "'");
    return x;
}

std::size_t parse_count(const std::string& text) {
    const std::string s = trim(text);
    std::size_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParameterError("expected a non-negative integer, got '" + s + "'");
    return x;
}

bool parse_flag(const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw ParameterError("expected true/false, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    const std::string s = trim(text);
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
    return out;
}

std::string print_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + shortest(v[i]);
    return out;
}

template <class E>
struct EnumName {
    E value;
    const char* name;
};

template <class E, std::size_t N>
E parse_enum(const std::string& text, const EnumName<E> (&names)[N]) {
    const std::string s = trim(text);
    for (const auto& n : names)
        if (s == n.name) return n.value;
    std::string allowed;
    for (const auto& n : names) allowed += (allowed.empty() ? "" : "|") + std::string(n.name);
    throw ParameterError("expected one of " + allowed + ", got '" + s + "'");
}

template <class E, std::size_t N>
std::string print_enum(E v, const EnumName<E> (&names)[N]) {
    for (const auto& n : names)
        if (n.value == v) return n.name;
    return "?";
}

const EnumName<DataKind> kDataKinds[] = {{DataKind::WellPrepared, "well-prepared"},
                                         {DataKind::ConservativeOnly, "conservative-only"}};
const EnumName<SimulateSolver> kSolvers[] = {{SimulateSolver::ConservativeDissipative, "cd"},
                                             {SimulateSolver::Kinetic, "bgk"},
                                             {SimulateSolver::Parabolic, "parabolic"}};
const EnumName<TrajectoryFormat> kFormats[] = {
    {TrajectoryFormat::Csv, "csv"}, {TrajectoryFormat::Binary, "binary"}, {TrajectoryFormat::Both, "both"}};

struct Entry {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
using Field = T& (*)(RunConfig&);

Entry real(const char* s, const char* k, Field<double> f) {
    return {s, k, [f](RunConfig& c, const std::string& v) { f(c) = parse_real(v); },
            [f](const RunConfig& c) { return shortest(f(const_cast<RunConfig&>(c))); }};
}

Entry count(const char* s, const char* k, Field<std::size_t> f) {
    return {s, k, [f](RunConfig& c, const std::string& v) { f(c) = parse_count(v); },
            [f](const RunConfig& c) { return std::to_string(f(const_cast<RunConfig&>(c))); }};
}

Entry flag(const char* s, const char* k, Field<bool> f) {
    return {s, k, [f](RunConfig& c, const std::string& v) { f(c) = parse_flag(v); },
            [f](const RunConfig& c) { return std::string(f(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

Entry list(const char* s, const char* k, Field<std::vector<double>> f) {
    return {s, k, [f](RunConfig& c, const std::string& v) { f(c) = parse_list(v); },
            [f](const RunConfig& c) { return print_list(f(const_cast<RunConfig&>(c))); }};
}

template <class E, std::size_t N>
Entry choice(const char* s, const char* k, Field<E> f, const EnumName<E> (&names)[N]) {
    return {s, k, [f, &names](RunConfig& c, const std::string& v) { f(c) = parse_enum(v, names); },
            [f, &names](const RunConfig& c) { return print_enum(f(const_cast<RunConfig&>(c)), names); }};
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        real("model", "epsilon", [](RunConfig& c) -> double& { return c.model.epsilon; }),
        real("model", "lambda", [](RunConfig& c) -> double& { return c.model.lambda; }),
        real("model", "a", [](RunConfig& c) -> double& { return c.model.a; }),
        {"model", "nonlinearity",
         [](RunConfig& c, const std::string& v) {
             const std::string s = trim(v);
             if (s != "none" && s != "quadratic" && s != "polynomial")
                 throw ParameterError("expected one of none|quadratic|polynomial, got '" + s + "'");
             c.model.h.name = s;
         },
         [](const RunConfig& c) { return c.model.h.name; }},
        list("model", "h_coeffs", [](RunConfig& c) -> std::vector<double>& { return c.model.h.coeffs; }),

        count("grid", "n", [](RunConfig& c) -> std::size_t& { return c.grid_n; }),
        real("grid", "length", [](RunConfig& c) -> double& { return c.grid_length; }),

        real("data", "amplitude", [](RunConfig& c) -> double& { return c.data.amplitude; }),
        real("data", "sigma", [](RunConfig& c) -> double& { return c.data.sigma; }),
        choice("data", "kind", +[](RunConfig& c) -> DataKind& { return c.data.kind; }, kDataKinds),

        real("solver", "dt", [](RunConfig& c) -> double& { return c.dt; }),
        real("solver", "t_final", [](RunConfig& c) -> double& { return c.t_final; }),
        flag("solver", "dealias", [](RunConfig& c) -> bool& { return c.dealias; }),
        real("solver", "blowup_factor", [](RunConfig& c) -> double& { return c.blowup_factor; }),
        list("solver", "record", [](RunConfig& c) -> std::vector<double>& { return c.record; }),

        list("green", "xi", [](RunConfig& c) -> std::vector<double>& { return c.green_xi; }),
        list("green", "t", [](RunConfig& c) -> std::vector<double>& { return c.green_t; }),

        real("decay", "dt", [](RunConfig& c) -> double& { return c.decay.dt; }),
        real("decay", "t_lo", [](RunConfig& c) -> double& { return c.decay.t_lo; }),
        real("decay", "t_hi", [](RunConfig& c) -> double& { return c.decay.t_hi; }),
        count("decay", "samples", [](RunConfig& c) -> std::size_t& { return c.decay.samples; }),
        real("decay", "e2_threshold", [](RunConfig& c) -> double& { return c.decay.e2_threshold; }),
        real("decay", "max_residual", [](RunConfig& c) -> double& { return c.decay.max_residual; }),
        real("decay", "conservative_target", [](RunConfig& c) -> double& { return c.decay.conservative_target; }),
        real("decay", "conservative_tol", [](RunConfig& c) -> double& { return c.decay.conservative_tol; }),
        real("decay", "dissipative_target", [](RunConfig& c) -> double& { return c.decay.dissipative_target; }),
        real("decay", "dissipative_tol", [](RunConfig& c) -> double& { return c.decay.dissipative_tol; }),
        real("decay", "source_target", [](RunConfig& c) -> double& { return c.decay.source_target; }),
        real("decay", "source_tol", [](RunConfig& c) -> double& { return c.decay.source_tol; }),
        real("decay", "m0_growth_limit", [](RunConfig& c) -> double& { return c.decay.m0_growth_limit; }),

        list("epsilon", "epsilons", [](RunConfig& c) -> std::vector<double>& { return c.epsilon.epsilons; }),
        real("epsilon", "t_final", [](RunConfig& c) -> double& { return c.epsilon.t_final; }),
        real("epsilon", "dt", [](RunConfig& c) -> double& { return c.epsilon.dt; }),
        real("epsilon", "parabolic_dt", [](RunConfig& c) -> double& { return c.epsilon.parabolic_dt; }),
        flag("epsilon", "corrected", [](RunConfig& c) -> bool& { return c.epsilon.corrected; }),
        real("epsilon", "profile_epsilon", [](RunConfig& c) -> double& { return c.epsilon.profile_epsilon; }),
        real("epsilon", "profile_t_lo", [](RunConfig& c) -> double& { return c.epsilon.profile_t_lo; }),
        real("epsilon", "profile_t_hi", [](RunConfig& c) -> double& { return c.epsilon.profile_t_hi; }),
        count("epsilon", "profile_samples", [](RunConfig& c) -> std::size_t& { return c.epsilon.profile_samples; }),
        real("epsilon", "profile_dt", [](RunConfig& c) -> double& { return c.epsilon.profile_dt; }),
        real("epsilon", "profile_parabolic_dt",
             [](RunConfig& c) -> double& { return c.epsilon.profile_parabolic_dt; }),
        real("epsilon", "mu", [](RunConfig& c) -> double& { return c.epsilon.mu; }),
        real("epsilon", "slope_target", [](RunConfig& c) -> double& { return c.epsilon.slope_target; }),
        real("epsilon", "slope_tol", [](RunConfig& c) -> double& { return c.epsilon.slope_tol; }),
        real("epsilon", "profile_target", [](RunConfig& c) -> double& { return c.epsilon.profile_target; }),
        real("epsilon", "profile_tol", [](RunConfig& c) -> double& { return c.epsilon.profile_tol; }),
        real("epsilon", "halving_tol", [](RunConfig& c) -> double& { return c.epsilon.halving_tol; }),
        real("epsilon", "max_residual", [](RunConfig& c) -> double& { return c.epsilon.max_residual; }),
        count("epsilon", "jobs", [](RunConfig& c) -> std::size_t& { return c.epsilon.jobs; }),
        count("epsilon", "grid_n", [](RunConfig& c) -> std::size_t& { return c.epsilon_grid_n; }),
        real("epsilon", "grid_length", [](RunConfig& c) -> double& { return c.epsilon_grid_length; }),

        real("bgk", "t_final", [](RunConfig& c) -> double& { return c.bgk.t_final; }),
        real("bgk", "dt", [](RunConfig& c) -> double& { return c.bgk.dt; }),
        real("bgk", "tolerance", [](RunConfig& c) -> double& { return c.bgk.tolerance; }),

        choice("simulate", "solver", +[](RunConfig& c) -> SimulateSolver& { return c.simulate_solver; }, kSolvers),
        choice("simulate", "format", +[](RunConfig& c) -> TrajectoryFormat& { return c.simulate_format; },
               kFormats),
        flag("simulate", "corrected", [](RunConfig& c) -> bool& { return c.simulate_corrected; }),

        {"output", "dir", [](RunConfig& c, const std::string& v) { c.output_dir = trim(v); },
         [](const RunConfig& c) { return c.output_dir; }},
    };
    return table;
}

std::string at_line(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

Grid RunConfig::epsilon_grid() const {
    return Grid(epsilon_grid_n > 0 ? epsilon_grid_n : grid_n,
                epsilon_grid_length > 0.0 ? epsilon_grid_length : grid_length);
}

SolverConfig RunConfig::solver() const {
    SolverConfig s;
    s.dt = dt > 0.0 ? dt : default_time_step(model, grid());
    s.t_final = t_final;
    s.dealias = dealias;
    s.record_times = record;
    s.blowup_factor = blowup_factor;
    return s;
}

void RunConfig::validate() const {
    model.validate();
    const std::string& name = model.h.name;
    if (name == "none" && !model.h.is_zero()) throw ParameterError("nonlinearity = none needs empty h_coeffs");
    if (name == "quadratic" && model.h.coeffs.size() != 1)
        throw ParameterError("nonlinearity = quadratic takes exactly one coefficient");
    (void)grid();
    (void)epsilon_grid();
    if (dt < 0.0) throw ParameterError("dt must be non-negative (0 selects the default)");
    const SolverConfig s = solver();
    s.validate();
    if (s.dt > t_final && t_final > 0.0) throw ParameterError("dt must not exceed t_final");
    if (!(data.sigma > 0.0)) throw ParameterError("data sigma must be positive");
    if (green_xi.empty() || green_t.empty()) throw ParameterError("green-table needs non-empty xi and t lists");
    for (double t : green_t)
        if (t < 0.0) throw ParameterError("green-table times must be non-negative");
    if (epsilon.jobs == 0) throw ParameterError("jobs must be at least 1");
    if (!(bgk.dt > 0.0) || !(bgk.t_final > 0.0)) throw ParameterError("bgk dt and t_final must be positive");
}

RunConfig parse_config(std::istream& is, const std::string& source) {
    RunConfig cfg;
    std::string section;
    std::string raw;
    std::size_t line = 0;
    std::vector<std::string> seen;
    while (std::getline(is, raw)) {
        ++line;
        const auto comment = raw.find_first_of("#;");
        const std::string text = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ParameterError(at_line(source, line) + "malformed section header");
            section = trim(text.substr(1, text.size() - 2));
            const bool known = std::any_of(entries().begin(), entries().end(),
                                           [&](const Entry& e) { return section == e.section; });
            if (!known) throw ParameterError(at_line(source, line) + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParameterError(at_line(source, line) + "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (section.empty()) throw ParameterError(at_line(source, line) + "key '" + key + "' outside a section");
        const auto it = std::find_if(entries().begin(), entries().end(),
                                     [&](const Entry& e) { return section == e.section && key == e.key; });
        if (it == entries().end())
            throw ParameterError(at_line(source, line) + "unknown key '" + key + "' in [" + section + "]");
        const std::string full = section + "." + key;
        if (std::find(seen.begin(), seen.end(), full) != seen.end())
            throw ParameterError(at_line(source, line) + "duplicate key '" + key + "' in [" + section + "]");
        seen.push_back(full);
        try {
            it->set(cfg, value);
        } catch (const ParameterError& e) {
            throw ParameterError(at_line(source, line) + full + ": " + e.what());
        }
    }
    if (cfg.model.h.name == "none" && std::find(seen.begin(), seen.end(), "model.h_coeffs") == seen.end())
        cfg.model.h.coeffs.clear();
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
    std::string section;
    for (const Entry& e : entries()) {
        if (section != e.section) {
            if (!section.empty()) os << '\n';
            section = e.section;
            os << '[' << section << "]\n";
        }
        os << e.key << " = " << e.get(cfg) << '\n';
    }
}

}  // namespace jinxin

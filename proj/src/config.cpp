#include "monodrift/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "monodrift/errors.hpp"

namespace monodrift {

namespace {

struct RawValue {
    enum class Type { Bool, Number, String, NumberArray, StringArray } type;
    bool b = false;
    double num = 0.0;
    std::string str;
    std::vector<double> nums;
    std::vector<std::string> strs;
    int line = 0;
    bool consumed = false;
};

struct KeyDoc {
    const char* key;
    const char* type;
    const char* def;
    const char* desc;
};

// schema: section -> documented keys; drives unknown-key rejection and
// the generated schema file
const std::map<std::string, std::vector<KeyDoc>>& schema() {
    static const std::map<std::string, std::vector<KeyDoc>> s = {
        {"",
         {{"model", "string", "(required)",
           "preset: linear1d | burgers1d | semilinear1d | gl1d | ns2d"},
          {"seed", "integer", "1", "master RNG seed"},
          {"workers", "integer", "0", "worker threads; 0 = flag/env/1"},
          {"eps", "number", "0.01", "noise intensity epsilon"},
          {"eps_list", "number array", "[]", "epsilon sweep (probe)"},
          {"plots", "bool", "false", "also write SVG plots"},
          {"enforce_thresholds", "bool", "true",
           "reject eps >= eps_tilde before running"}}},
        {"space",
         {{"dim", "integer", "32", "1D retained mode count"},
          {"k_max", "integer", "2", "2D wavevector truncation |k| <= k_max"},
          {"frac_alpha", "number", "1.0", "V-weight exponent |k|^(2 alpha)"}}},
        {"params",
         {{"chi", "number", "1.0", "viscosity / dissipation coefficient"},
          {"alpha", "number", "1.0", "gl1d linear reaction rate"},
          {"c", "number", "1.0", "gl1d cubic coefficient"},
          {"gamma0", "number", "0.0", "linear1d declared gamma0; 0 = default"},
          {"convection", "bool", "true", "semilinear1d convection term"}}},
        {"noise",
         {{"kind", "string", "additive", "additive | bounded_mult | decaying_mult"},
          {"columns", "integer", "1", "noise columns on the first K modes"},
          {"amp", "number", "1.0", "uniform column amplitude"},
          {"amps", "number array", "[]", "per-column amplitudes (overrides amp)"},
          {"sigma0", "number", "1.0", "decaying_mult scale"},
          {"kraichnan_amps", "number array", "[]", "transport overlay amplitudes (ns2d)"},
          {"kraichnan_k1", "number array", "[]", "transport wavevector k1 components"},
          {"kraichnan_k2", "number array", "[]", "transport wavevector k2 components"},
          {"kraichnan_trig", "number array", "[]", "transport parity (0 cos, 1 sin)"}}},
        {"grid",
         {{"t0", "number", "0.0", "start time"},
          {"t1", "number", "5.0", "end time"},
          {"dt", "number", "0.001", "step size (1/dt must be an integer)"}}},
        {"init",
         {{"mode", "integer", "-1", "initial state mode index; -1 = zero"},
          {"amp", "number", "1.0", "initial state amplitude"}}},
        {"metric",
         {{"n_max", "integer", "16", "path metric window truncation"},
          {"gamma", "number", "0.0", "exponential weight of the equivalent metric"},
          {"combine", "string", "min", "bracket combination: min | sum"}}},
        {"pullback",
         {{"schedule", "number array", "[2, 4, 8, 16]", "pull-back depths"},
          {"tol", "number", "0.0001", "convergence tolerance on the last distance"},
          {"t_end", "number", "0.0", "window end time"},
          {"dt", "number", "0.001", "step size"}}},
        {"invariant",
         {{"n_draws", "integer", "200", "independent pull-back draws"},
          {"time", "number", "0.0", "evaluation time"}}},
        {"estimates",
         {{"gamma", "number", "0.0", "decay rate; 0 = lambda1*gamma0/4"},
          {"delta", "number", "0.0", "exponent weight; 0 = auto"},
          {"n_paths", "integer", "200", "Monte Carlo paths"},
          {"slack", "number", "1.1", "bound slack factor"}}},
        {"rate",
         {{"t_back", "number", "10.0", "optimization window length"},
          {"dt", "number", "0.001", "step size"},
          {"target_mode", "integer", "0", "endpoint target mode index"},
          {"target_amp", "number", "0.5", "endpoint target amplitude"},
          {"mu", "number array", "[10, 100, 1000]", "penalty continuation schedule"},
          {"max_iters", "integer", "500", "iteration cap per mu stage"},
          {"gap_tol", "number", "0.001", "endpoint gap tolerance"},
          {"grad_tol", "number", "1e-08", "gradient tolerance"}}},
        {"quasipotential",
         {{"t_back", "number", "8.0", "optimization window length"},
          {"dt", "number", "0.005", "step size"},
          {"target_modes", "number array", "[0, 2, 4]", "target mode indices"},
          {"target_amps", "number array", "[0.3, 0.3, 0.3]", "target amplitudes"}}},
        {"probe",
         {{"event", "string", "mode_threshold", "h_ball | mode_threshold"},
          {"level", "number", "0.5", "event radius / level"},
          {"mode_index", "integer", "0", "mode for mode_threshold"},
          {"n_draws", "integer", "10000", "draws per epsilon"}}},
        {"check",
         {{"eps0", "number", "-1.0", "thresholds eps0; -1 = use eps"},
          {"n_samples", "integer", "10000", "audit sample count"},
          {"radius", "number", "2.0", "audit H-ball radius"}}},
    };
    return s;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class Parser {
  public:
    explicit Parser(const std::string& text) { parse(text); }

    std::map<std::pair<std::string, std::string>, RawValue> values;
    std::vector<std::string> errors;

  private:
    void parse(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = find_comment(line);
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    error(lineno, "malformed section header");
                    continue;
                }
                section = trim(line.substr(1, line.size() - 2));
                if (!schema().count(section))
                    error(lineno, "unknown section [" + section + "]");
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) {
                error(lineno, "expected key = value");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty()) {
                error(lineno, "empty key or value");
                continue;
            }
            RawValue rv;
            if (!parse_value(val, rv)) {
                error(lineno, "cannot parse value for '" + qualified(section, key) + "'");
                continue;
            }
            rv.line = lineno;
            if (values.count({section, key})) {
                error(lineno, "duplicate key '" + qualified(section, key) + "'");
                continue;
            }
            if (schema().count(section)) {
                const auto& docs = schema().at(section);
                const bool known = std::any_of(docs.begin(), docs.end(),
                                               [&](const KeyDoc& d) { return key == d.key; });
                if (!known) {
                    error(lineno, "unknown key '" + qualified(section, key) + "'");
                    continue;
                }
            }
            values[{section, key}] = std::move(rv);
        }
    }

    static std::size_t find_comment(const std::string& line) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) return i;
        }
        return std::string::npos;
    }

    static std::string qualified(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    static bool parse_scalar(const std::string& tok, RawValue& rv) {
        if (tok == "true" || tok == "false") {
            rv.type = RawValue::Type::Bool;
            rv.b = tok == "true";
            return true;
        }
        if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
            rv.type = RawValue::Type::String;
            rv.str = tok.substr(1, tok.size() - 2);
            return true;
        }
        char* end = nullptr;
        const double x = std::strtod(tok.c_str(), &end);
        if (end && *end == '\0' && end != tok.c_str()) {
            rv.type = RawValue::Type::Number;
            rv.num = x;
            return true;
        }
        return false;
    }

    static bool parse_value(const std::string& val, RawValue& rv) {
        if (val.front() == '[') {
            if (val.back() != ']') return false;
            const std::string inner = trim(val.substr(1, val.size() - 2));
            rv.type = RawValue::Type::NumberArray;
            if (inner.empty()) return true;
            std::size_t pos = 0;
            while (pos <= inner.size()) {
                std::size_t comma = inner.find(',', pos);
                const std::string tok =
                    trim(comma == std::string::npos ? inner.substr(pos)
                                                    : inner.substr(pos, comma - pos));
                RawValue item;
                if (tok.empty() || !parse_scalar(tok, item)) return false;
                if (item.type == RawValue::Type::Number) {
                    rv.nums.push_back(item.num);
                } else if (item.type == RawValue::Type::String) {
                    rv.type = RawValue::Type::StringArray;
                    rv.strs.push_back(item.str);
                } else {
                    return false;
                }
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return true;
        }
        return parse_scalar(val, rv);
    }

    void error(int line, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ": " + msg);
    }
};

class Reader {
  public:
    Reader(Parser& parser) : p_(parser) {}

    double number(const std::string& sec, const std::string& key, double def) {
        RawValue* rv = find(sec, key);
        if (!rv) return def;
        if (rv->type != RawValue::Type::Number) return type_error(sec, key, *rv, "number"), def;
        return rv->num;
    }
    int integer(const std::string& sec, const std::string& key, int def) {
        RawValue* rv = find(sec, key);
        if (!rv) return def;
        if (rv->type != RawValue::Type::Number ||
            rv->num != std::floor(rv->num))
            return type_error(sec, key, *rv, "integer"), def;
        return static_cast<int>(rv->num);
    }
    std::uint64_t u64(const std::string& sec, const std::string& key, std::uint64_t def) {
        RawValue* rv = find(sec, key);
        if (!rv) return def;
        if (rv->type != RawValue::Type::Number || rv->num < 0 ||
            rv->num != std::floor(rv->num))
            return type_error(sec, key, *rv, "nonnegative integer"), def;
        return static_cast<std::uint64_t>(rv->num);
    }
    bool boolean(const std::string& sec, const std::string& key, bool def) {
        RawValue* rv = find(sec, key);
        if (!rv) return def;
        if (rv->type != RawValue::Type::Bool) return type_error(sec, key, *rv, "bool"), def;
        return rv->b;
    }
    std::string string(const std::string& sec, const std::string& key,
                       const std::string& def) {
        RawValue* rv = find(sec, key);
        if (!rv) return def;
        if (rv->type != RawValue::Type::String)
            return type_error(sec, key, *rv, "string"), def;
        return rv->str;
    }
    std::vector<double> numbers(const std::string& sec, const std::string& key,
                                std::vector<double> def) {
        RawValue* rv = find(sec, key);
        if (!rv) return def;
        if (rv->type != RawValue::Type::NumberArray)
            return type_error(sec, key, *rv, "number array"), def;
        return rv->nums;
    }

    void require(const std::string& sec, const std::string& key, bool ok,
                 const std::string& what) {
        if (!ok)
            errors.push_back("key '" + (sec.empty() ? key : sec + "." + key) + "': " + what);
    }

    std::vector<std::string> errors;

  private:
    RawValue* find(const std::string& sec, const std::string& key) {
        auto it = p_.values.find({sec, key});
        if (it == p_.values.end()) return nullptr;
        it->second.consumed = true;
        return &it->second;
    }
    void type_error(const std::string& sec, const std::string& key, const RawValue& rv,
                    const std::string& want) {
        errors.push_back("line " + std::to_string(rv.line) + ": key '" +
                         (sec.empty() ? key : sec + "." + key) + "' must be a " + want);
    }

    Parser& p_;
};

std::string fmt_number(double x) {
    char buf[64];
    if (x == std::floor(x) && std::abs(x) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.1f", x);
    else
        std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_array(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_number(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "model = \"" << c.model << "\"\n";
    out << "seed = " << c.seed << "\n";
    out << "workers = " << c.workers << "\n";
    out << "eps = " << fmt_number(c.eps) << "\n";
    out << "eps_list = " << fmt_array(c.eps_list) << "\n";
    out << "plots = " << (c.plots ? "true" : "false") << "\n";
    out << "enforce_thresholds = " << (c.enforce_thresholds ? "true" : "false") << "\n";
    out << "\n[space]\ndim = " << c.dim << "\nk_max = " << c.k_max
        << "\nfrac_alpha = " << fmt_number(c.frac_alpha) << "\n";
    out << "\n[params]\nchi = " << fmt_number(c.chi) << "\nalpha = " << fmt_number(c.alpha)
        << "\nc = " << fmt_number(c.c) << "\ngamma0 = " << fmt_number(c.gamma0)
        << "\nconvection = " << (c.convection ? "true" : "false") << "\n";
    out << "\n[noise]\nkind = \"" << c.noise_kind << "\"\ncolumns = " << c.noise_columns
        << "\namp = " << fmt_number(c.noise_amp) << "\namps = " << fmt_array(c.noise_amps)
        << "\nsigma0 = " << fmt_number(c.sigma0)
        << "\nkraichnan_amps = " << fmt_array(c.kraichnan_amps)
        << "\nkraichnan_k1 = " << fmt_array(c.kraichnan_k1)
        << "\nkraichnan_k2 = " << fmt_array(c.kraichnan_k2)
        << "\nkraichnan_trig = " << fmt_array(c.kraichnan_trig) << "\n";
    out << "\n[grid]\nt0 = " << fmt_number(c.t0) << "\nt1 = " << fmt_number(c.t1)
        << "\ndt = " << fmt_number(c.dt) << "\n";
    out << "\n[init]\nmode = " << c.init_mode << "\namp = " << fmt_number(c.init_amp) << "\n";
    out << "\n[metric]\nn_max = " << c.metric_n_max
        << "\ngamma = " << fmt_number(c.metric_gamma) << "\ncombine = \"" << c.metric_combine
        << "\"\n";
    out << "\n[pullback]\nschedule = " << fmt_array(c.schedule)
        << "\ntol = " << fmt_number(c.pb_tol) << "\nt_end = " << fmt_number(c.pb_t_end)
        << "\ndt = " << fmt_number(c.pb_dt) << "\n";
    out << "\n[invariant]\nn_draws = " << c.inv_draws << "\ntime = " << fmt_number(c.inv_time)
        << "\n";
    out << "\n[estimates]\ngamma = " << fmt_number(c.est_gamma)
        << "\ndelta = " << fmt_number(c.est_delta) << "\nn_paths = " << c.est_paths
        << "\nslack = " << fmt_number(c.est_slack) << "\n";
    out << "\n[rate]\nt_back = " << fmt_number(c.rate_t_back)
        << "\ndt = " << fmt_number(c.rate_dt) << "\ntarget_mode = " << c.rate_target_mode
        << "\ntarget_amp = " << fmt_number(c.rate_target_amp)
        << "\nmu = " << fmt_array(c.rate_mu) << "\nmax_iters = " << c.rate_max_iters
        << "\ngap_tol = " << fmt_number(c.rate_gap_tol)
        << "\ngrad_tol = " << fmt_number(c.rate_grad_tol) << "\n";
    out << "\n[quasipotential]\nt_back = " << fmt_number(c.qp_t_back)
        << "\ndt = " << fmt_number(c.qp_dt)
        << "\ntarget_modes = " << fmt_array(c.qp_target_modes)
        << "\ntarget_amps = " << fmt_array(c.qp_target_amps) << "\n";
    out << "\n[probe]\nevent = \"" << c.probe_event
        << "\"\nlevel = " << fmt_number(c.probe_level)
        << "\nmode_index = " << c.probe_mode_index << "\nn_draws = " << c.probe_draws << "\n";
    out << "\n[check]\neps0 = " << fmt_number(c.check_eps0)
        << "\nn_samples = " << c.check_samples << "\nradius = " << fmt_number(c.check_radius)
        << "\n";
    return out.str();
}

RunConfig parse_config_text(const std::string& text) {
    Parser parser(text);
    Reader r(parser);
    RunConfig c;

    c.model = r.string("", "model", "");
    c.seed = r.u64("", "seed", 1);
    c.workers = r.integer("", "workers", 0);
    c.eps = r.number("", "eps", 0.01);
    c.eps_list = r.numbers("", "eps_list", {});
    c.plots = r.boolean("", "plots", false);
    c.enforce_thresholds = r.boolean("", "enforce_thresholds", true);

    c.dim = r.integer("space", "dim", 32);
    c.k_max = r.integer("space", "k_max", 2);
    c.frac_alpha = r.number("space", "frac_alpha", 1.0);

    c.chi = r.number("params", "chi", 1.0);
    c.alpha = r.number("params", "alpha", 1.0);
    c.c = r.number("params", "c", 1.0);
    c.gamma0 = r.number("params", "gamma0", 0.0);
    c.convection = r.boolean("params", "convection", true);

    c.noise_kind = r.string("noise", "kind", "additive");
    c.noise_columns = r.integer("noise", "columns", 1);
    c.noise_amp = r.number("noise", "amp", 1.0);
    c.noise_amps = r.numbers("noise", "amps", {});
    c.sigma0 = r.number("noise", "sigma0", 1.0);
    c.kraichnan_amps = r.numbers("noise", "kraichnan_amps", {});
    c.kraichnan_k1 = r.numbers("noise", "kraichnan_k1", {});
    c.kraichnan_k2 = r.numbers("noise", "kraichnan_k2", {});
    c.kraichnan_trig = r.numbers("noise", "kraichnan_trig", {});

    c.t0 = r.number("grid", "t0", 0.0);
    c.t1 = r.number("grid", "t1", 5.0);
    c.dt = r.number("grid", "dt", 1e-3);

    c.init_mode = r.integer("init", "mode", -1);
    c.init_amp = r.number("init", "amp", 1.0);

    c.metric_n_max = r.integer("metric", "n_max", 16);
    c.metric_gamma = r.number("metric", "gamma", 0.0);
    c.metric_combine = r.string("metric", "combine", "min");

    c.schedule = r.numbers("pullback", "schedule", {2, 4, 8, 16});
    c.pb_tol = r.number("pullback", "tol", 1e-4);
    c.pb_t_end = r.number("pullback", "t_end", 0.0);
    c.pb_dt = r.number("pullback", "dt", 1e-3);

    c.inv_draws = r.integer("invariant", "n_draws", 200);
    c.inv_time = r.number("invariant", "time", 0.0);

    c.est_gamma = r.number("estimates", "gamma", 0.0);
    c.est_delta = r.number("estimates", "delta", 0.0);
    c.est_paths = r.integer("estimates", "n_paths", 200);
    c.est_slack = r.number("estimates", "slack", 1.1);

    c.rate_t_back = r.number("rate", "t_back", 10.0);
    c.rate_dt = r.number("rate", "dt", 1e-3);
    c.rate_target_mode = r.integer("rate", "target_mode", 0);
    c.rate_target_amp = r.number("rate", "target_amp", 0.5);
    c.rate_mu = r.numbers("rate", "mu", {10.0, 100.0, 1000.0});
    c.rate_max_iters = r.integer("rate", "max_iters", 500);
    c.rate_gap_tol = r.number("rate", "gap_tol", 1e-3);
    c.rate_grad_tol = r.number("rate", "grad_tol", 1e-8);

    c.qp_t_back = r.number("quasipotential", "t_back", 8.0);
    c.qp_dt = r.number("quasipotential", "dt", 5e-3);
    c.qp_target_modes = r.numbers("quasipotential", "target_modes", {0, 2, 4});
    c.qp_target_amps = r.numbers("quasipotential", "target_amps", {0.3, 0.3, 0.3});

    c.probe_event = r.string("probe", "event", "mode_threshold");
    c.probe_level = r.number("probe", "level", 0.5);
    c.probe_mode_index = r.integer("probe", "mode_index", 0);
    c.probe_draws = r.integer("probe", "n_draws", 10000);

    c.check_eps0 = r.number("check", "eps0", -1.0);
    c.check_samples = r.integer("check", "n_samples", 10000);
    c.check_radius = r.number("check", "radius", 2.0);

    // range validation (collected, not fail-fast)
    static const std::vector<std::string> kModels = {"linear1d", "burgers1d", "semilinear1d",
                                                     "gl1d", "ns2d"};
    r.require("", "model", !c.model.empty(), "is required");
    if (!c.model.empty())
        r.require("", "model",
                  std::find(kModels.begin(), kModels.end(), c.model) != kModels.end(),
                  "unknown preset '" + c.model + "'");
    r.require("", "eps", c.eps >= 0.0, "must be nonnegative");
    r.require("space", "dim", c.dim >= 1, "must be >= 1");
    r.require("space", "k_max", c.k_max >= 1, "must be >= 1");
    r.require("params", "chi", c.chi > 0.0, "must be positive");
    r.require("grid", "dt", c.dt > 0.0, "must be positive");
    r.require("grid", "t1", c.t1 > c.t0, "must exceed grid.t0");
    r.require("noise", "kind",
              c.noise_kind == "additive" || c.noise_kind == "bounded_mult" ||
                  c.noise_kind == "decaying_mult",
              "unknown kind '" + c.noise_kind + "'");
    r.require("noise", "columns", c.noise_columns >= 1, "must be >= 1");
    r.require("metric", "combine", c.metric_combine == "min" || c.metric_combine == "sum",
              "must be 'min' or 'sum'");
    r.require("pullback", "dt", c.pb_dt > 0.0, "must be positive");
    r.require("pullback", "schedule", !c.schedule.empty(), "must not be empty");
    for (std::size_t i = 0; i + 1 < c.schedule.size(); ++i)
        r.require("pullback", "schedule", c.schedule[i] < c.schedule[i + 1],
                  "must be strictly increasing");
    r.require("invariant", "n_draws", c.inv_draws >= 1, "must be >= 1");
    r.require("estimates", "n_paths", c.est_paths >= 1, "must be >= 1");
    r.require("rate", "dt", c.rate_dt > 0.0, "must be positive");
    r.require("rate", "t_back", c.rate_t_back > 0.0, "must be positive");
    r.require("quasipotential", "target_modes",
              c.qp_target_modes.size() == c.qp_target_amps.size(),
              "must match target_amps in length");
    r.require("probe", "event",
              c.probe_event == "h_ball" || c.probe_event == "mode_threshold",
              "must be 'h_ball' or 'mode_threshold'");
    r.require("probe", "n_draws", c.probe_draws >= 1, "must be >= 1");
    r.require("noise", "kraichnan_amps",
              c.kraichnan_amps.size() == c.kraichnan_k1.size() &&
                  c.kraichnan_amps.size() == c.kraichnan_k2.size() &&
                  (c.kraichnan_trig.empty() ||
                   c.kraichnan_trig.size() == c.kraichnan_amps.size()),
              "kraichnan arrays must have matching lengths");

    std::vector<std::string> all_errors = parser.errors;
    all_errors.insert(all_errors.end(), r.errors.begin(), r.errors.end());
    if (!all_errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : all_errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    c.resolved = serialize_config(c);
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_schema_text() {
    std::ostringstream out;
    out << "# monodrift configuration schema (generated)\n"
        << "# every key with its type and default; unknown keys are rejected\n";
    for (const auto& [section, keys] : schema()) {
        if (!section.empty()) out << "\n[" << section << "]\n";
        for (const auto& d : keys)
            out << d.key << "  (" << d.type << ", default " << d.def << "): " << d.desc
                << "\n";
    }
    return out.str();
}

}  // namespace monodrift

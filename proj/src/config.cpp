#include "bhcav/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace bhcav {

namespace {

struct Value {
    enum class Kind { number, string, boolean } kind = Kind::string;
    std::string text;  // raw token (unquoted for strings)
    double number = 0.0;
    bool boolean = false;
    int line = 0;
};

using Section = std::map<std::string, Value>;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

Value parse_value(std::string_view raw, int line) {
    Value v;
    v.line = line;
    if (raw.empty()) throw ConfigError(line, "missing value");
    if (raw.front() == '"') {
        const auto close = raw.find('"', 1);
        if (close == std::string_view::npos) throw ConfigError(line, "unterminated string");
        const auto rest = trim(raw.substr(close + 1));
        if (!rest.empty() && rest.front() != '#' && rest.front() != ';')
            throw ConfigError(line, "unexpected text after string value");
        v.text = std::string(raw.substr(1, close - 1));
        return v;
    }
    const auto cut = raw.find_first_of("#;");
    const auto token = trim(raw.substr(0, cut));
    if (token.empty()) throw ConfigError(line, "missing value");
    v.text = std::string(token);
    if (token == "true" || token == "false") {
        v.kind = Value::Kind::boolean;
        v.boolean = token == "true";
        return v;
    }
    if (parse_double(token, v.number)) {
        v.kind = Value::Kind::number;
        return v;
    }
    for (char c : token)
        if (!is_word_char(c)) throw ConfigError(line, "malformed value '" + std::string(token) + "'");
    return v;
}

const std::map<std::string, std::set<std::string>>& grammar() {
    static const std::map<std::string, std::set<std::string>> g{
        {"run", {"preset", "variant", "format", "seed", "seeds", "out"}},
        {"scaled",
         {"u", "u_g", "u_e", "u_eg", "u_eg_g", "u_eg_e", "F", "eps_c", "eps_c_g", "eps_c_e", "eps_g",
          "eps_e", "hopping_ratio"}},
        {"physical", {"J_g", "J_e", "U_g", "U_e", "U_eg", "f_sq", "eps_g", "eps_e", "eps_c", "z"}},
        {"occupations", {"list"}},
        {"axis", {"name", "min", "max", "samples"}},
        {"mu_axis", {"min", "max", "samples"}},
        {"solver",
         {"species", "component", "mu_other", "bracket_min", "bracket_max", "hopping_weight",
          "scan_points"}},
    };
    return g;
}

double number(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::number) throw ConfigError(v.line, "'" + key + "' must be a number");
    return v.number;
}

long long integer(const Value& v, const std::string& key) {
    const double x = number(v, key);
    if (x != std::floor(x) || std::abs(x) > 9.0e15)
        throw ConfigError(v.line, "'" + key + "' must be an integer");
    return static_cast<long long>(x);
}

std::string text(const Value& v, const std::string& key) {
    if (v.kind == Value::Kind::boolean) throw ConfigError(v.line, "'" + key + "' must be a string");
    return v.text;
}

void apply_scaled(const Section& s, ScaledParams& sp) {
    auto num = [&](const char* key, std::initializer_list<double*> targets) {
        auto it = s.find(key);
        if (it == s.end()) return;
        const double x = number(it->second, key);
        for (double* t : targets) *t = x;
    };
    num("u", {&sp.u_g, &sp.u_e});
    num("u_eg", {&sp.u_eg_g, &sp.u_eg_e});
    num("eps_c", {&sp.eps_c_g, &sp.eps_c_e});
    num("u_g", {&sp.u_g});
    num("u_e", {&sp.u_e});
    num("u_eg_g", {&sp.u_eg_g});
    num("u_eg_e", {&sp.u_eg_e});
    num("eps_c_g", {&sp.eps_c_g});
    num("eps_c_e", {&sp.eps_c_e});
    num("F", {&sp.F});
    num("eps_g", {&sp.eps_g_s});
    num("eps_e", {&sp.eps_e_s});
    num("hopping_ratio", {&sp.hopping_ratio});
    if (!(sp.hopping_ratio > 0.0)) throw ConfigError(s.at("hopping_ratio").line, "hopping_ratio must be > 0");
    if (sp.F < 0.0) throw ConfigError(s.at("F").line, "F must be >= 0");
}

PhysicalParams read_physical(const Section& s) {
    PhysicalParams p;
    auto num = [&](const char* key, double& target) {
        if (auto it = s.find(key); it != s.end()) target = number(it->second, key);
    };
    num("J_g", p.J_g);
    num("J_e", p.J_e);
    num("U_g", p.U_g);
    num("U_e", p.U_e);
    num("U_eg", p.U_eg);
    num("f_sq", p.f_sq);
    num("eps_g", p.eps_g);
    num("eps_e", p.eps_e);
    num("eps_c", p.eps_c);
    if (auto it = s.find("z"); it != s.end()) p.z = static_cast<int>(integer(it->second, "z"));
    return p;
}

AxisSpec read_axis(const Section& s, const char* section, bool named) {
    AxisSpec a;
    auto need = [&](const char* key) -> const Value& {
        auto it = s.find(key);
        if (it == s.end()) throw ConfigError(0, std::string("[") + section + "] needs '" + key + "'");
        return it->second;
    };
    if (named) {
        a.name = text(need("name"), "name");
        if (!parse_sweep_axis(a.name))
            throw ConfigError(need("name").line, "unknown axis name '" + a.name + "'");
    } else {
        a.name = "mu";
    }
    a.lo = number(need("min"), "min");
    a.hi = number(need("max"), "max");
    a.samples = static_cast<int>(integer(need("samples"), "samples"));
    const int line = need("samples").line;
    if (a.samples < 1) throw ConfigError(line, std::string("[") + section + "] samples must be >= 1");
    if (!named && a.samples < 2) throw ConfigError(line, "[mu_axis] samples must be >= 2");
    if (a.samples > 1 && !(a.hi > a.lo))
        throw ConfigError(need("max").line, std::string("[") + section + "] range is empty");
    return a;
}

}  // namespace

ScaledParams RunConfig::resolved_params() const {
    if (scaled) return *scaled;
    if (physical) return scale(*physical);
    throw ValidationError("config: no parameter block");
}

std::vector<Occupation> parse_occupation_list(const std::string& list) {
    std::vector<Occupation> out;
    std::string_view rest = list;
    while (!trim(rest).empty()) {
        const auto semi = rest.find(';');
        const auto item = trim(rest.substr(0, semi));
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        std::vector<double> parts;
        std::string_view fields = item;
        for (;;) {
            const auto comma = fields.find(',');
            double x = 0.0;
            if (!parse_double(trim(fields.substr(0, comma)), x))
                throw ValidationError("occupation '" + std::string(item) + "' is malformed");
            parts.push_back(x);
            if (comma == std::string_view::npos) break;
            fields = fields.substr(comma + 1);
        }
        if (parts.size() != 3)
            throw ValidationError("occupation '" + std::string(item) + "' needs n_g,n_e,n_c");
        if (parts[0] != std::floor(parts[0]) || parts[1] != std::floor(parts[1]))
            throw ValidationError("occupation '" + std::string(item) + "': n_g, n_e must be integers");
        Occupation occ{static_cast<int>(parts[0]), static_cast<int>(parts[1]), parts[2]};
        validate(occ);
        out.push_back(occ);
    }
    return out;
}

void validate(const RunConfig& cfg, bool require_model) {
    if (cfg.physical && cfg.scaled)
        throw ConfigError(0, "both physical and scaled parameter blocks are present");
    if (require_model) {
        if (!cfg.physical && !cfg.scaled)
            throw ConfigError(0, "exactly one of [physical], [scaled] or a preset is required");
        if (cfg.occupations.empty()) throw ConfigError(0, "occupation list is empty");
    }
    if (cfg.physical) {
        try {
            validate(*cfg.physical);
        } catch (const ValidationError& e) {
            throw ConfigError(0, e.what());
        }
    }
    if (cfg.solver.bracket && !(cfg.solver.bracket->hi > cfg.solver.bracket->lo))
        throw ConfigError(0, "solver bracket is empty");
    if (cfg.solver.scan_points < 2) throw ConfigError(0, "scan_points must be >= 2");
    if (!(cfg.solver.hopping_weight >= 0.0)) throw ConfigError(0, "hopping_weight must be >= 0");
    if (cfg.seeds && *cfg.seeds < 1) throw ConfigError(0, "seeds must be >= 1");
}

RunConfig parse_config(std::string_view input, const ParseOptions& opts) {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_line;
    Section* current = nullptr;
    std::string current_name;
    int line_no = 0;
    std::size_t pos = 0;
    for (bool more = true; more;) {
        const auto nl = input.find('\n', pos);
        more = nl != std::string_view::npos;
        const auto line = trim(input.substr(pos, more ? nl - pos : std::string_view::npos));
        pos = more ? nl + 1 : input.size();
        ++line_no;
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string_view::npos) throw ConfigError(line_no, "unterminated section header");
            const auto after = trim(line.substr(close + 1));
            if (!after.empty() && after.front() != '#' && after.front() != ';')
                throw ConfigError(line_no, "unexpected text after section header");
            current_name = std::string(trim(line.substr(1, close - 1)));
            if (!grammar().count(current_name))
                throw ConfigError(line_no, "unknown section [" + current_name + "]");
            if (sections.count(current_name))
                throw ConfigError(line_no, "repeated section [" + current_name + "]");
            current = &sections[current_name];
            section_line[current_name] = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        if (!current) throw ConfigError(line_no, "entry outside of a section");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (!grammar().at(current_name).count(key))
            throw ConfigError(line_no, "unknown key '" + key + "' in [" + current_name + "]");
        if (current->count(key))
            throw ConfigError(line_no, "repeated key '" + key + "' in [" + current_name + "]");
        (*current)[key] = parse_value(trim(line.substr(eq + 1)), line_no);
    }

    RunConfig cfg;
    auto get = [&](const std::string& sec, const std::string& key) -> const Value* {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };

    if (const Value* v = get("run", "preset")) {
        cfg.preset = text(*v, "preset");
        if (opts.base_preset && *opts.base_preset != *cfg.preset)
            throw ConfigError(v->line, "preset '" + *cfg.preset + "' conflicts with '" +
                                           *opts.base_preset + "'");
    } else if (opts.base_preset) {
        cfg.preset = opts.base_preset;
    }
    std::optional<FigurePreset> preset;
    if (cfg.preset) {
        try {
            preset = figure_preset(*cfg.preset);
        } catch (const ValidationError& e) {
            const Value* v = get("run", "preset");
            throw ConfigError(v ? v->line : 0, e.what());
        }
        cfg.variant = preset->variant;
        cfg.scaled = preset->params;
        cfg.occupations = preset->occupations;
    }
    if (const Value* v = get("run", "variant")) {
        auto parsed = parse_model_variant(text(*v, "variant"));
        if (!parsed) throw ConfigError(v->line, "unknown variant '" + v->text + "'");
        cfg.variant = parsed;
    }
    if (const Value* v = get("run", "format")) {
        const auto f = text(*v, "format");
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw ConfigError(v->line, "format must be csv or json");
    }
    if (const Value* v = get("run", "seed")) {
        std::uint64_t seed = 0;
        const auto& t = v->text;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), seed);
        if (v->kind != Value::Kind::number || res.ec != std::errc() || res.ptr != t.data() + t.size())
            throw ConfigError(v->line, "seed must be a non-negative integer");
        cfg.seed = seed;
    }
    if (const Value* v = get("run", "seeds")) cfg.seeds = static_cast<int>(integer(*v, "seeds"));
    if (const Value* v = get("run", "out")) cfg.out = text(*v, "out");

    if (sections.count("physical")) {
        if (!opts.allow_physical)
            throw ConfigError(section_line["physical"], "[physical] requires the --physical flag");
        if (preset || sections.count("scaled"))
            throw ConfigError(section_line["physical"],
                              "both physical and scaled parameter blocks are present");
        cfg.physical = read_physical(sections["physical"]);
    }
    if (sections.count("scaled")) {
        ScaledParams sp = cfg.scaled.value_or(ScaledParams{});
        apply_scaled(sections["scaled"], sp);
        cfg.scaled = sp;
    }
    if (const Value* v = get("occupations", "list")) {
        try {
            cfg.occupations = parse_occupation_list(text(*v, "list"));
        } catch (const ConfigError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ConfigError(v->line, e.what());
        }
        if (cfg.occupations.empty()) throw ConfigError(v->line, "occupation list is empty");
    }
    if (sections.count("axis")) cfg.axis = read_axis(sections["axis"], "axis", true);
    if (sections.count("mu_axis")) cfg.mu_axis = read_axis(sections["mu_axis"], "mu_axis", false);

    if (const Value* v = get("solver", "species")) {
        const auto s = text(*v, "species");
        if (s == "ground") cfg.solver.species = Species::ground;
        else if (s == "excited") cfg.solver.species = Species::excited;
        else throw ConfigError(v->line, "species must be ground or excited");
    }
    if (const Value* v = get("solver", "component")) {
        const auto c = text(*v, "component");
        if (c == "phi_g") cfg.solver.coefficient = Coefficient::phi_g;
        else if (c == "phi_e") cfg.solver.coefficient = Coefficient::phi_e;
        else throw ConfigError(v->line, "component must be phi_g or phi_e");
    }
    if (const Value* v = get("solver", "mu_other")) cfg.solver.mu_other = number(*v, "mu_other");
    const Value* bmin = get("solver", "bracket_min");
    const Value* bmax = get("solver", "bracket_max");
    if (bool(bmin) != bool(bmax))
        throw ConfigError((bmin ? bmin : bmax)->line, "bracket_min and bracket_max go together");
    if (bmin) cfg.solver.bracket = Bracket{number(*bmin, "bracket_min"), number(*bmax, "bracket_max")};
    if (const Value* v = get("solver", "hopping_weight"))
        cfg.solver.hopping_weight = number(*v, "hopping_weight");
    if (const Value* v = get("solver", "scan_points"))
        cfg.solver.scan_points = static_cast<int>(integer(*v, "scan_points"));

    validate(cfg, opts.require_model);
    return cfg;
}

}  // namespace bhcav

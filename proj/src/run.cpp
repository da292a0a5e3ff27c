#include "bhcav/run.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "bhcav/config.hpp"
#include "bhcav/errors.hpp"
#include "bhcav/landau_residual.hpp"

namespace bhcav {

namespace {

using nlohmann::ordered_json;

constexpr int kDefaultResolution = 400;
constexpr int kPresetSweepSamples = 401;

struct Axis {
    SweepAxis axis = SweepAxis::u;
    std::vector<double> values;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

OutputFormat resolve_format(const CliOptions& opts, const RunConfig& cfg) {
    if (opts.format) {
        if (*opts.format == "csv") return OutputFormat::csv;
        if (*opts.format == "json") return OutputFormat::json;
        throw ValidationError("--format must be csv or json");
    }
    return cfg.format.value_or(OutputFormat::csv);
}

RunConfig load_config(const CliOptions& opts, bool require_model) {
    ParseOptions po;
    po.allow_physical = opts.physical;
    po.require_model = require_model;
    if (opts.figure_id) po.base_preset = opts.figure_id;
    else if (opts.preset) po.base_preset = opts.preset;

    if (opts.config_text || opts.config_path)
        return parse_config(opts.config_text ? *opts.config_text : read_file(*opts.config_path), po);
    if (po.base_preset) return parse_config("[run]\npreset = \"" + *po.base_preset + "\"\n", po);
    return parse_config("", {opts.physical, require_model, std::nullopt});
}

Axis resolve_axis(const CliOptions& opts, const RunConfig& cfg, const ScaledParams& sp) {
    if (opts.u) return {SweepAxis::u, {*opts.u}};
    if (cfg.axis) {
        const auto axis = *parse_sweep_axis(cfg.axis->name);
        if (cfg.axis->samples == 1) return {axis, {cfg.axis->lo}};
        return {axis, linspace(cfg.axis->lo, cfg.axis->hi, cfg.axis->samples)};
    }
    if (cfg.preset) {
        const auto p = figure_preset(*cfg.preset);
        if (p.reference_u) return {SweepAxis::u, {*p.reference_u}};
        return {p.sweep_axis, linspace(p.x.lo, p.x.hi, kPresetSweepSamples)};
    }
    return {SweepAxis::u, {sp.u_g}};
}

std::vector<Species> species_list(const RunConfig& cfg) {
    if (cfg.solver.species) return {*cfg.solver.species};
    return {Species::ground, Species::excited};
}

HeaderInfo make_header(const std::string& command, const RunConfig& cfg, const ModelVariant* v) {
    HeaderInfo h;
    h.command = command;
    if (v) h.variant = to_string(*v);
    h.physical = cfg.physical;
    if (cfg.physical || cfg.scaled) h.scaled = cfg.resolved_params();
    h.occupations = cfg.occupations;
    if (cfg.preset) h.extra.emplace_back("preset", *cfg.preset);
    return h;
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions so;
    so.coefficient = cfg.solver.coefficient;
    so.hopping_weight = cfg.solver.hopping_weight;
    so.scan_points = cfg.solver.scan_points;
    return so;
}

void add_table(std::vector<OutputFile>& files, OutputFormat fmt, const std::string& stem,
               const std::string& csv, const std::string& json) {
    if (fmt == OutputFormat::csv) files.push_back({stem + ".csv", csv});
    else files.push_back({stem + ".json", json});
}

RunResult run_single(const CliOptions& opts) {
    const bool have_config = opts.config_text || opts.config_path;
    RunConfig cfg = have_config ? load_config(opts, false) : RunConfig{};
    std::vector<int> ns;
    if (opts.n) ns.push_back(*opts.n);
    else
        for (const auto& o : cfg.occupations) ns.push_back(o.n_g);
    if (ns.empty()) throw ValidationError("single: give --n or an [occupations] list");
    for (int n : ns)
        if (n < 1) throw ValidationError("single: n must be >= 1");

    Axis axis;
    if (opts.u) axis = {SweepAxis::u, {*opts.u}};
    else if (cfg.axis) axis = resolve_axis(opts, cfg, {});
    else if (cfg.scaled) axis = {SweepAxis::u, {cfg.scaled->u_g}};
    else throw ValidationError("single: give --u or an [axis] section");
    if (axis.axis != SweepAxis::u) throw ValidationError("single: only the u axis applies");

    std::vector<WindowRow> rows;
    for (int n : ns)
        for (double u : axis.values)
            rows.push_back({"single", "single", {n, 0, 0.0}, "u", u, single_mott_window(n, u)});

    HeaderInfo h;
    h.command = "single";
    h.variant = "single";
    for (int n : ns) h.occupations.push_back({n, 0, 0.0});
    RunResult r;
    r.out_dir = opts.out.value_or(cfg.out.value_or("out"));
    add_table(r.files, resolve_format(opts, cfg), "windows", windows_csv(h, rows),
              windows_json(h, rows));
    r.message = std::to_string(rows.size()) + " window rows";
    return r;
}

RunResult run_windows(const CliOptions& opts, ModelVariant variant) {
    RunConfig cfg = load_config(opts, true);
    const ScaledParams base = cfg.resolved_params();
    const Axis axis = resolve_axis(opts, cfg, base);
    const SolveOptions so = solve_options(cfg);
    const bool roots_mode = variant == ModelVariant::general && cfg.solver.bracket.has_value();

    std::vector<WindowRow> rows;
    std::vector<RootRow> root_rows;
    for (const auto& occ0 : cfg.occupations)
        for (Species s : species_list(cfg))
            for (double x : axis.values) {
                const ScaledParams sp = with_axis_value(axis.axis, x, base);
                const Occupation occ = with_axis_value(axis.axis, x, occ0);
                if (roots_mode) {
                    RootRow rr{to_string(variant), to_string(s), "", occ, to_string(axis.axis), x, {}};
                    const Coefficient c = so.coefficient.value_or(own_coefficient(s));
                    rr.coefficient = c == Coefficient::phi_g ? "phi_g" : "phi_e";
                    rr.roots = boundary_solve(s, occ, sp, cfg.solver.mu_other, *cfg.solver.bracket, so);
                    root_rows.push_back(std::move(rr));
                    continue;
                }
                MottWindow w;
                if (variant == ModelVariant::general) {
                    const int own = s == Species::ground ? occ.n_g : occ.n_e;
                    const double offset = s == Species::ground ? sp.eps_g_s : sp.eps_e_s;
                    if (own > 0)
                        w = general_window(s, occ, sp, cfg.solver.mu_other, so).shifted(offset);
                } else {
                    w = line_window({occ, s}, sp, variant);
                }
                rows.push_back({to_string(variant), to_string(s), occ, to_string(axis.axis), x, w});
            }

    const HeaderInfo h = make_header(to_string(variant), cfg, &variant);
    RunResult r;
    r.out_dir = opts.out.value_or(cfg.out.value_or("out"));
    const auto fmt = resolve_format(opts, cfg);
    if (roots_mode) {
        add_table(r.files, fmt, "roots", roots_csv(h, root_rows), roots_json(h, root_rows));
        r.message = std::to_string(root_rows.size()) + " root rows";
    } else {
        add_table(r.files, fmt, "windows", windows_csv(h, rows), windows_json(h, rows));
        r.message = std::to_string(rows.size()) + " window rows";
    }
    return r;
}

RunResult run_oracle(const CliOptions& opts) {
    const bool have_config = opts.config_text || opts.config_path;
    RunConfig cfg = have_config ? load_config(opts, false) : RunConfig{};
    const int seeds = opts.seeds.value_or(cfg.seeds.value_or(1));
    if (seeds < 1) throw ValidationError("--seeds must be >= 1");
    const std::uint64_t first = opts.seed.value_or(cfg.seed.value_or(1));

    std::vector<EquivalenceReport> reports;
    bool pass = true;
    for (int i = 0; i < seeds; ++i) {
        reports.push_back(verify_seed(first + static_cast<std::uint64_t>(i)));
        pass = pass && reports.back().pass;
    }

    RunResult r;
    r.out_dir = opts.out.value_or(cfg.out.value_or("out"));
    std::ostringstream txt;
    txt << "# schema_version=" << kSchemaVersion << "\n# command=oracle\n# first_seed=" << first
        << "\n# seeds=" << seeds << "\n# tolerance=1e-10\n";
    txt << oracle_text(reports);
    r.files.push_back({"oracle_report.txt", txt.str()});
    if (resolve_format(opts, cfg) == OutputFormat::json) {
        ordered_json j;
        HeaderInfo h;
        h.command = "oracle";
        h.extra = {{"first_seed", std::to_string(first)}, {"seeds", std::to_string(seeds)}};
        j["header"] = json_header(h);
        j["reports"] = ordered_json::array();
        for (const auto& rep : reports) j["reports"].push_back(to_json(rep));
        j["pass"] = pass;
        r.files.push_back({"oracle_report.json", dump(j)});
    }
    std::size_t passed = 0;
    for (const auto& rep : reports) passed += rep.pass ? 1 : 0;
    r.message = "oracle: " + std::to_string(passed) + "/" + std::to_string(seeds) + " passed";
    r.exit_code = pass ? kExitOk : kExitOracleFailure;
    return r;
}

ordered_json axis_json(const AxisRange& a, std::size_t samples) {
    return {{"name", a.name}, {"min", round12(a.lo)}, {"max", round12(a.hi)}, {"samples", samples}};
}

ordered_json figure_summary(const HeaderInfo& h, const FigurePreset& preset, const PhaseGrid& grid) {
    ordered_json j;
    j["header"] = json_header(h);
    j["preset"] = preset.id;
    j["variant"] = to_string(preset.variant);
    j["notes"] = preset.notes;
    j["x_axis"] = axis_json(grid.x, grid.xs.size());
    j["y_axis"] = axis_json(grid.y, grid.ys.size());
    j["lines"] = ordered_json::array();
    for (const auto& l : preset.lines) j["lines"].push_back(line_tag(l));

    if (preset.reference_u) {
        ordered_json ref;
        ref[grid.x.name] = round12(*preset.reference_u);
        ref["windows"] = ordered_json::array();
        const ScaledParams sp = params_at(preset, *preset.reference_u);
        for (const auto& l : preset.lines) {
            const LineSpec at{occupation_at(preset, l.occ, *preset.reference_u), l.species};
            const MottWindow w = line_window(at, sp, preset.variant);
            ordered_json wj;
            wj["line"] = line_tag(l);
            wj["species"] = to_string(l.species);
            wj["occupation"] = to_json(at.occ);
            wj["mu_minus"] = w.present ? ordered_json(round12(w.mu_minus)) : ordered_json(nullptr);
            wj["mu_plus"] = w.present ? ordered_json(round12(w.mu_plus)) : ordered_json(nullptr);
            wj["present"] = w.present;
            ref["windows"].push_back(std::move(wj));
        }
        j["reference"] = std::move(ref);
    }

    ordered_json counts;
    for (std::size_t l = 0; l < grid.layers.size(); ++l) {
        std::map<std::string, std::size_t> c{{"SF", 0}, {"MI", 0}, {"SM", 0}, {"MS", 0}};
        for (auto label : grid.layers[l].labels) ++c[to_string(label)];
        ordered_json cj;
        for (const char* k : {"SF", "MI", "SM", "MS"}) cj[k] = c[k];
        counts[grid.layers[l].name] = std::move(cj);
    }
    j["label_counts"] = std::move(counts);

    ordered_json polylines;
    for (const auto& l : preset.lines) polylines[line_tag(l)] = 0;
    for (const auto& b : grid.boundaries) {
        auto& slot = polylines[line_tag(b.line)];
        slot = slot.get<int>() + 1;
    }
    j["polylines"] = std::move(polylines);
    j["failed_points"] = grid.failed_points;

    if (preset.variant == ModelVariant::cavity && preset.sweep_axis == SweepAxis::u &&
        preset.params.has_equal_hopping()) {
        j["crossings"] = ordered_json::array();
        for (const auto& rep : preset_crossings(preset)) {
            ordered_json cj;
            cj["a"] = line_tag(rep.a);
            cj["b"] = line_tag(rep.b);
            cj["crossed"] = !rep.crossings.empty();
            cj["points"] = ordered_json::array();
            for (const auto& c : rep.crossings)
                cj["points"].push_back(
                    {{"u", round12(c.u)}, {"branch", c.branch == Branch::lower ? "lower" : "upper"}});
            j["crossings"].push_back(std::move(cj));
        }
        j["overlaps"] = ordered_json::array();
        const auto u_grid = linspace(preset.x.lo, preset.x.hi, kPresetSweepSamples);
        for (std::size_t a = 0; a < preset.lines.size(); ++a)
            for (std::size_t b = a + 1; b < preset.lines.size(); ++b) {
                const auto& la = preset.lines[a];
                const auto& lb = preset.lines[b];
                if (la.occ == lb.occ || la.species != lb.species) continue;
                std::size_t n = 0;
                ordered_json first = nullptr;
                ordered_json last = nullptr;
                for (const auto& s : overlap_profile(preset, la, lb, u_grid)) {
                    if (!s.overlap) continue;
                    ++n;
                    if (first.is_null()) first = round12(s.u);
                    last = round12(s.u);
                }
                j["overlaps"].push_back({{"a", line_tag(la)},
                                         {"b", line_tag(lb)},
                                         {"samples", u_grid.size()},
                                         {"overlapping_samples", n},
                                         {"first_overlap_u", first},
                                         {"last_overlap_u", last}});
            }
    }
    return j;
}

RunResult run_figure(const CliOptions& opts) {
    if (!opts.figure_id) throw ValidationError("figure: missing figure id");
    FigurePreset preset = figure_preset(*opts.figure_id);
    RunConfig cfg = load_config(opts, true);
    const auto original = preset.occupations;
    preset.params = cfg.resolved_params();
    if (cfg.variant) preset.variant = *cfg.variant;
    if (cfg.occupations != original) {
        preset.occupations = cfg.occupations;
        preset.lines.clear();
        for (const auto& o : cfg.occupations)
            for (Species s : {Species::ground, Species::excited}) preset.lines.push_back({o, s});
    }
    int nx = kDefaultResolution;
    int ny = kDefaultResolution;
    if (cfg.axis) {
        if (cfg.axis->name != preset.x.name)
            throw ValidationError("figure " + preset.id + ": axis must be '" + preset.x.name + "'");
        preset.x.lo = cfg.axis->lo;
        preset.x.hi = cfg.axis->hi;
        nx = cfg.axis->samples;
    }
    if (cfg.mu_axis) {
        preset.y.lo = cfg.mu_axis->lo;
        preset.y.hi = cfg.mu_axis->hi;
        ny = cfg.mu_axis->samples;
    }

    const PhaseGrid grid = scan_grid(preset, nx, ny);
    HeaderInfo h = make_header("figure " + preset.id, cfg, &preset.variant);
    h.extra.emplace_back("axis1", preset.x.name);
    h.extra.emplace_back("axis2", preset.y.name);

    RunResult r;
    r.out_dir = opts.out.value_or(cfg.out.value_or("out"));
    if (resolve_format(opts, cfg) == OutputFormat::csv) {
        for (std::size_t l = 0; l < grid.layers.size(); ++l)
            r.files.push_back({"grid_" + grid.layers[l].name + ".csv", grid_csv(h, grid, l)});
        r.files.push_back({"boundaries.csv", boundaries_csv(h, grid)});
    } else {
        r.files.push_back({"figure.json", grid_json(h, grid)});
    }
    r.files.push_back({"summary.json", dump(figure_summary(h, preset, grid))});
    r.message = "figure " + preset.id + ": " + std::to_string(grid.boundaries.size()) + " polylines";
    return r;
}

RunResult dispatch(const CliOptions& opts) {
    if (opts.command == "single") return run_single(opts);
    if (opts.command == "oracle") return run_oracle(opts);
    if (opts.command == "figure") return run_figure(opts);
    if (auto v = parse_model_variant(opts.command)) return run_windows(opts, *v);
    throw ValidationError("unknown subcommand '" + opts.command + "'");
}

}  // namespace

RunResult execute(const CliOptions& opts) {
    try {
        return dispatch(opts);
    } catch (const ValidationError& e) {
        return {kExitValidation, {}, {}, e.what()};
    } catch (const NumericalError& e) {
        return {kExitNumerical, {}, {}, e.what()};
    } catch (const std::invalid_argument& e) {
        return {kExitValidation, {}, {}, e.what()};
    }
}

int run(const CliOptions& opts, std::ostream& log) {
    RunResult r = execute(opts);
    if (r.exit_code == kExitValidation || r.exit_code == kExitNumerical) {
        log << "error: " << r.message << "\n";
        return r.exit_code;
    }
    try {
        write_files_atomic(r.out_dir, r.files);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    log << r.message << " -> " << r.out_dir << " (" << r.files.size() << " files)\n";
    return r.exit_code;
}

}  // namespace bhcav

#include "bhcav/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

namespace bhcav {

namespace {

using nlohmann::ordered_json;

std::string occ_fields(const Occupation& occ) {
    return std::to_string(occ.n_g) + "," + std::to_string(occ.n_e) + "," + fmt12(occ.n_c);
}

// JSON number rounded to 12 significant digits; non-finite values become null.
ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round12(x);
}

ordered_json window_json(const MottWindow& w) {
    ordered_json j;
    j["mu_minus"] = w.present ? num(w.mu_minus) : ordered_json(nullptr);
    j["mu_plus"] = w.present ? num(w.mu_plus) : ordered_json(nullptr);
    j["present"] = w.present;
    return j;
}

}  // namespace

std::string fmt12(double x) {
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(fmt12(x).c_str(), nullptr);
}

ordered_json to_json(const ScaledParams& sp) {
    ordered_json j;
    j["u_g"] = num(sp.u_g);
    j["u_e"] = num(sp.u_e);
    j["u_eg_g"] = num(sp.u_eg_g);
    j["u_eg_e"] = num(sp.u_eg_e);
    j["F"] = num(sp.F);
    j["eps_c_g"] = num(sp.eps_c_g);
    j["eps_c_e"] = num(sp.eps_c_e);
    j["eps_g"] = num(sp.eps_g_s);
    j["eps_e"] = num(sp.eps_e_s);
    j["hopping_ratio"] = num(sp.hopping_ratio);
    return j;
}

ordered_json to_json(const PhysicalParams& p) {
    ordered_json j;
    j["J_g"] = num(p.J_g);
    j["J_e"] = num(p.J_e);
    j["U_g"] = num(p.U_g);
    j["U_e"] = num(p.U_e);
    j["U_eg"] = num(p.U_eg);
    j["f_sq"] = num(p.f_sq);
    j["eps_g"] = num(p.eps_g);
    j["eps_e"] = num(p.eps_e);
    j["eps_c"] = num(p.eps_c);
    j["z"] = p.z;
    return j;
}

ordered_json to_json(const Occupation& occ) {
    ordered_json j;
    j["n_g"] = occ.n_g;
    j["n_e"] = occ.n_e;
    j["n_c"] = num(occ.n_c);
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_header(const HeaderInfo& h) {
    std::ostringstream os;
    os << "# schema_version=" << kSchemaVersion << "\n";
    os << "# command=" << h.command << "\n";
    if (!h.variant.empty()) os << "# variant=" << h.variant << "\n";
    if (h.physical) {
        const auto params = to_json(*h.physical);
        for (const auto& [k, v] : params.items())
            os << "# physical." << k << "=" << (v.is_number_float() ? fmt12(v.get<double>()) : v.dump())
               << "\n";
    }
    if (h.scaled) {
        const auto params = to_json(*h.scaled);
        for (const auto& [k, v] : params.items())
            os << "# scaled." << k << "=" << (v.is_number_float() ? fmt12(v.get<double>()) : v.dump())
               << "\n";
    }
    if (!h.occupations.empty()) {
        os << "# occupations=";
        for (std::size_t i = 0; i < h.occupations.size(); ++i)
            os << (i ? ";" : "") << occ_fields(h.occupations[i]);
        os << "\n";
    }
    for (const auto& [k, v] : h.extra) os << "# " << k << "=" << v << "\n";
    return os.str();
}

ordered_json json_header(const HeaderInfo& h) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = h.command;
    if (!h.variant.empty()) j["variant"] = h.variant;
    if (h.physical) j["physical"] = to_json(*h.physical);
    if (h.scaled) j["scaled"] = to_json(*h.scaled);
    if (!h.occupations.empty()) {
        j["occupations"] = ordered_json::array();
        for (const auto& o : h.occupations) j["occupations"].push_back(to_json(o));
    }
    for (const auto& [k, v] : h.extra) j[k] = v;
    return j;
}

std::string windows_csv(const HeaderInfo& h, const std::vector<WindowRow>& rows) {
    std::ostringstream os;
    os << csv_header(h);
    os << "variant,species,n_g,n_e,n_c,axis_name,axis_value,mu_minus,mu_plus,present\n";
    for (const auto& r : rows) {
        os << r.variant << ',' << r.species << ',' << occ_fields(r.occ) << ',' << r.axis_name << ','
           << fmt12(r.axis_value) << ',';
        if (r.window.present)
            os << fmt12(r.window.mu_minus) << ',' << fmt12(r.window.mu_plus) << ",true\n";
        else
            os << ",,false\n";
    }
    return os.str();
}

std::string windows_json(const HeaderInfo& h, const std::vector<WindowRow>& rows) {
    ordered_json j;
    j["header"] = json_header(h);
    j["windows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["variant"] = r.variant;
        row["species"] = r.species;
        row["occupation"] = to_json(r.occ);
        row["axis_name"] = r.axis_name;
        row["axis_value"] = num(r.axis_value);
        row.update(window_json(r.window));
        j["windows"].push_back(std::move(row));
    }
    return dump(j);
}

std::string roots_csv(const HeaderInfo& h, const std::vector<RootRow>& rows) {
    std::ostringstream os;
    os << csv_header(h);
    os << "variant,species,coefficient,n_g,n_e,n_c,axis_name,axis_value,index,mu\n";
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.roots.size(); ++i)
            os << r.variant << ',' << r.species << ',' << r.coefficient << ',' << occ_fields(r.occ)
               << ',' << r.axis_name << ',' << fmt12(r.axis_value) << ',' << i << ','
               << fmt12(r.roots[i]) << "\n";
    return os.str();
}

std::string roots_json(const HeaderInfo& h, const std::vector<RootRow>& rows) {
    ordered_json j;
    j["header"] = json_header(h);
    j["roots"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["variant"] = r.variant;
        row["species"] = r.species;
        row["coefficient"] = r.coefficient;
        row["occupation"] = to_json(r.occ);
        row["axis_name"] = r.axis_name;
        row["axis_value"] = num(r.axis_value);
        row["mu"] = ordered_json::array();
        for (double x : r.roots) row["mu"].push_back(num(x));
        j["roots"].push_back(std::move(row));
    }
    return dump(j);
}

std::string grid_csv(const HeaderInfo& h, const PhaseGrid& grid, std::size_t layer) {
    std::ostringstream os;
    os << csv_header(h);
    os << "# layer=" << grid.layers[layer].name << "\n";
    os << "axis1,axis2,label\n";
    for (std::size_t i = 0; i < grid.xs.size(); ++i)
        for (std::size_t j = 0; j < grid.ys.size(); ++j)
            os << fmt12(grid.xs[i]) << ',' << fmt12(grid.ys[j]) << ','
               << to_string(grid.label(layer, i, j)) << "\n";
    return os.str();
}

std::string boundaries_csv(const HeaderInfo& h, const PhaseGrid& grid) {
    std::ostringstream os;
    os << csv_header(h);
    os << "line,species,n_g,n_e,n_c,polyline,point,x,y\n";
    for (std::size_t b = 0; b < grid.boundaries.size(); ++b) {
        const auto& bd = grid.boundaries[b];
        for (std::size_t k = 0; k < bd.points.size(); ++k)
            os << line_tag(bd.line) << ',' << bd.species << ',' << occ_fields(bd.line.occ) << ',' << b
               << ',' << k << ',' << fmt12(bd.points[k].x) << ',' << fmt12(bd.points[k].y) << "\n";
    }
    return os.str();
}

std::string grid_json(const HeaderInfo& h, const PhaseGrid& grid) {
    ordered_json j;
    j["header"] = json_header(h);
    j["axis1"] = {{"name", grid.x.name}, {"values", ordered_json::array()}};
    for (double x : grid.xs) j["axis1"]["values"].push_back(num(x));
    j["axis2"] = {{"name", grid.y.name}, {"values", ordered_json::array()}};
    for (double y : grid.ys) j["axis2"]["values"].push_back(num(y));
    j["layers"] = ordered_json::array();
    for (std::size_t l = 0; l < grid.layers.size(); ++l) {
        ordered_json layer;
        layer["name"] = grid.layers[l].name;
        // labels[i][j]: axis1 index i, axis2 index j
        layer["labels"] = ordered_json::array();
        for (std::size_t i = 0; i < grid.xs.size(); ++i) {
            ordered_json col = ordered_json::array();
            for (std::size_t k = 0; k < grid.ys.size(); ++k) col.push_back(to_string(grid.label(l, i, k)));
            layer["labels"].push_back(std::move(col));
        }
        j["layers"].push_back(std::move(layer));
    }
    j["boundaries"] = ordered_json::array();
    for (const auto& bd : grid.boundaries) {
        ordered_json b;
        b["line"] = line_tag(bd.line);
        b["species"] = bd.species;
        b["occupation"] = to_json(bd.line.occ);
        b["points"] = ordered_json::array();
        for (const auto& p : bd.points) b["points"].push_back({num(p.x), num(p.y)});
        j["boundaries"].push_back(std::move(b));
    }
    return dump(j);
}

ordered_json to_json(const EquivalenceReport& r) {
    ordered_json j;
    if (r.has_seed) j["seed"] = r.seed;
    j["occupation"] = to_json(r.occ);
    j["mu"] = {{"mu_g", num(r.mu.mu_g)}, {"mu_e", num(r.mu.mu_e)}};
    j["params"] = to_json(r.params);
    j["coefficients"] = {{"c_g", num(r.coefficients.c_g)},
                         {"c_e", num(r.coefficients.c_e)},
                         {"c_mix", num(r.coefficients.c_mix)},
                         {"c_mix_magnitude", num(std::abs(r.coefficients.c_mix))}};
    j["checks"] = ordered_json::array();
    for (const auto& c : r.checks) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", c.residual);
        j["checks"].push_back({{"name", c.name}, {"residual", buf}, {"pass", c.pass}});
    }
    j["pass"] = r.pass;
    return j;
}

std::string oracle_text(const std::vector<EquivalenceReport>& reports) {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& r : reports) {
        os << r.to_text() << "\n";
        passed += r.pass ? 1 : 0;
    }
    os << "summary: " << passed << "/" << reports.size() << " passed\n";
    return os.str();
}

void write_files_atomic(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
    std::filesystem::create_directories(dir);
    for (const auto& f : files) {
        const auto target = dir / f.name;
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
            out << f.content;
            out.flush();
            if (!out) {
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw std::runtime_error("write to '" + tmp.string() + "' failed");
            }
        }
        std::filesystem::rename(tmp, target);
    }
}

}  // namespace bhcav

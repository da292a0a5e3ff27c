#pragma once

// Byte-stable serialization. Floating values are printed with 12 significant
// digits, columns are in a fixed order, and every file starts with a
// parameter header: `# key=value` comment lines for CSV, a "header" object
// for JSON. Schema version 1:
//
//   windows.csv     variant,species,n_g,n_e,n_c,axis_name,axis_value,mu_minus,mu_plus,present
//   roots.csv       variant,species,coefficient,n_g,n_e,n_c,axis_name,axis_value,index,mu
//   grid_<L>.csv    axis1,axis2,label                (one file per label layer L)
//   boundaries.csv  line,species,n_g,n_e,n_c,polyline,point,x,y
//
// Absent windows keep their row with empty mu fields and present=false.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhcav/diagram.hpp"
#include "bhcav/params.hpp"
#include "bhcav/perturbation_oracle.hpp"

namespace bhcav {

inline constexpr int kSchemaVersion = 1;

// "%.12g" with -0 printed as 0.
std::string fmt12(double x);

// x rounded to 12 significant digits (the value fmt12 prints).
double round12(double x);

struct HeaderInfo {
    std::string command;
    std::string variant;
    std::optional<ScaledParams> scaled;
    std::optional<PhysicalParams> physical;
    std::vector<Occupation> occupations;
    std::vector<std::pair<std::string, std::string>> extra;
};

std::string csv_header(const HeaderInfo& h);
nlohmann::ordered_json json_header(const HeaderInfo& h);

nlohmann::ordered_json to_json(const ScaledParams& sp);
nlohmann::ordered_json to_json(const PhysicalParams& p);
nlohmann::ordered_json to_json(const Occupation& occ);

// Serializes with two-space indentation and a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

struct WindowRow {
    std::string variant;
    std::string species;
    Occupation occ;
    std::string axis_name;
    double axis_value = 0.0;
    MottWindow window;
};

std::string windows_csv(const HeaderInfo& h, const std::vector<WindowRow>& rows);
std::string windows_json(const HeaderInfo& h, const std::vector<WindowRow>& rows);

struct RootRow {
    std::string variant;
    std::string species;
    std::string coefficient;
    Occupation occ;
    std::string axis_name;
    double axis_value = 0.0;
    std::vector<double> roots;
};

std::string roots_csv(const HeaderInfo& h, const std::vector<RootRow>& rows);
std::string roots_json(const HeaderInfo& h, const std::vector<RootRow>& rows);

std::string grid_csv(const HeaderInfo& h, const PhaseGrid& grid, std::size_t layer);
std::string boundaries_csv(const HeaderInfo& h, const PhaseGrid& grid);
std::string grid_json(const HeaderInfo& h, const PhaseGrid& grid);

nlohmann::ordered_json to_json(const EquivalenceReport& r);
std::string oracle_text(const std::vector<EquivalenceReport>& reports);

struct OutputFile {
    std::string name;
    std::string content;
};

// Writes each file to a temporary sibling and renames it into place.
void write_files_atomic(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

}  // namespace bhcav

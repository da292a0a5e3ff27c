#pragma once

// Phase diagrams on a two-dimensional parameter grid: per-point labels,
// boundary polylines per transition line, and the figure presets.
//
// The vertical axis is always a chemical potential in the barred convention
// (on-site energies included), shared by both species in their own zJ units.
// The horizontal axis is u (u_g = u_e) or one of the sweep axes.

#include <optional>
#include <string>
#include <vector>

#include "bhcav/cavity_lines.hpp"
#include "bhcav/contour.hpp"
#include "bhcav/hubbard_lines.hpp"
#include "bhcav/params.hpp"

namespace bhcav {

enum class PhaseLabel { SF, MI, SM, MS };

const char* to_string(PhaseLabel label);

// MI: both Mott, SM: excited only, MS: ground only, SF: neither.
PhaseLabel label_from(bool ground_mott, bool excited_mott);

enum class ModelVariant { single, two, cavity, general };

const char* to_string(ModelVariant v);
std::optional<ModelVariant> parse_model_variant(const std::string& name);

struct AxisRange {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

// A drawn transition line: one species of one occupation sector. The single
// variant uses Species::ground with n = occ.n_g.
struct LineSpec {
    Occupation occ;
    Species species = Species::ground;
};

std::string line_tag(const LineSpec& line);

struct FigurePreset {
    std::string id;
    ModelVariant variant = ModelVariant::two;
    ScaledParams params;
    std::vector<Occupation> occupations;
    std::vector<LineSpec> lines;
    AxisRange x;
    AxisRange y;
    SweepAxis sweep_axis = SweepAxis::u;  // meaning of the x axis
    std::optional<double> reference_u;   // x value for the summary windows
    std::string notes;
};

// Throws ValidationError for an unknown id.
FigurePreset figure_preset(const std::string& id);
std::vector<std::string> figure_ids();

// lo + (hi - lo) i / (n - 1); refining n to 2n - 1 keeps old nodes exact.
std::vector<double> linspace(double lo, double hi, int n);

struct Classification {
    PhaseLabel label = PhaseLabel::SF;
    std::string diagnostic;  // non-empty when a window computation failed
};

struct UPair {
    double u_g = 0.0;
    double u_e = 0.0;
};

// Per-species Mott membership at barred chemical potentials. Windows come
// from hubbard-lines (single, two), cavity-lines (cavity) or the sign of the
// own Landau coefficient between its two poles (general). A species whose
// window cannot be computed is reported superfluid with a diagnostic.
Classification classify_point(UPair u, const ChemicalPotentials& mu_barred, const Occupation& occ,
                              const ScaledParams& sp, ModelVariant variant);

// Barred Mott window of one line at parameters `sp`. For the general
// variant the companion chemical potential is the stationary value.
MottWindow line_window(const LineSpec& line, const ScaledParams& sp, ModelVariant variant);

// Parameters and occupation at horizontal coordinate x.
ScaledParams params_at(const FigurePreset& preset, double x);
Occupation occupation_at(const FigurePreset& preset, const Occupation& occ, double x);

struct LabelLayer {
    std::string name;        // occupation tag, or "all" for the single variant
    std::vector<PhaseLabel> labels;  // row-major: ys.size() rows of xs.size()
};

struct Boundary {
    LineSpec line;
    std::string species;  // "single", "ground" or "excited"
    Polyline points;
};

struct PhaseGrid {
    std::string preset_id;
    AxisRange x;
    AxisRange y;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<LabelLayer> layers;
    std::vector<Boundary> boundaries;
    std::size_t failed_points = 0;  // nodes classified SF because a window failed

    PhaseLabel label(std::size_t layer, std::size_t i, std::size_t j) const {
        return layers[layer].labels[j * xs.size() + i];
    }
};

inline constexpr double kBoundaryTolerance = 1e-6;

// Throws ValidationError for nx < 2, ny < 2 or an empty axis range.
PhaseGrid scan_grid(const FigurePreset& preset, int nx, int ny);

struct CrossingReport {
    LineSpec a;
    LineSpec b;
    std::vector<Crossing> crossings;
};

// Same-branch crossings between every pair of drawn lines that belong to
// different occupations, on `samples` points of the x range. Cavity presets
// with a u axis only.
std::vector<CrossingReport> preset_crossings(const FigurePreset& preset, int samples = 400);

struct OverlapSample {
    double u = 0.0;
    bool a_present = false;
    bool b_present = false;
    bool overlap = false;  // both present and the open windows intersect
};

std::vector<OverlapSample> overlap_profile(const FigurePreset& preset, const LineSpec& a,
                                           const LineSpec& b, std::span<const double> u_grid);

}  // namespace bhcav

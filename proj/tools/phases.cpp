// phases: Mott / superfluid boundaries of the cavity-coupled two-component
// Bose-Hubbard model.
//
//   phases <subcommand> [--config PATH] [--out DIR] [--format csv|json]
//                       [--seeds N] [--seed S] [--physical]
//
// Subcommands: single, two, cavity, general, oracle, figure <id>.

#include <iostream>

#include <CLI11.hpp>

#include "bhcav/diagram.hpp"
#include "bhcav/run.hpp"

namespace {

void add_common(CLI::App* sub, bhcav::CliOptions& o, bool with_preset) {
    sub->add_option("--config", o.config_path, "configuration file");
    sub->add_option("--out", o.out, "output directory (default: out)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--physical", o.physical, "accept a [physical] parameter block");
    if (with_preset) sub->add_option("--preset", o.preset, "figure preset supplying the parameters");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase boundaries of the cavity-coupled two-component Bose-Hubbard model"};
    app.require_subcommand(1);
    bhcav::CliOptions opts;

    auto* single = app.add_subcommand("single", "single-component Mott windows");
    add_common(single, opts, false);
    single->add_option("--n", opts.n, "occupation per site");
    single->add_option("--u", opts.u, "U/zJ");

    for (const char* name : {"two", "cavity", "general"}) {
        auto* sub = app.add_subcommand(name, std::string(name) + " variant windows");
        add_common(sub, opts, true);
        sub->add_option("--u", opts.u, "evaluate at a single u = U/zJ");
    }

    auto* oracle = app.add_subcommand("oracle", "second-order energy cross-check");
    add_common(oracle, opts, false);
    oracle->add_option("--seeds", opts.seeds, "number of random cases")->check(CLI::PositiveNumber);
    oracle->add_option("--seed", opts.seed, "first seed");

    auto* figure = app.add_subcommand("figure", "phase grid and boundaries of a figure preset");
    add_common(figure, opts, false);
    std::string ids;
    for (const auto& id : bhcav::figure_ids()) ids += (ids.empty() ? "" : ", ") + id;
    figure->add_option("id", opts.figure_id, "one of: " + ids)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bhcav::kExitValidation;
    }
    opts.command = app.get_subcommands().front()->get_name();
    return bhcav::run(opts, std::cerr);
}

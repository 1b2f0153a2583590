#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "quakebend_tools/commands.hpp"

using quakebend::tools::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"Bending deformations of punctured-torus groups: experiments and checks"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--l-gamma", cfg.l_gamma, "Length of the X curve of the orthogonal base group");
    app.add_option("--slope", cfg.slope, "Bending slope p/q");
    app.add_option("--t-min", cfg.t_min, "Smallest bending angle of the grid");
    app.add_option("--t-max", cfg.t_max, "Largest bending angle of the grid");
    app.add_option("--t-count", cfg.t_count, "Grid size (odd, >= 3, must hit t = 0)");
    app.add_option("--r-min", cfg.r_min, "Smallest corridor depth");
    app.add_option("--r-max", cfg.r_max, "Largest corridor depth");
    app.add_option("--seed", cfg.seed, "Seed for fuzz");
    app.add_option("--out", cfg.out, "Write the CSV/JSON body here instead of standard output");
    app.add_option("--word", cfg.word, "Group element xi for converge, in letters X, x, Y, y");
    app.add_option("--t", cfg.t, "Single bending angle for converge, fit and group");
    app.add_option("--shears", cfg.shears, "re1,im1,re2,im2[,re3,im3] for forward and jacobian");
    app.add_option("--traces", cfg.traces, "x_re,x_im,y_re,y_im,z_re,z_im target for fit");
    app.add_flag("--inject-failure", cfg.inject_failure, "fuzz: add a violating instance to exercise the failure path");

    const std::pair<const char*, const char*> commands[] = {
        {"c2", "Boundary-length function along the bending family and its one-sided derivatives"},
        {"converge", "Truncated-holonomy error and per-step gap against corridor depth"},
        {"fuzz", "Seeded perturbation-bound instances and invariant checks"},
        {"forward", "Traces of the holonomy of complex shears"},
        {"fit", "Complex shears reproducing a trace triple"},
        {"jacobian", "Shear and bending directions of the trace chart"},
        {"track", "Train-track weights carrying a slope"},
        {"group", "Generators of the bent group"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->callback([&cfg, name = std::string(name)] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return quakebend::tools::exit_config;
    }

    const auto result = quakebend::tools::run(cfg);
    if (!result.body.empty()) {
        if (cfg.out.empty()) {
            std::cout << result.body;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) {
                std::cerr << "cannot open " << cfg.out << "\n";
                return quakebend::tools::exit_config;
            }
            f << result.body;
        }
    }
    for (const auto& line : result.summary) std::cout << line << "\n";
    return result.exit_code;
}

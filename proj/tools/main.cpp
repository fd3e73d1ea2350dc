#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "ptdimer/cli.hpp"

namespace {

struct Flags {
    ptdimer::RunConfig cfg;
    std::string range_text, axis_range_text, config_path;
    int steps = 0;
    std::set<std::string> given; // flag keys seen on the command line
};

void add_options(CLI::App* sub, Flags& f) {
    const auto track = [&f](const std::string& key) {
        return [&f, key](const std::string&) { f.given.insert(key); };
    };
    sub->add_option("--t", f.cfg.t, "hopping amplitude t")->each(track("t"));
    sub->add_option("--eps", f.cfg.eps, "orbital energy epsilon")->each(track("eps"));
    sub->add_option("--lambda", f.cfg.lambda, "asymmetric hopping lambda")->each(track("lambda"));
    sub->add_option("--gamma", f.cfg.gamma, "gain/loss gamma")->each(track("gamma"));
    sub->add_option("--U", f.cfg.u, "on-site interaction U")->each(track("U"));
    sub->add_option("--axis", f.cfg.axis, "swept parameter (lambda|gamma|u)")
        ->each(track("axis"));
    sub->add_option("--range", f.range_text, "scan range lo:hi")->each(track("range"));
    sub->add_option("--steps", f.steps, "grid size")->each(track("steps"));
    sub->add_option("--tol", f.cfg.tol, "bisection tolerance")->each(track("tol"));
    sub->add_option("--out", f.cfg.out, "output path ('-' = stdout)")->each(track("out"));
    sub->add_option("--jobs", f.cfg.jobs, "worker threads (0 = machine parallelism)")
        ->each(track("jobs"));
    sub->add_option("--axis-range", f.axis_range_text,
                    "boundary: scan window of the swept axis, lo:hi")
        ->each(track("axis-range"));
    sub->add_option("--config", f.config_path, "key=value config file; flags override");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, exceptional points and PT phase boundaries of the\n"
                 "non-Hermitian two-site Hubbard dimer."};
    app.require_subcommand(1);

    Flags f;
    struct SubDef {
        const char* name;
        const char* help;
        ptdimer::Command command;
    };
    const SubDef defs[] = {
        {"matrix", "print the 6x6 Hamiltonian matrix as CSV", ptdimer::Command::matrix},
        {"spectrum", "eigenvalues by every applicable method", ptdimer::Command::spectrum},
        {"sweep", "track the complex-capable eigenvalue pair along an axis",
         ptdimer::Command::sweep},
        {"find-ep", "locate exceptional points on an axis", ptdimer::Command::find_ep},
        {"boundary", "trace PT phase boundaries over U", ptdimer::Command::boundary},
    };
    for (const SubDef& d : defs) add_options(app.add_subcommand(d.name, d.help), f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ptdimer::kExitConfig;
    }

    for (const SubDef& d : defs)
        if (app.get_subcommand(d.name)->parsed()) f.cfg.command = d.command;

    try {
        if (!f.config_path.empty())
            ptdimer::apply_config_values(f.cfg, ptdimer::parse_config_file(f.config_path),
                                         f.given);
        if (f.given.count("range")) f.cfg.range = ptdimer::parse_range(f.range_text);
        if (f.given.count("steps")) f.cfg.steps = f.steps;
        if (f.given.count("axis-range"))
            f.cfg.axis_range = ptdimer::parse_range(f.axis_range_text);
    } catch (const ptdimer::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ptdimer::kExitConfig;
    }

    return ptdimer::run(f.cfg);
}

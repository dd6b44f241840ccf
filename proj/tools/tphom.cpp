#include <iostream>

#include <CLI11.hpp>

#include "tphom/errors.hpp"
#include "tphom/log.hpp"
#include "tphom/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Upscaling and verification of double-porosity thermoporoelastic media"};
    app.require_subcommand(1);
    std::string config, out, coeffs;
    int threads = 1;
    bool sequential = false, override_cap = false;
    int verbosity = -1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config, "run configuration (JSON)");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "worker threads for the cell problems")->check(CLI::PositiveNumber);
        sub->add_flag("--sequential", sequential, "single-threaded, bit-reproducible mode");
        sub->add_option("-v,--verbosity", verbosity, "0 silent, 1 warnings, 2 info, 3 debug");
    };
    auto* upscale = app.add_subcommand("upscale", "solve the cell problems and write effective coefficients");
    add_common(upscale, true);
    auto* macro = app.add_subcommand("macro", "run the homogenized model");
    add_common(macro, true);
    macro->add_option("--coeffs", coeffs, "coefficients JSON written by upscale")->required();
    auto* dns = app.add_subcommand("dns", "run the fine-scale model at dns.epsilon");
    add_common(dns, true);
    dns->add_flag("--override-desk-cap", override_cap, "allow more than 1e6 unknowns");
    auto* verify = app.add_subcommand("verify", "two-scale convergence study over verify.eps_list");
    add_common(verify, true);
    verify->add_flag("--override-desk-cap", override_cap, "allow more than 1e6 unknowns");
    auto* selftest = app.add_subcommand("selftest", "analytic oracle checks");
    selftest->add_option("--threads", threads)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (selftest->parsed()) return tphom::cmd_selftest(std::cout, threads);
        tphom::RunConfig cfg = tphom::load_config(config);
        tphom::log::set_verbosity(verbosity >= 0 ? verbosity : cfg.verbosity);
        tphom::PipelineOptions opts;
        opts.out_dir = out;
        opts.coeffs_path = coeffs;
        opts.threads = threads;
        opts.sequential = sequential;
        opts.override_desk_cap = override_cap;
        if (upscale->parsed()) return tphom::cmd_upscale(cfg, opts);
        if (macro->parsed()) return tphom::cmd_macro(cfg, opts);
        if (dns->parsed()) return tphom::cmd_dns(cfg, opts);
        if (verify->parsed()) return tphom::cmd_verify(cfg, opts);
    } catch (const tphom::SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const tphom::AssemblyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const tphom::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

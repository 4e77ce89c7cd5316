// Regenerates the elimination template recipe shipped in core/data.
//
//   grsrp_gen_template <output-path> [--no-prune] [--seed N]

#include "grsrp/elimination_template.h"
#include "grsrp/template_generator.h"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char **argv) {
    if (argc < 2) {
        std::cerr << "usage: grsrp_gen_template <output-path> [--no-prune] [--seed N]\n";
        return 2;
    }
    grsrp::GeneratorOptions options;
    for (int k = 2; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--no-prune") {
            options.prune = false;
        } else if (arg == "--seed" && k + 1 < argc) {
            options.seed = std::strtoull(argv[++k], nullptr, 10);
        } else {
            std::cerr << "unknown argument: " << arg << "\n";
            return 2;
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    grsrp::GeneratorReport report;
    try {
        const grsrp::EliminationTemplate tmpl = grsrp::generate_template(options, &report);
        grsrp::save_template(tmpl, argv[1]);
    } catch (const std::exception &e) {
        for (const auto &line : report.log) {
            std::cerr << line << "\n";
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    for (const auto &line : report.log) {
        std::cout << line << "\n";
    }
    std::cout << "template " << report.rows << " x " << report.cols << " (expanded " << report.expanded_rows << " x "
              << report.expanded_cols << " at degree " << report.expansion_degree << ") in "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return 0;
}

#pragma once

#include "grsrp/elimination_template.h"
#include "grsrp/modular.h"
#include "grsrp/rs_system.h"

#include <cstdint>
#include <string>
#include <vector>

namespace grsrp {

// Offline construction of the elimination template from a random instance of
// the system over Z_p. Run once; the result is frozen into
// core/data/grsrp_template.txt.
struct GeneratorOptions {
    int action_variable = kNumUnknowns - 1; // t3
    int min_degree = 3;
    int max_degree = 7;
    int expected_solutions = 20;
    std::uint64_t seed = 20180611;
    bool prune = true;
};

struct GeneratorReport {
    int expansion_degree = 0;
    int quotient_dimension = 0;
    int expanded_rows = 0;
    int expanded_cols = 0;
    int rows = 0;
    int cols = 0;
    std::vector<std::string> log;
};

// Random instance with the exact coefficient structure of build_system():
// random rays, rows, angular velocities and a Cayley R0, all over Z_p.
PolynomialSystem<ModP> random_probe_system(std::uint64_t seed);

// Standard monomials (grevlex) of the ideal, read off a Macaulay matrix of all
// equation multiples up to total degree `expansion_degree`. Returns an empty
// vector when that expansion does not yet certify a zero-dimensional ideal.
std::vector<Monomial> standard_monomials(const PolynomialSystem<ModP> &system, int expansion_degree);

// Throws TemplateError with a diagnostic if no expansion up to max_degree
// yields the expected quotient dimension and a reducible action matrix.
EliminationTemplate generate_template(const GeneratorOptions &options, GeneratorReport *report = nullptr);

// True when filling `tmpl` with `system` and reducing it exposes every
// reducible monomial in terms of the basis, i.e. the action matrix exists.
bool template_reduces(const EliminationTemplate &tmpl, const PolynomialSystem<ModP> &system);

} // namespace grsrp

#pragma once

#include "grsrp/elimination_template.h"
#include "grsrp/geometry.h"
#include "grsrp/rs_system.h"

#include <Eigen/Core>

#include <complex>
#include <vector>

namespace grsrp {

struct SolverOptions {
    // A root is kept when every coordinate's imaginary part is below this.
    double imag_tolerance = 1e-6;
    // Elimination pivots smaller than this times the largest template row norm
    // abort the LU route and trigger the QR fallback.
    double pivot_tolerance = 1e-12;
    bool force_qr = false;
    // Newton iterations applied to each real root on the six polynomials.
    int newton_steps = 2;
};

// One eigenpair of the action matrix read back as a root of the system.
struct Root {
    std::complex<double> eigenvalue;
    Eigen::Vector3cd a;
    Eigen::Vector3cd t;
    bool is_real = false;
};

// A real root converted to a pose: R = nearest_rotation(R0 (I + [a]x)),
// translation = t / |t|. `a` and `t` are the raw (unnormalized) root.
struct Candidate {
    Vec3 a;
    Vec3 t;
    RelativePose pose;
};

struct SolutionSet {
    std::vector<Root> roots;           // every root, sorted by eigenvalue (real, then imaginary part)
    std::vector<Candidate> candidates; // real roots only, same order
    bool used_qr_fallback = false;

    std::vector<RelativePose> poses() const;
};

// Gyro-aided rolling-shutter minimal solver. Throws NumericalFailure when the
// template cannot be reduced by either route and DegenerateInput when no real
// root survives.
SolutionSet solve(const MinimalProblem &problem, const EliminationTemplate &tmpl = default_template(),
                  const SolverOptions &options = {});

// Values of the six system polynomials at a (possibly complex) root.
std::array<std::complex<double>, kMinimalSampleSize + 1> evaluate_system(const PolynomialSystem<double> &sys,
                                                                        const Eigen::Vector3cd &a,
                                                                        const Eigen::Vector3cd &t);

} // namespace grsrp

#include "grsrp/refine.h"

#include "grsrp/errors.h"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace grsrp {

namespace {

constexpr double kMaxDamping = 1e16;

struct Rays {
    Vec3 p_i;  // L_i m_i
    Mat3 lt_j; // L_j'
    Vec3 m_j;
};

Rays rays_of(const Correspondence &c) {
    return {linearized_rotation(c.obs_i.w_scaled, c.obs_i.row) * c.obs_i.point.lift(),
            linearized_rotation(c.obs_j.w_scaled, c.obs_j.row).transpose(), c.obs_j.point.lift()};
}

// C = m_j' [t]x L_j' R p_i, with R perturbed on the right by exp([theta]x).
ResidualJacobian residual_of(const Rays &r, const Mat3 &rot, const Vec3 &t) {
    const Vec3 z = r.lt_j * (rot * r.p_i);
    ResidualJacobian out;
    out.value = r.m_j.dot(t.cross(z));
    out.gradient.head<3>() = -(r.m_j.transpose() * skew(t) * r.lt_j * rot * skew(r.p_i));
    out.gradient.tail<3>() = z.cross(r.m_j).transpose();
    return out;
}

struct State {
    Eigen::Quaterniond q;
    Vec3 t;
};

Eigen::Quaterniond exp_quaternion(const Vec3 &theta) {
    const double angle = theta.norm();
    if (angle < 1e-300) {
        return Eigen::Quaterniond::Identity();
    }
    return Eigen::Quaterniond(Eigen::AngleAxisd(angle, theta / angle));
}

double cost_of(const std::vector<Rays> &rays, const State &s, double sqrt_w) {
    const Mat3 rot = s.q.toRotationMatrix();
    double c = 0.0;
    for (const Rays &r : rays) {
        const double v = r.m_j.dot(s.t.cross(r.lt_j * (rot * r.p_i)));
        c += v * v;
    }
    const double scale = sqrt_w * (s.t.squaredNorm() - 1.0);
    return c + scale * scale;
}

} // namespace

void RefineConfig::validate() const {
    if (max_iterations < 1 || !(gradient_tolerance > 0.0) || !(step_tolerance > 0.0) ||
        !(scale_penalty_weight > 0.0)) {
        throw std::invalid_argument("RefineConfig: all settings must be positive");
    }
}

ResidualJacobian refine_residual(const Correspondence &corr, const Rotation &rotation, const Vec3 &t) {
    return residual_of(rays_of(corr), rotation.matrix(), t);
}

RefineReport refine(std::span<const Correspondence> inliers, const RelativePose &initial, const RefineConfig &config) {
    config.validate();
    if (inliers.size() < 5) {
        throw InsufficientData("refine: at least five inliers are required");
    }
    std::vector<Rays> rays;
    rays.reserve(inliers.size());
    for (const Correspondence &c : inliers) {
        rays.push_back(rays_of(c));
    }
    const double sqrt_w = std::sqrt(config.scale_penalty_weight);

    State state{initial.rotation.quaternion().normalized(), initial.translation};
    double cost = cost_of(rays, state, sqrt_w);
    if (!std::isfinite(cost)) {
        throw DivergenceDetected("refine: initial cost is not finite");
    }
    RefineReport report;
    report.initial_cost = cost;
    double damping = 1e-4;

    int it = 0;
    for (; it < config.max_iterations && !report.converged; ++it) {
        const Mat3 rot = state.q.toRotationMatrix();
        Eigen::Matrix<double, 6, 6> jtj = Eigen::Matrix<double, 6, 6>::Zero();
        Eigen::Matrix<double, 6, 1> jtr = Eigen::Matrix<double, 6, 1>::Zero();
        for (const Rays &r : rays) {
            const ResidualJacobian rj = residual_of(r, rot, state.t);
            jtj.noalias() += rj.gradient.transpose() * rj.gradient;
            jtr.noalias() += rj.gradient.transpose() * rj.value;
        }
        const double scale_res = sqrt_w * (state.t.squaredNorm() - 1.0);
        Eigen::Matrix<double, 1, 6> scale_grad = Eigen::Matrix<double, 1, 6>::Zero();
        scale_grad.tail<3>() = 2.0 * sqrt_w * state.t.transpose();
        jtj.noalias() += scale_grad.transpose() * scale_grad;
        jtr.noalias() += scale_grad.transpose() * scale_res;

        if (jtr.lpNorm<Eigen::Infinity>() < config.gradient_tolerance) {
            report.converged = true;
            break;
        }

        bool accepted = false;
        while (!accepted) {
            Eigen::Matrix<double, 6, 6> a = jtj;
            a.diagonal() += damping * jtj.diagonal().cwiseMax(1e-12);
            const Eigen::Matrix<double, 6, 1> step = a.ldlt().solve(-jtr);
            if (!step.allFinite()) {
                throw DivergenceDetected("refine: non-finite step");
            }
            const State trial{(state.q * exp_quaternion(step.head<3>())).normalized(), state.t + step.tail<3>()};
            const double trial_cost = cost_of(rays, trial, sqrt_w);
            if (!std::isfinite(trial_cost)) {
                throw DivergenceDetected("refine: cost became non-finite");
            }
            const double step_size = step.norm();
            if (trial_cost < cost) {
                const double decrease = cost - trial_cost;
                state = trial;
                cost = trial_cost;
                damping = std::max(damping / 10.0, 1e-12);
                accepted = true;
                if (step_size < config.step_tolerance || decrease <= 1e-15 * cost) {
                    report.converged = true;
                }
            } else {
                if (step_size < config.step_tolerance) {
                    // No representable decrease left: we are at the minimum.
                    report.converged = true;
                    break;
                }
                damping *= 10.0;
                if (damping > kMaxDamping) {
                    throw DivergenceDetected("refine: no damping level decreases the cost");
                }
            }
        }
    }

    report.iterations = it;
    report.final_cost = cost;
    report.scale_slack = state.t.norm() - 1.0;
    report.pose = RelativePose(Rotation(Mat3(state.q.normalized().toRotationMatrix())), state.t.normalized());
    return report;
}

} // namespace grsrp

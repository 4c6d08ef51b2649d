#ifndef GRAPHFORMS_NAVIER_STOKES_HPP
#define GRAPHFORMS_NAVIER_STOKES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "graphforms/errors.hpp"
#include "graphforms/neumann.hpp"
#include "graphforms/one_forms.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

/**
 * Solution of the stationary Navier-Stokes system on a graph: a velocity
 * 1-form, constant in time, with the pressure reported as the vertex measure
 * -1/2 * Gamma(velocity).  The viscosity is recorded but never enters the
 * solution: every viscosity term pairs a divergence against a divergence-free
 * field and vanishes, so solving with different viscosities returns bitwise
 * identical velocities and pressures.
 */
struct NsSolution {
    OneForm velocity;
    VertexMeasure pressure;
    double viscosity = 1.0;
    std::optional<NeumannData> boundary;
};

/**
 * Boundary-free solve: the initial velocity must already be divergence free
 * (within tolerance * max(1, |u0|_H)), and the solution is the constant-in-
 * time path at u0.  Nonzero admissible initial conditions exist exactly when
 * the graph has independent cycles.
 */
inline NsSolution solve_ns_free(const WeightedGraph& g, const OneForm& initial, double viscosity,
                                double tolerance = 1e-10) {
    detail::check_form(g, initial, "solve_ns_free");
    const GraphFunction divergence = codifferential(g, initial);
    const double div_norm =
        std::sqrt(divergence.dot(g.vertex_measure().asDiagonal() * divergence));
    if (div_norm > tolerance * std::max(1.0, form_norm(g, initial)))
        throw PreconditionError(
            "solve_ns_free: initial velocity is not divergence free (residual " +
            std::to_string(div_norm) + ")");
    return NsSolution{initial, -0.5 * form_energy_measure(g, initial), viscosity, std::nullopt};
}

/**
 * Boundary-value solve: h solves the Neumann problem for the given fluxes,
 * the velocity is its derivation, and the pressure is -1/2 * Gamma(h).  The
 * velocity is orthogonal to d(psi) for every psi vanishing on the boundary
 * set, since h is harmonic there.
 */
inline NsSolution solve_ns_boundary(const WeightedGraph& g, const NeumannData& data,
                                    double viscosity) {
    const GraphFunction h = solve_neumann(g, data);
    return NsSolution{derivation(g, h), -0.5 * energy_measure(g, h), viscosity, data};
}

/// Residuals of the weak formulation on a grid of test forms and times.
struct WeakSolutionReport {
    double velocity_divergence = 0.0;     // |d*u|_{L2(m)} / max(1, |u|_H)
    bool velocity_admissible = false;
    std::vector<double> form_divergences; // same normalization, per test form
    std::vector<bool> form_admissible;
    Eigen::MatrixXd residuals;            // rows: test forms, cols: times
    double max_residual = 0.0;            // over admissible test forms
    bool pass = false;
    std::vector<double> times;
};

/**
 * Evaluate the weak-formulation residual
 *   r(v,t) = <u(t),v> - <u(0),v> + (1/2) int_0^t dGamma(u)(v) ds
 *            + viscosity * int_0^t <d*u, d*v>_{L2(m)} ds
 * for each test form and time.  Solutions are stationary, so the time
 * integrals are t times the stationary integrands, evaluated in closed form.
 * Test forms should be divergence free; any that are not are excluded from
 * the pass verdict and flagged.  The verdict also requires the velocity
 * itself to be divergence free, which is what rejects hand-built "solutions"
 * with an exact component.
 */
inline WeakSolutionReport verify_weak_solution(const WeightedGraph& g, const NsSolution& sol,
                                               const std::vector<OneForm>& test_forms,
                                               const std::vector<double>& times,
                                               double tolerance = 1e-10) {
    detail::check_form(g, sol.velocity, "verify_weak_solution");
    WeakSolutionReport report;
    report.times = times;

    const GraphFunction u_div = codifferential(g, sol.velocity);
    const double u_scale = std::max(1.0, form_norm(g, sol.velocity));
    report.velocity_divergence =
        std::sqrt(u_div.dot(g.vertex_measure().asDiagonal() * u_div)) / u_scale;
    report.velocity_admissible = report.velocity_divergence <= tolerance;

    report.residuals.resize(static_cast<Eigen::Index>(test_forms.size()),
                            static_cast<Eigen::Index>(times.size()));
    report.residuals.setZero();

    for (size_t k = 0; k < test_forms.size(); ++k) {
        const OneForm& v = test_forms[k];
        detail::check_form(g, v, "verify_weak_solution test form");
        const GraphFunction v_div = codifferential(g, v);
        const double v_scale = std::max(1.0, form_norm(g, v));
        const double v_div_norm =
            std::sqrt(v_div.dot(g.vertex_measure().asDiagonal() * v_div)) / v_scale;
        report.form_divergences.push_back(v_div_norm);
        const bool admissible = v_div_norm <= tolerance;
        report.form_admissible.push_back(admissible);

        // Stationary integrands.
        const double convection =
            0.5 * form_energy_measure_derivation(g, sol.velocity, v);
        const double viscous =
            sol.viscosity * u_div.dot(g.vertex_measure().asDiagonal() * v_div);
        for (size_t t = 0; t < times.size(); ++t) {
            const double r = times[t] * (convection + viscous);
            report.residuals(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) = r;
            if (admissible) report.max_residual = std::max(report.max_residual, std::abs(r));
        }
    }
    report.pass = report.velocity_admissible && report.max_residual <= tolerance;
    return report;
}

} // namespace graphforms

#endif

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyorb/geometry.hpp"
#include "polyorb/ode.hpp"

namespace polyorb {

// Thrown when a loop passes within 1e-8 of a rotation axis at a quadrature
// node, where the trapezoid sums are unreliable.
struct NearCollision : std::runtime_error {
    explicit NearCollision(double d)
        : std::runtime_error("loop passes within " + std::to_string(d) + " of a rotation axis"),
          clearance(d) {}
    double clearance;
};

// Thrown when the relaxation step scale collapses without the action
// decreasing: the descent direction is unusable.
struct Diverged : std::runtime_error {
    Diverged() : std::runtime_error("relaxation failed to decrease the action") {}
};

// Truncated Fourier representation of a T-periodic loop,
//
//   u(t) = a_0/2 + sum_{k=1}^{F} a_k cos(2 pi k t/T) + b_k sin(2 pi k t/T).
//
// Columns of a are a_0..a_F; columns of b align with a and b.col(0) is kept
// identically zero (there is no b_0 coefficient).
struct FourierLoop {
    double period = 1.0;
    Eigen::Matrix3Xd a;
    Eigen::Matrix3Xd b;

    int order() const { return static_cast<int>(a.cols()) - 1; }
    Eigen::Vector3d position(double t) const;
    Eigen::Vector3d velocity(double t) const;
    Eigen::Vector3d acceleration(double t) const;
    Vec6 phase(double t) const;
};

// Coefficient-space gradient of the action, same layout as FourierLoop.
struct LoopGradient {
    Eigen::Matrix3Xd a;
    Eigen::Matrix3Xd b;
    double max_norm() const;
};

// u(t + T/shifts) = element * u(t)
struct ChoreographyConstraint {
    Eigen::Matrix3d element;
    int shifts;
};

struct RelaxationSettings {
    double delta = 0.1;        // dimensionless step scale
    int grid_points = 0;       // 0 -> 8 * order
    double stop_increment = 1e-8;
    double stop_residual = 1e-6;
    int max_iters = 20000;
    int project_every = 100;   // re-project the symmetry constraint
};

struct RelaxationDiagnostics {
    std::vector<double> action_history;  // one entry per accepted step
    double final_increment = 0.0;
    double final_residual = 0.0;
    double min_clearance = 0.0;          // of the final loop, over the grid
    int iterations = 0;
    bool converged = false;
    double delta_used = 0.0;
};

struct RelaxationResult {
    FourierLoop loop;
    RelaxationDiagnostics diag;
};

// Action functional of a loop under a rotation-group potential, evaluated by
// uniform trapezoid sums over one period.
class LoopAction {
  public:
    explicit LoopAction(const RotationGroup& group);

    const NBodyField& field() const { return field_; }
    const std::vector<Eigen::Vector3d>& axes() const { return axes_; }

    // distance from u to the nearest rotation axis
    double clearance(const Eigen::Vector3d& u) const;
    double loop_clearance(const FourierLoop& loop, int grid_points = 0) const;

    // action per generating particle, 1/2 |u'|^2 + U(u) integrated over one
    // period; multiply by the group order for the full loop action
    double discrete_action(const FourierLoop& loop, int grid_points = 0) const;
    LoopGradient action_gradient(const FourierLoop& loop, int grid_points = 0) const;

    // max over grid nodes of |u'' - grad U(u)|
    double residual_acceleration(const FourierLoop& loop, int grid_points = 0) const;

  private:
    NBodyField field_;
    std::vector<Eigen::Vector3d> axes_;
};

// One direction per rotation axis (antipodal poles merged).
std::vector<Eigen::Vector3d> axis_directions(const RotationGroup& group);

// Closed-form kinetic part, sum_k (pi k)^2 (|a_k|^2 + |b_k|^2) / T.
double kinetic_action(const FourierLoop& loop);

// Exact gradient of the kinetic part alone, 2 (pi k)^2 a_k / T and likewise
// for b; the zero-potential special case of action_gradient.
LoopGradient kinetic_gradient(const FourierLoop& loop);

// Dilation factor minimizing the action of the piecewise-linear loop through
// the vertex sequence nu over dilations of the polyhedron.
double pl_scale(const Polyhedron& poly, const NBodyField& field, const std::vector<int>& nu,
                double period);

// Point at time t on the piecewise-linear loop through scale * vertices(nu),
// traversed at constant speed.
Eigen::Vector3d pl_position(const Polyhedron& poly, const std::vector<int>& nu, double scale,
                            double period, double t);

// Fourier coefficients of the optimally dilated piecewise-linear loop,
// sampled uniformly in time and transformed.
FourierLoop init_from_sequence(const Polyhedron& poly, const NBodyField& field,
                               const std::vector<int>& nu, int order, double period);

// Symmetry element carrying nu forward by nu.size()/shifts steps.
ChoreographyConstraint class_constraint(const Polyhedron& poly, const std::vector<int>& nu,
                                        int shifts);

// Max-norm deviation of the coefficients from the constraint fixed-point set.
double choreography_defect(const FourierLoop& loop, const ChoreographyConstraint& c);

// Group-average the coefficients onto the constraint fixed-point set.
void choreography_project(FourierLoop& loop, const ChoreographyConstraint& c);

// Re-expand the loop to a different truncation order.
FourierLoop resample(const FourierLoop& loop, int new_order);

// Per-mode update time scale, T delta / (2 (pi max(k,1))^2).
double relaxation_step_scale(int k, double period, double delta);

// Preconditioned descent on the truncated action with step halving; stops on
// small increments or small residual acceleration.
RelaxationResult relax(const LoopAction& act, const FourierLoop& init,
                       const RelaxationSettings& settings = {},
                       const ChoreographyConstraint* constraint = nullptr);

}  // namespace polyorb

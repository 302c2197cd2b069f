#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyorb/geometry.hpp"

namespace polyorb {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Thrown when a configuration point lies on (or within 1e-12 of) a rotation
// axis, where the potential is singular.
struct OnAxis : std::runtime_error {
    OnAxis() : std::runtime_error("configuration point lies on a rotation axis") {}
};

// Thrown by the adaptive driver when the accepted step size collapses below
// the resolution of the time variable (typically on a collision course).
struct StepSizeUnderflow : std::runtime_error {
    explicit StepSizeUnderflow(double t_reached)
        : std::runtime_error("adaptive step size underflow at t = " + std::to_string(t_reached)),
          t(t_reached) {}
    double t;
};

struct IntegratorSettings {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = 0.1;
    double init_step = 1e-3;
    int order = 8;  // embedded 7(8) pair; the only method provided
};

// Reduced equations of motion for one generating particle moving in the field
// of its images under a rotation group:
//
//   U(u) = 1/2 sum_{R != I} 1/|(R - I) u|,      u'' = grad U(u)
//
// (the interaction is attractive; U blows up on the rotation axes).
// Value-semantic and reentrant: instances hold only the fixed matrices R - I.
class NBodyField {
  public:
    explicit NBodyField(const RotationGroup& group);

    double potential(const Eigen::Vector3d& u) const;
    Eigen::Vector3d gradient(const Eigen::Vector3d& u) const;
    Eigen::Matrix3d hessian(const Eigen::Vector3d& u) const;

    // min over R != I of |(R - I) u|: distance from the particle to its
    // nearest image, used as the near-collision indicator.
    double separation(const Eigen::Vector3d& u) const;

    int n_images() const { return static_cast<int>(a_.size()); }

  private:
    std::vector<Eigen::Matrix3d> a_;  // R - I for every non-identity R
};

struct VariationalState {
    Vec6 x;
    Mat6 m;  // fundamental solution, m = Id at t = 0
};

using StepObserver = std::function<void(double, const Vec6&)>;

// (u, v) -> (v, grad U(u))
Vec6 vector_field(const NBodyField& field, const Vec6& x);

// Jacobian of vector_field: [[0, I], [hessian, 0]].
Mat6 vector_field_jacobian(const NBodyField& field, const Vec6& x);

Vec6 flow(const NBodyField& field, const Vec6& x0, double t,
          const IntegratorSettings& settings = {});

// As flow, but calls observe(t_k, x_k) at t = 0 and after every accepted
// step; consecutive calls bracket section crossings for event location.
Vec6 flow(const NBodyField& field, const Vec6& x0, double t,
          const IntegratorSettings& settings, const StepObserver& observe);

VariationalState flow_with_variation(const NBodyField& field, const Vec6& x0, double t,
                                     const IntegratorSettings& settings = {});

// E = 1/2 |v|^2 - U(u), conserved along the flow.
double energy(const NBodyField& field, const Vec6& x);

// diag(R, R): action of a group element on phase space.
Mat6 phase_symmetry(const Eigen::Matrix3d& r);

// Canonical symplectic form [[0, I], [-I, 0]].
Mat6 symplectic_form();

}  // namespace polyorb

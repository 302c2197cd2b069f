#pragma once

#include "polyorb/geometry.hpp"

namespace polyorb {

/* Unit normals of the reflection planes of the full polyhedral symmetry
   group: 6 for T, 9 for O, 15 for I. The planes cut the sphere into 2N
   spherical triangles. */
std::vector<Eigen::Vector3d> mirror_normals(Group g);

/* A tessellation cell is identified by its vector of signs against the
   mirror normals; +-1 entries only for open cells, 0 marks points on a
   plane. */
using SignVector = std::vector<int>;

struct MidpointOnPlane : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Tessellation {
 public:
  explicit Tessellation(const RotationGroup& rot);

  const std::vector<Eigen::Vector3d>& normals() const { return nrm_; }
  const std::vector<Pole>& poles() const { return poles_; }

  SignVector sign_vec(const Eigen::Vector3d& x, double tol = 1e-9) const;

  /* Cyclic cell itinerary of the piecewise-linear loop through pts.
     Consecutive duplicates are collapsed, cyclically. Every polyhedron
     vertex sits on exactly one mirror plane, so cells are sampled at
     strict-interior segment midpoints; a midpoint landing on a plane is a
     geometry failure, reported as MidpointOnPlane. */
  std::vector<SignVector> string_of_loop(
      const std::vector<Eigen::Vector3d>& pts) const;

  /* Pole lies in the closed cell: no normal separates them strictly. */
  bool pole_in_closure(const Eigen::Vector3d& p, const SignVector& sv,
                       double tol = 1e-9) const;

  /* table[pole][k] = pole in closure of cell k of the string. */
  std::vector<std::vector<bool>> contains_table(
      const std::vector<SignVector>& string) const;

  /* Some axis endpoint lies in the closure of every cell of the string:
     the loop stays inside one cone and cannot be action-minimizing. */
  bool winds_one_axis(const std::vector<std::vector<bool>>& tab) const;

  /* A cyclic run of 2*order+1 cells around one pole means the loop makes a
     full turn around that axis and crosses itself there. */
  std::vector<std::pair<int, int>> nonsimple_poles(
      const std::vector<std::vector<bool>>& tab) const;
  bool is_simple(const std::vector<std::vector<bool>>& tab) const;

  /* Two poles adjacent in the tessellation (sharing a string cell) whose
     full-turn windows of width 2*order jointly cover the whole string: the
     loop is a coboundary of the two-axis wedge and unwinds. */
  bool winds_two_coboundary(const std::vector<std::vector<bool>>& tab) const;

 private:
  std::vector<Eigen::Vector3d> nrm_;
  std::vector<Pole> poles_;
};

}  // namespace polyorb

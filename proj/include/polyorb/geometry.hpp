#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyorb {

enum class Group { T, O, I };

Group parse_group(const std::string& name);
std::string group_name(Group g);

/* Number of bodies = group order. */
int group_order(Group g);

struct Pole {
  Eigen::Vector3d dir;  // unit vector
  int order;            // order of the maximal cyclic subgroup fixing the axis
};

struct Face {
  std::vector<int> cycle;  // vertex indices, consecutive = edges
  int size;                // 3, 4 or 5
  Eigen::Vector3d pole;    // unit centroid direction
  int pole_order;
};

/* Rotation group generated by two documented generators, identity first.
   words[k] lists generator indices whose product (left to right) equals
   elements[k]; kept so that other representations of the same group (for
   instance rigorous interval matrices) can be rebuilt element by element. */
struct RotationGroup {
  Group name;
  std::vector<Eigen::Matrix3d> elements;
  std::vector<std::vector<int>> words;
  int order() const { return static_cast<int>(elements.size()); }
};

std::vector<Eigen::Matrix3d> group_generators(Group g);
RotationGroup generate_group(Group g);

/* One Pole per axis-sphere intersection; closed under negation. */
std::vector<Pole> compute_poles(const RotationGroup& group);

struct Polyhedron {
  Group group;
  RotationGroup rot;
  std::vector<Pole> poles;

  std::vector<Eigen::Vector3d> vertices;  // unit sphere, lexicographic order
  double edge_length = 0.0;

  // adjacency(i,j) in {0,1,2}: 0 not adjacent, otherwise the edge type.
  // Type 1 is the square|triangle kind for every group.
  Eigen::MatrixXi adjacency;
  std::vector<std::vector<int>> neighbors;  // ascending vertex index

  std::vector<Face> faces;

  // perm[g][i] = j with R_g V_i = V_j
  std::vector<std::vector<int>> perm;
  // (i, perm[g][i]) -> g; the vertex action is simply transitive
  std::map<std::pair<int, int>, int> pair_to_element;
  // vertex permutations induced by the full symmetry group of the solid
  // (rotations and reflections), deduplicated, sorted
  std::vector<std::vector<int>> symmetry_perms;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int edge_type(int i, int j) const;
};

Polyhedron build_polyhedron(Group g);

/* perm tables for every group element; throws NoMatchingVertex on tolerance
   breach (1e-9). Exposed separately from build_polyhedron for testing. */
std::vector<std::vector<int>> vertex_permutations(
    const RotationGroup& group, const std::vector<Eigen::Vector3d>& vertices);

struct NoMatchingVertex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* (1/L) * integral along edge (a,b) of sum_{R != I} 1/|(R - I)v| ds,
   Gauss-Legendre with npts nodes. */
double zeta_integral(const RotationGroup& group, const Eigen::Vector3d& a,
                     const Eigen::Vector3d& b, int npts = 400);

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle);

}  // namespace polyorb

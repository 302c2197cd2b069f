#pragma once

#include "polyorb/geometry.hpp"
#include "polyorb/tessellation.hpp"

#include <optional>

namespace polyorb {

struct InadmissibleM : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonAdjacentStep : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/* Compiled-in bound constants: per-(group, M) action lower bound alpha at
   T=1, edge integrals zeta1 >= zeta2, and edge length ell. */
struct BoundConstants {
  double alpha;
  double zeta1, zeta2;
  double ell;
  double period;
};

/* Throws InadmissibleM outside T:1..3, O:1..4, I:1,2,3,5. */
BoundConstants bound_constants(Group g, int M, double period = 1.0);

std::vector<int> admissible_M(Group g);

/* A(v) = 3/(2*4^(1/3)) N ell^(2/3) (k1 zeta1 + k2 zeta2)^(2/3) T^(1/3):
   action of the piecewise linear loop with k1+k2 sides. */
double action_of_linear_loop(int k1, int k2, const BoundConstants& c, int N);

struct LengthBound {
  int l_max;  // longest sequence admitted by the action bound
  double K;   // k1 zeta1 + k2 zeta2 < K (strict)
};

LengthBound max_length(Group g, int M, double period = 1.0);

/* Published length-bound and class-count tables, for calibration. */
std::map<int, int> published_max_lengths(Group g);
std::map<int, int> published_class_counts(Group g);

/* Walk of l_over_M steps from vertex 0. The first step is pinned to the
   lowest neighbor; each later step picks among the three non-backtracking
   neighbors in ascending order by the base-3 digits of h (most significant
   digit first). Returns l_over_M + 1 vertices. */
std::vector<int> generate_candidate(long long h, int l_over_M,
                                    const Polyhedron& P);

long long candidate_count(int l_over_M);  // 3^(l_over_M - 1)

/* Closes a walk into a choreographic sequence: the group element mapping
   hat.front() to hat.back() extends the walk to M blocks. Rejects (nullopt)
   unless the extension closes up, is a valid non-backtracking cycle, and
   the element shifts the whole sequence by l/M. */
std::optional<std::vector<int>> choreography_extend(const std::vector<int>& hat,
                                                    const Polyhedron& P, int M);

int minimal_period(const std::vector<int>& nu);

/* Smallest s in 1..l such that some group element maps nu to nu shifted
   by s; l itself always works via the identity. */
int min_shift(const Polyhedron& P, const std::vector<int>& nu);

/* (k1, k2); throws NonAdjacentStep if a step is not an edge. */
std::pair<int, int> edge_type_counts(const Polyhedron& P,
                                     const std::vector<int>& nu);

/* Coercivity screen by vertex count: a loop touching only 3 or 4 vertices
   stays in one face cone; on the I solid a 5-vertex loop fails iff the
   vertex mean sits on a rotation axis. */
bool winds_one_axis(const Polyhedron& P, const std::vector<int>& nu);

/* Template test: nu is exactly a concatenated boundary tour of two faces
   with poles of different orders (shared vertex or shared edge). Only
   meaningful for M=1. */
bool winds_two_coboundary(const Polyhedron& P, const std::vector<int>& nu);

/* Face-tour case analysis: false iff the loop runs a full face boundary
   and re-enters on the bad side, with cases iii/iv separated by the sign
   of (a x d).(b x c); any full tour of a square on an order-2 axis is
   non-simple. */
bool is_simple_cone(const Polyhedron& P, const std::vector<int>& nu);

/* Lexicographically smallest cyclic shift. */
std::vector<int> rotation_canonical(const std::vector<int>& nu);

/* Lexicographically smallest over full polyhedral symmetry x reversal x
   cyclic shifts; the class representative. */
std::vector<int> canonical_class(const Polyhedron& P,
                                 const std::vector<int>& nu);

struct OrbitClass {
  std::vector<int> nu;  // canonical representative
  int M = 0;
  int minimal_period = 0;
  int k1 = 0, k2 = 0;
  double action = 0.0;  // A(v) of the linear loop
};

struct FilterStats {
  long long generated = 0;
  long long not_choreographic = 0;
  long long not_minimal = 0;
  long long wrong_shift = 0;
  long long over_action_bound = 0;
  long long winds_one = 0;
  long long not_simple = 0;
  long long coboundary = 0;
  long long survivors = 0;
};

/* Full pipeline for one (group, M): generate, filter through the cell
   itinerary of the mirror tessellation, deduplicate. Sorted by (length,
   sequence). */
std::vector<OrbitClass> enumerate_classes(const Polyhedron& P,
                                          const Tessellation& tess, int M,
                                          double period = 1.0,
                                          FilterStats* stats = nullptr);

std::vector<OrbitClass> enumerate_all(const Polyhedron& P,
                                      const Tessellation& tess,
                                      double period = 1.0);

}  // namespace polyorb

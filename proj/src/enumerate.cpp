#include "polyorb/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polyorb {

namespace {

struct AlphaRow {
  Group g;
  int M;
  double alpha;
};

const AlphaRow kAlpha[] = {
    {Group::T, 1, 132.695},  {Group::T, 2, 210.640},  {Group::T, 3, 276.017},
    {Group::O, 1, 457.184},  {Group::O, 2, 725.734},  {Group::O, 3, 950.981},
    {Group::O, 4, 1152.032}, {Group::I, 1, 2296.892}, {Group::I, 2, 3646.089},
    {Group::I, 3, 4777.728}, {Group::I, 5, 6716.154},
};

struct ZetaRow {
  double ell, zeta1, zeta2;
};

ZetaRow zeta_row(Group g) {
  switch (g) {
    case Group::T: return {1.0, 9.5084, 9.5084};
    case Group::O: return {0.7149, 20.3225, 19.7400};
    case Group::I: return {0.4479, 53.9904, 52.5762};
  }
  throw std::logic_error("bad group enum");
}

}  // namespace

BoundConstants bound_constants(Group g, int M, double period) {
  for (const auto& row : kAlpha)
    if (row.g == g && row.M == M) {
      ZetaRow z = zeta_row(g);
      return {row.alpha, z.zeta1, z.zeta2, z.ell, period};
    }
  throw InadmissibleM("no collision bound for " + group_name(g) + ", M=" +
                      std::to_string(M));
}

std::vector<int> admissible_M(Group g) {
  std::vector<int> out;
  for (const auto& row : kAlpha)
    if (row.g == g) out.push_back(row.M);
  return out;
}

double action_of_linear_loop(int k1, int k2, const BoundConstants& c, int N) {
  if (k1 < 0 || k2 < 0 || k1 + k2 == 0)
    throw std::invalid_argument("edge counts must be nonnegative, not both 0");
  double s = k1 * c.zeta1 + k2 * c.zeta2;
  return 3.0 / (2.0 * std::cbrt(4.0)) * N * std::pow(c.ell, 2.0 / 3.0) *
         std::pow(s, 2.0 / 3.0) * std::cbrt(c.period);
}

LengthBound max_length(Group g, int M, double period) {
  BoundConstants c = bound_constants(g, M, period);
  int N = group_order(g);
  double K = std::pow(c.alpha * 2.0 * std::cbrt(4.0) /
                          (3.0 * std::cbrt(period)) / N /
                          std::pow(c.ell, 2.0 / 3.0),
                      1.5);
  double zmin = std::min(c.zeta1, c.zeta2);
  int l = static_cast<int>(K / zmin);
  if (l * zmin >= K) --l;  // the bound is strict
  return {l, K};
}

std::map<int, int> published_max_lengths(Group g) {
  switch (g) {
    case Group::T: return {{1, 4}, {2, 8}, {3, 12}};
    case Group::O: return {{1, 6}, {2, 12}, {3, 19}, {4, 25}};
    case Group::I: return {{1, 10}, {2, 21}, {3, 32}, {5, 54}};
  }
  throw std::logic_error("bad group enum");
}

std::map<int, int> published_class_counts(Group g) {
  switch (g) {
    case Group::T: return {{2, 3}, {3, 6}};
    case Group::O: return {{2, 24}, {3, 18}, {4, 15}};
    case Group::I: return {{1, 28}, {2, 386}, {3, 455}, {5, 573}};
  }
  throw std::logic_error("bad group enum");
}

long long candidate_count(int l_over_M) {
  long long n = 1;
  for (int i = 1; i < l_over_M; ++i) n *= 3;
  return n;
}

std::vector<int> generate_candidate(long long h, int l_over_M,
                                    const Polyhedron& P) {
  const int k = l_over_M;
  if (h < 0 || h >= candidate_count(k))
    throw std::invalid_argument("candidate index out of range");
  // base-3 digits of h, most significant first, one per free step
  std::vector<int> digits(k - 1, 0);
  for (int i = k - 2; i >= 0; --i) {
    digits[i] = static_cast<int>(h % 3);
    h /= 3;
  }
  std::vector<int> path{0, P.neighbors[0].front()};
  for (int step = 0; step < k - 1; ++step) {
    int last = path.back(), prev = path[path.size() - 2];
    int seen = 0, chosen = -1;
    for (int nb : P.neighbors[last]) {
      if (nb == prev) continue;
      if (seen++ == digits[step]) {
        chosen = nb;
        break;
      }
    }
    path.push_back(chosen);
  }
  return path;
}

std::optional<std::vector<int>> choreography_extend(const std::vector<int>& hat,
                                                    const Polyhedron& P,
                                                    int M) {
  const int k = static_cast<int>(hat.size()) - 1;
  const int l = k * M;
  const auto& p = P.perm[P.pair_to_element.at({hat[0], hat[k]})];
  std::vector<int> nu(hat.begin(), hat.begin() + k);
  std::vector<int> cur = nu;
  for (int m = 1; m < M; ++m) {
    for (int& x : cur) x = p[x];
    nu.insert(nu.end(), cur.begin(), cur.end());
  }
  // closing the M-th block must return to the start
  int q = hat[0];
  for (int m = 0; m < M; ++m) q = p[q];
  if (q != nu[0]) return std::nullopt;
  for (int i = 0; i < l; ++i) {
    int a = nu[(i + l - 1) % l], b = nu[i], c = nu[(i + 1) % l];
    if (P.adjacency(a, b) == 0 && a != b) return std::nullopt;
    if (P.adjacency(b, c) == 0) return std::nullopt;
    if (a == c) return std::nullopt;
  }
  for (int j = 0; j < l; ++j)
    if (p[nu[j]] != nu[(j + k) % l]) return std::nullopt;
  return nu;
}

int minimal_period(const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  for (int p = 1; p < l; ++p) {
    if (l % p) continue;
    bool ok = true;
    for (int j = 0; j < l && ok; ++j) ok = nu[j] == nu[(j + p) % l];
    if (ok) return p;
  }
  return l;
}

int min_shift(const Polyhedron& P, const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  for (int s = 1; s <= l; ++s) {
    const auto& p = P.perm[P.pair_to_element.at({nu[0], nu[s % l]})];
    bool ok = true;
    for (int j = 0; j < l && ok; ++j) ok = p[nu[j]] == nu[(j + s) % l];
    if (ok) return s;
  }
  return l;
}

std::pair<int, int> edge_type_counts(const Polyhedron& P,
                                     const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  int k1 = 0, k2 = 0;
  for (int j = 0; j < l; ++j) {
    int t = P.adjacency(nu[j], nu[(j + 1) % l]);
    if (t == 0) throw NonAdjacentStep("sequence step is not an edge");
    (t == 1 ? k1 : k2)++;
  }
  return {k1, k2};
}

bool winds_one_axis(const Polyhedron& P, const std::vector<int>& nu) {
  std::set<int> distinct(nu.begin(), nu.end());
  const int m = static_cast<int>(distinct.size());
  if (m == 3 || m == 4) return true;
  if (P.group == Group::I && m == 5) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int i : distinct) c += P.vertices[i];
    c /= static_cast<double>(m);
    double n = c.norm();
    if (n < 1e-9) return false;
    c /= n;
    for (const auto& pole : P.poles)
      if ((c - pole.dir).norm() < 1e-6) return true;
  }
  return false;
}

namespace {

/* Boundary tours of two faces with poles of different orders, glued at a
   shared vertex or along a shared edge. */
std::vector<std::vector<int>> coboundary_templates(const Polyhedron& P) {
  std::vector<std::vector<int>> out;
  const int nf = static_cast<int>(P.faces.size());
  for (int i = 0; i < nf; ++i)
    for (int j = i + 1; j < nf; ++j) {
      if (P.faces[i].pole_order == P.faces[j].pole_order) continue;
      const auto& A = P.faces[i].cycle;
      const auto& B = P.faces[j].cycle;
      std::vector<int> shared;
      for (int a : A)
        if (std::count(B.begin(), B.end(), a)) shared.push_back(a);
      const int sA = static_cast<int>(A.size());
      const int sB = static_cast<int>(B.size());
      if (shared.size() == 1) {
        int u = shared[0];
        int ia = static_cast<int>(std::find(A.begin(), A.end(), u) - A.begin());
        int ib = static_cast<int>(std::find(B.begin(), B.end(), u) - B.begin());
        std::vector<int> tour;
        for (int t = 0; t < sA; ++t) tour.push_back(A[(ia + t) % sA]);
        for (int t = 0; t < sB; ++t) tour.push_back(B[(ib + t) % sB]);
        out.push_back(std::move(tour));
      } else if (shared.size() == 2) {
        int v = std::min(shared[0], shared[1]);
        int w = std::max(shared[0], shared[1]);
        auto long_way = [](const std::vector<int>& F, int from, int to) {
          const int s = static_cast<int>(F.size());
          int i0 =
              static_cast<int>(std::find(F.begin(), F.end(), from) - F.begin());
          std::vector<int> walk;
          for (int t = 0; t < s; ++t) walk.push_back(F[(i0 + t) % s]);
          if (walk[1] == to) {
            walk.clear();
            for (int t = 0; t < s; ++t) walk.push_back(F[(i0 - t + s) % s]);
          }
          int iw = static_cast<int>(
              std::find(walk.begin(), walk.end(), to) - walk.begin());
          walk.resize(iw + 1);
          return walk;
        };
        auto pathA = long_way(A, v, w);
        auto pathB = long_way(B, w, v);
        std::vector<int> tour(pathA.begin(), pathA.end() - 1);
        tour.insert(tour.end(), pathB.begin(), pathB.end() - 1);
        out.push_back(std::move(tour));
      }
    }
  return out;
}

}  // namespace

bool winds_two_coboundary(const Polyhedron& P, const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  for (const auto& tpl : coboundary_templates(P)) {
    if (static_cast<int>(tpl.size()) != l) continue;
    for (int rev = 0; rev < 2; ++rev) {
      std::vector<int> t = tpl;
      if (rev) std::reverse(t.begin(), t.end());
      for (int s = 0; s < l; ++s) {
        bool eq = true;
        for (int j = 0; j < l && eq; ++j) eq = nu[j] == t[(j + s) % l];
        if (eq) return true;
      }
    }
  }
  return false;
}

bool is_simple_cone(const Polyhedron& P, const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  std::map<std::vector<int>, int> face_by_set;
  for (size_t fi = 0; fi < P.faces.size(); ++fi) {
    std::vector<int> key = P.faces[fi].cycle;
    std::sort(key.begin(), key.end());
    face_by_set[key] = static_cast<int>(fi);
  }
  for (int j = 0; j < l; ++j)
    for (int s : {3, 4, 5}) {
      if (nu[j] != nu[(j + s) % l]) continue;
      std::vector<int> window;
      for (int t = 0; t < s; ++t) window.push_back(nu[(j + t) % l]);
      std::vector<int> key = window;
      std::sort(key.begin(), key.end());
      if (std::unique(key.begin(), key.end()) != key.end()) continue;
      auto it = face_by_set.find(key);
      if (it == face_by_set.end()) continue;
      const Face& f = P.faces[it->second];
      // full tour of a face whose pole order is below the face size always
      // pinches the cone (order-2 squares)
      if (f.pole_order < s) return false;
      int leave = nu[(j + s + 1) % l];
      int enter = nu[(j + l - 1) % l];
      // leaving vertex inside the toured face
      if (std::count(window.begin(), window.end(), leave)) return false;
      // entering and leaving through the same side
      if (leave == enter) return false;
      Eigen::Vector3d a = P.vertices[nu[j]] - P.vertices[enter];
      Eigen::Vector3d d = P.vertices[leave] - P.vertices[nu[(j + s) % l]];
      Eigen::Vector3d b = P.vertices[nu[(j + 1) % l]] - P.vertices[nu[j]];
      Eigen::Vector3d c =
          P.vertices[nu[(j + s) % l]] - P.vertices[nu[(j + s - 1) % l]];
      if (a.cross(d).dot(b.cross(c)) > 0) return false;
    }
  return true;
}

std::vector<int> rotation_canonical(const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  std::vector<int> best = nu;
  std::vector<int> cur(l);
  for (int s = 1; s < l; ++s) {
    for (int j = 0; j < l; ++j) cur[j] = nu[(j + s) % l];
    if (cur < best) best = cur;
  }
  return best;
}

std::vector<int> canonical_class(const Polyhedron& P,
                                 const std::vector<int>& nu) {
  const int l = static_cast<int>(nu.size());
  std::vector<int> best;
  std::vector<int> mapped(l);
  for (int rev = 0; rev < 2; ++rev) {
    std::vector<int> d = nu;
    if (rev) std::reverse(d.begin(), d.end());
    for (const auto& p : P.symmetry_perms) {
      for (int j = 0; j < l; ++j) mapped[j] = p[d[j]];
      std::vector<int> m = rotation_canonical(mapped);
      if (best.empty() || m < best) best = std::move(m);
    }
  }
  return best;
}

std::vector<OrbitClass> enumerate_classes(const Polyhedron& P,
                                          const Tessellation& tess, int M,
                                          double period, FilterStats* stats) {
  FilterStats local;
  FilterStats& st = stats ? *stats : local;
  LengthBound lb = max_length(P.group, M, period);
  BoundConstants c = bound_constants(P.group, M, period);
  std::vector<std::pair<std::vector<int>, int>> survivors;  // (nu, l)
  for (int l = 6; l <= lb.l_max; ++l) {
    if (l % M) continue;
    const int k = l / M;
    for (long long h = 0; h < candidate_count(k); ++h) {
      ++st.generated;
      auto hat = generate_candidate(h, k, P);
      auto ext = choreography_extend(hat, P, M);
      if (!ext) {
        ++st.not_choreographic;
        continue;
      }
      const std::vector<int>& nu = *ext;
      if (minimal_period(nu) != l) {
        ++st.not_minimal;
        continue;
      }
      int ks = min_shift(P, nu);
      if (l / ks != M || l % ks) {
        ++st.wrong_shift;
        continue;
      }
      auto [k1, k2] = edge_type_counts(P, nu);
      if (k1 * c.zeta1 + k2 * c.zeta2 >= lb.K) {
        ++st.over_action_bound;
        continue;
      }
      std::vector<Eigen::Vector3d> pts;
      for (int i : nu) pts.push_back(P.vertices[i]);
      auto string = tess.string_of_loop(pts);
      auto tab = tess.contains_table(string);
      if (tess.winds_one_axis(tab)) {
        ++st.winds_one;
        continue;
      }
      if (!tess.is_simple(tab)) {
        ++st.not_simple;
        continue;
      }
      if (M == 1 && tess.winds_two_coboundary(tab)) {
        ++st.coboundary;
        continue;
      }
      ++st.survivors;
      survivors.emplace_back(nu, l);
    }
  }
  // dedup: cheap rotation pass, then the full class quotient
  std::set<std::vector<int>> rot;
  for (auto& [nu, l] : survivors) rot.insert(rotation_canonical(nu));
  std::set<std::vector<int>> classes;
  for (const auto& nu : rot) classes.insert(canonical_class(P, nu));
  std::vector<OrbitClass> out;
  for (const auto& nu : classes) {
    OrbitClass oc;
    oc.nu = nu;
    oc.M = M;
    oc.minimal_period = static_cast<int>(nu.size());
    std::tie(oc.k1, oc.k2) = edge_type_counts(P, nu);
    oc.action = action_of_linear_loop(oc.k1, oc.k2, c, P.n_vertices());
    out.push_back(std::move(oc));
  }
  std::sort(out.begin(), out.end(), [](const OrbitClass& a, const OrbitClass& b) {
    return std::make_pair(a.nu.size(), a.nu) < std::make_pair(b.nu.size(), b.nu);
  });
  return out;
}

std::vector<OrbitClass> enumerate_all(const Polyhedron& P,
                                      const Tessellation& tess,
                                      double period) {
  std::vector<OrbitClass> out;
  for (int M : admissible_M(P.group)) {
    auto part = enumerate_classes(P, tess, M, period);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace polyorb

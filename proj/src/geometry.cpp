#include "polyorb/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace polyorb {

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// x -> y -> z -> x
Eigen::Matrix3d cyclic_shift() {
  Eigen::Matrix3d c;
  c << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  return c;
}

std::array<long long, 9> matrix_key(const Eigen::Matrix3d& m, double tol) {
  std::array<long long, 9> k{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      k[3 * r + c] = llround(m(r, c) / tol);
  return k;
}

}  // namespace

Group parse_group(const std::string& name) {
  if (name == "T") return Group::T;
  if (name == "O") return Group::O;
  if (name == "I") return Group::I;
  throw std::invalid_argument("unknown group: " + name);
}

std::string group_name(Group g) {
  switch (g) {
    case Group::T: return "T";
    case Group::O: return "O";
    case Group::I: return "I";
  }
  throw std::logic_error("bad group enum");
}

int group_order(Group g) {
  switch (g) {
    case Group::T: return 12;
    case Group::O: return 24;
    case Group::I: return 60;
  }
  throw std::logic_error("bad group enum");
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
  Eigen::Vector3d a = axis.normalized();
  Eigen::Matrix3d k;
  k << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * (k * k);
}

std::vector<Eigen::Matrix3d> group_generators(Group g) {
  switch (g) {
    case Group::T: {
      Eigen::Matrix3d half = Eigen::Vector3d(1, -1, -1).asDiagonal();
      return {half, cyclic_shift()};
    }
    case Group::O: {
      Eigen::Matrix3d r4;
      r4 << 0, -1, 0, 1, 0, 0, 0, 0, 1;
      return {r4, cyclic_shift()};
    }
    case Group::I: {
      Eigen::Matrix3d r5 =
          rodrigues(Eigen::Vector3d(0, 1, kPhi), 2.0 * M_PI / 5.0);
      return {r5, cyclic_shift()};
    }
  }
  throw std::logic_error("bad group enum");
}

RotationGroup generate_group(Group g) {
  const double tol = 1e-9;
  auto gens = group_generators(g);
  RotationGroup out;
  out.name = g;
  out.elements.push_back(Eigen::Matrix3d::Identity());
  out.words.push_back({});
  std::set<std::array<long long, 9>> seen;
  seen.insert(matrix_key(out.elements[0], tol));
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int idx : frontier) {
      for (int gi = 0; gi < static_cast<int>(gens.size()); ++gi) {
        Eigen::Matrix3d b = gens[gi] * out.elements[idx];
        auto key = matrix_key(b, tol);
        if (seen.insert(key).second) {
          std::vector<int> w{gi};
          w.insert(w.end(), out.words[idx].begin(), out.words[idx].end());
          out.elements.push_back(b);
          out.words.push_back(std::move(w));
          next.push_back(static_cast<int>(out.elements.size()) - 1);
        }
      }
    }
    frontier = std::move(next);
    if (out.elements.size() > 200) throw std::runtime_error("closure runaway");
  }
  if (out.order() != group_order(g))
    throw std::runtime_error("group closure has wrong order");
  return out;
}

std::vector<Pole> compute_poles(const RotationGroup& group) {
  struct AxisRec {
    Eigen::Vector3d a;
  };
  std::map<std::array<long long, 3>, Eigen::Vector3d> axes;
  for (const auto& r : group.elements) {
    if ((r - Eigen::Matrix3d::Identity()).norm() < 1e-12) continue;
    // rotation axis: from the skew part, or for pi rotations from (R+I)
    Eigen::Vector3d a(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    if (a.norm() < 1e-9) {
      Eigen::Matrix3d p = r + Eigen::Matrix3d::Identity();
      int best = 0;
      for (int c = 1; c < 3; ++c)
        if (p.col(c).norm() > p.col(best).norm()) best = c;
      a = p.col(best);
    }
    a.normalize();
    for (int c = 0; c < 3; ++c) {
      if (std::abs(a[c]) > 1e-9) {
        if (a[c] < 0) a = -a;
        break;
      }
    }
    std::array<long long, 3> key{llround(a.x() / 1e-7), llround(a.y() / 1e-7),
                                 llround(a.z() / 1e-7)};
    axes.emplace(key, a);
  }
  std::vector<Pole> out;
  for (const auto& [key, a] : axes) {
    int cnt = 0;
    for (const auto& r : group.elements)
      if ((r * a - a).norm() < 1e-9) ++cnt;
    out.push_back({a, cnt});
    out.push_back({-a, cnt});
  }
  return out;
}

namespace {

using Coord = std::array<double, 3>;

std::vector<Eigen::Vector3d> canonical_vertices(Group g) {
  std::set<Coord> base;
  auto put_rounded = [&base](double x, double y, double z) {
    auto r12 = [](double v) { return std::round(v * 1e12) / 1e12; };
    base.insert({r12(x), r12(y), r12(z)});
  };
  switch (g) {
    case Group::T: {
      // cuboctahedron
      double s = 1.0 / std::sqrt(2.0);
      const int axpair[3][2] = {{0, 1}, {0, 2}, {1, 2}};
      for (auto [i, j] : axpair) {
        for (int sx : {1, -1}) {
          for (int sy : {1, -1}) {
            Coord v{0, 0, 0};
            v[i] = sx * s;
            v[j] = sy * s;
            base.insert(v);
          }
        }
      }
      break;
    }
    case Group::O: {
      // rhombicuboctahedron: permutations of (+-1, +-1, +-(1+sqrt 2)) / radius
      double c = 1.0 + std::sqrt(2.0);
      double radius = std::sqrt(5.0 + 2.0 * std::sqrt(2.0));
      const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                               {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (const auto& pr : perms) {
        for (int sx : {1, -1}) {
          for (int sy : {1, -1}) {
            for (int sz : {1, -1}) {
              double p[3] = {sx * 1.0, sy * 1.0, sz * c};
              put_rounded(p[pr[0]] / radius, p[pr[1]] / radius,
                          p[pr[2]] / radius);
            }
          }
        }
      }
      break;
    }
    case Group::I: {
      // rhombicosidodecahedron, the chiral-coordinate embedding whose 5-fold
      // axes pass through (0, 1, phi): odd coordinate permutations only
      double radius = std::sqrt(2.0 + std::pow(kPhi, 6.0));
      double f1[3] = {1.0, 1.0, kPhi * kPhi * kPhi};
      double f2[3] = {kPhi * kPhi, kPhi, 2.0 * kPhi};
      double f3[3] = {2.0 + kPhi, 0.0, kPhi * kPhi};
      const int odd[3][3] = {{0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
      auto add_odd = [&](double a, double b, double c) {
        double p[3] = {a, b, c};
        for (const auto& pr : odd)
          put_rounded(p[pr[0]] / radius, p[pr[1]] / radius, p[pr[2]] / radius);
      };
      for (int sx : {1, -1})
        for (int sy : {1, -1})
          for (int sz : {1, -1}) {
            add_odd(sx * f1[0], sy * f1[1], sz * f1[2]);
            add_odd(sx * f2[0], sy * f2[1], sz * f2[2]);
            if (sy == 1) add_odd(sx * f3[0], 0.0, sz * f3[2]);
          }
      break;
    }
  }
  std::vector<Eigen::Vector3d> out;
  for (const auto& v : base) out.emplace_back(v[0], v[1], v[2]);
  // std::set<Coord> iterates in lexicographic order already
  return out;
}

struct EdgeData {
  double dmin;
  std::vector<std::vector<int>> neighbors;
  std::vector<std::pair<int, int>> edges;
};

EdgeData edges_of(const std::vector<Eigen::Vector3d>& v) {
  int n = static_cast<int>(v.size());
  double dmin = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = (v[i] - v[j]).norm();
      if (d > 1e-9 && d < dmin) dmin = d;
    }
  EdgeData out;
  out.dmin = dmin;
  out.neighbors.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs((v[i] - v[j]).norm() - dmin) < 1e-8) {
        out.neighbors[i].push_back(j);
        out.neighbors[j].push_back(i);
        out.edges.emplace_back(i, j);
      }
  return out;
}

/* Face walk: neighbors ordered by angle around each vertex seen from outside;
   the face continues along the predecessor of the incoming edge. */
std::vector<std::vector<int>> faces_of(const std::vector<Eigen::Vector3d>& v,
                                       const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(v.size());
  std::vector<std::vector<int>> ring(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d vi = v[i].normalized();
    Eigen::Vector3d t(1, 0, 0);
    if (std::abs(vi.x()) > 0.9) t = Eigen::Vector3d(0, 1, 0);
    Eigen::Vector3d e1 = vi.cross(t).normalized();
    Eigen::Vector3d e2 = vi.cross(e1);
    std::vector<std::pair<double, int>> angs;
    for (int j : adj[i]) {
      Eigen::Vector3d d = v[j] - v[i];
      angs.emplace_back(std::atan2(d.dot(e2), d.dot(e1)), j);
    }
    std::sort(angs.begin(), angs.end());
    for (auto& [ang, j] : angs) ring[i].push_back(j);
  }
  std::map<std::pair<int, int>, int> nxt;
  for (int i = 0; i < n; ++i) {
    int k = static_cast<int>(ring[i].size());
    for (int idx = 0; idx < k; ++idx)
      nxt[{ring[i][idx], i}] = ring[i][(idx - 1 + k) % k];
  }
  std::vector<std::vector<int>> faces;
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < n; ++i)
    for (int j : adj[i]) {
      if (seen.count({i, j})) continue;
      std::vector<int> face{i, j};
      seen.insert({i, j});
      int a = i, b = j;
      while (true) {
        int c = nxt.at({a, b});
        if (seen.count({b, c}) || (b == i && c == j)) break;
        face.push_back(c);
        seen.insert({b, c});
        a = b;
        b = c;
      }
      if (face.back() == i) face.pop_back();
      if (face.size() >= 3) faces.push_back(std::move(face));
    }
  return faces;
}

}  // namespace

std::vector<std::vector<int>> vertex_permutations(
    const RotationGroup& group, const std::vector<Eigen::Vector3d>& vertices) {
  int n = static_cast<int>(vertices.size());
  std::vector<std::vector<int>> perms;
  perms.reserve(group.elements.size());
  for (const auto& r : group.elements) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d w = r * vertices[i];
      int best = -1;
      double bd = 1e300;
      for (int j = 0; j < n; ++j) {
        double d = (vertices[j] - w).norm();
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      if (bd > 1e-9)
        throw NoMatchingVertex("vertex image off lattice by " +
                               std::to_string(bd));
      p[i] = best;
    }
    perms.push_back(std::move(p));
  }
  return perms;
}

int Polyhedron::edge_type(int i, int j) const {
  int t = adjacency(i, j);
  if (t == 0) throw std::invalid_argument("vertices not adjacent");
  return t;
}

Polyhedron build_polyhedron(Group g) {
  Polyhedron p;
  p.group = g;
  p.rot = generate_group(g);
  p.poles = compute_poles(p.rot);
  p.vertices = canonical_vertices(g);
  const int n = p.n_vertices();
  if (n != group_order(g))
    throw std::runtime_error("vertex count disagrees with group order");

  EdgeData ed = edges_of(p.vertices);
  p.edge_length = ed.dmin;
  p.neighbors = ed.neighbors;
  for (const auto& nb : p.neighbors)
    if (nb.size() != 4)
      throw std::runtime_error("polyhedron is not 4-regular");

  auto raw_faces = faces_of(p.vertices, p.neighbors);
  for (auto& f : raw_faces) {
    Face face;
    face.cycle = f;
    face.size = static_cast<int>(f.size());
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int i : f) c += p.vertices[i];
    c /= static_cast<double>(f.size());
    c.normalize();
    face.pole = c;
    face.pole_order = -1;
    for (const auto& pl : p.poles)
      if ((pl.dir - c).norm() < 1e-6) {
        face.pole_order = pl.order;
        break;
      }
    if (face.pole_order < 0)
      throw std::runtime_error("face centroid is not on a rotation axis");
    p.faces.push_back(std::move(face));
  }

  // edge -> flanking face sizes; type 1 is the (3,4) kind in every group
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (const auto& f : p.faces) {
    int s = f.size;
    for (int k = 0; k < s; ++k) {
      int a = f.cycle[k], b = f.cycle[(k + 1) % s];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(s);
    }
  }
  p.adjacency = Eigen::MatrixXi::Zero(n, n);
  for (auto& [e, sizes] : edge_faces) {
    if (sizes.size() != 2) throw std::runtime_error("edge without two faces");
    std::sort(sizes.begin(), sizes.end());
    int type = (sizes[0] == 3 && sizes[1] == 4) ? 1 : 2;
    p.adjacency(e.first, e.second) = type;
    p.adjacency(e.second, e.first) = type;
  }

  p.perm = vertex_permutations(p.rot, p.vertices);
  for (int gi = 0; gi < p.rot.order(); ++gi)
    for (int i = 0; i < n; ++i)
      p.pair_to_element[{i, p.perm[gi][i]}] = gi;

  // full polyhedral symmetry: supergroup rotations and their compositions
  // with the central inversion, restricted to those preserving the vertex set
  RotationGroup super = generate_group(g == Group::I ? Group::I : Group::O);
  std::set<std::vector<int>> sym;
  for (const auto& r : super.elements) {
    for (double s : {1.0, -1.0}) {
      Eigen::Matrix3d m = s * r;
      std::vector<int> pp(n);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        Eigen::Vector3d w = m * p.vertices[i];
        int best = -1;
        double bd = 1e300;
        for (int j = 0; j < n; ++j) {
          double d = (p.vertices[j] - w).norm();
          if (d < bd) {
            bd = d;
            best = j;
          }
        }
        if (bd > 1e-7) ok = false;
        pp[i] = best;
      }
      if (ok) sym.insert(std::move(pp));
    }
  }
  p.symmetry_perms.assign(sym.begin(), sym.end());
  return p;
}

namespace {

/* Gauss-Legendre nodes/weights on [-1,1] by Newton iteration. */
void leggauss(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

double zeta_integral(const RotationGroup& group, const Eigen::Vector3d& a,
                     const Eigen::Vector3d& b, int npts) {
  std::vector<double> x, w;
  leggauss(npts, x, w);
  std::vector<Eigen::Matrix3d> mats;
  for (const auto& r : group.elements)
    if ((r - Eigen::Matrix3d::Identity()).norm() > 1e-12)
      mats.push_back(r - Eigen::Matrix3d::Identity());
  double tot = 0.0;
  for (int i = 0; i < npts; ++i) {
    double xk = 0.5 * (x[i] + 1.0);
    double wk = 0.5 * w[i];
    Eigen::Vector3d v = (1.0 - xk) * a + xk * b;
    double s = 0.0;
    for (const auto& m : mats) s += 1.0 / (m * v).norm();
    tot += wk * s;
  }
  return tot;
}

}  // namespace polyorb

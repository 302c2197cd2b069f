#include "polyorb/tessellation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <set>

namespace polyorb {

namespace {

std::array<long long, 9> key6(const Eigen::Matrix3d& m) {
  std::array<long long, 9> k{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) k[3 * r + c] = llround(m(r, c) * 1e6);
  return k;
}

std::array<long long, 3> keyv6(const Eigen::Vector3d& v) {
  return {llround(v.x() * 1e6), llround(v.y() * 1e6), llround(v.z() * 1e6)};
}

}  // namespace

std::vector<Eigen::Vector3d> mirror_normals(Group g) {
  // Mirror planes are normal to pi-rotation axes n with -R_pi(n) in the full
  // symmetry group. For T those come from the octahedral overgroup only.
  std::vector<Eigen::Matrix3d> pis;
  if (g == Group::T) {
    auto super = generate_group(Group::O).elements;
    std::set<std::array<long long, 9>> tkeys;
    for (const auto& r : generate_group(Group::T).elements)
      tkeys.insert(key6(r));
    for (const auto& r : super)
      if (std::abs(r.trace() + 1.0) < 1e-9 && !tkeys.count(key6(r)))
        pis.push_back(r);
  } else {
    for (const auto& r : generate_group(g).elements)
      if (std::abs(r.trace() + 1.0) < 1e-9) pis.push_back(r);
  }
  std::vector<Eigen::Vector3d> out;
  std::set<std::array<long long, 3>> seen;
  for (const auto& r : pis) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (r + r.transpose()));
    Eigen::Vector3d n = es.eigenvectors().col(2);  // top eigenvalue = +1 axis
    if (seen.count(keyv6(n)) || seen.count(keyv6(-n))) continue;
    seen.insert(keyv6(n));
    out.push_back(n);
  }
  size_t expect = g == Group::T ? 6 : (g == Group::O ? 9 : 15);
  if (out.size() != expect)
    throw std::runtime_error("unexpected mirror-plane count");
  return out;
}

Tessellation::Tessellation(const RotationGroup& rot)
    : nrm_(mirror_normals(rot.name)), poles_(compute_poles(rot)) {}

SignVector Tessellation::sign_vec(const Eigen::Vector3d& x, double tol) const {
  SignVector sv(nrm_.size());
  for (size_t j = 0; j < nrm_.size(); ++j) {
    double v = nrm_[j].dot(x);
    sv[j] = std::abs(v) < tol ? 0 : (v > 0 ? 1 : -1);
  }
  return sv;
}

std::vector<SignVector> Tessellation::string_of_loop(
    const std::vector<Eigen::Vector3d>& pts) const {
  const int l = static_cast<int>(pts.size());
  std::vector<SignVector> cells;
  for (int i = 0; i < l; ++i) {
    const Eigen::Vector3d& a = pts[i];
    const Eigen::Vector3d& b = pts[(i + 1) % l];
    std::set<double> ts{0.0, 1.0};
    for (const auto& n : nrm_) {
      double va = n.dot(a), vb = n.dot(b);
      if (std::abs(va - vb) < 1e-12) continue;
      double t = va / (va - vb);
      if (t > 1e-9 && t < 1.0 - 1e-9) ts.insert(t);
    }
    std::vector<double> tv(ts.begin(), ts.end());
    for (size_t k = 0; k + 1 < tv.size(); ++k) {
      double m = 0.5 * (tv[k] + tv[k + 1]);
      SignVector sv = sign_vec(a + m * (b - a));
      if (std::count(sv.begin(), sv.end(), 0))
        throw MidpointOnPlane("segment midpoint lies on a mirror plane");
      cells.push_back(std::move(sv));
    }
  }
  std::vector<SignVector> out;
  for (auto& sv : cells)
    if (out.empty() || out.back() != sv) out.push_back(std::move(sv));
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

bool Tessellation::pole_in_closure(const Eigen::Vector3d& p,
                                   const SignVector& sv, double tol) const {
  for (size_t j = 0; j < nrm_.size(); ++j)
    if (sv[j] * nrm_[j].dot(p) < -tol) return false;
  return true;
}

std::vector<std::vector<bool>> Tessellation::contains_table(
    const std::vector<SignVector>& string) const {
  std::vector<std::vector<bool>> tab(poles_.size());
  for (size_t ip = 0; ip < poles_.size(); ++ip) {
    tab[ip].reserve(string.size());
    for (const auto& sv : string)
      tab[ip].push_back(pole_in_closure(poles_[ip].dir, sv));
  }
  return tab;
}

bool Tessellation::winds_one_axis(
    const std::vector<std::vector<bool>>& tab) const {
  for (const auto& row : tab)
    if (std::all_of(row.begin(), row.end(), [](bool b) { return b; }))
      return true;
  return false;
}

std::vector<std::pair<int, int>> Tessellation::nonsimple_poles(
    const std::vector<std::vector<bool>>& tab) const {
  const int L = tab.empty() ? 0 : static_cast<int>(tab[0].size());
  std::vector<std::pair<int, int>> hits;
  for (size_t ip = 0; ip < tab.size(); ++ip) {
    const auto& row = tab[ip];
    const int w = 2 * poles_[ip].order + 1;
    if (std::all_of(row.begin(), row.end(), [](bool b) { return b; })) {
      hits.emplace_back(static_cast<int>(ip), 0);
      continue;
    }
    if (w > L) continue;
    int run = 0;
    for (int k = 0; k < 2 * L; ++k) {
      if (row[k % L]) {
        if (++run >= w && k - w + 1 < L) {
          hits.emplace_back(static_cast<int>(ip), (k - w + 1) % L);
          break;
        }
      } else {
        run = 0;
      }
    }
  }
  return hits;
}

bool Tessellation::is_simple(const std::vector<std::vector<bool>>& tab) const {
  return nonsimple_poles(tab).empty();
}

bool Tessellation::winds_two_coboundary(
    const std::vector<std::vector<bool>>& tab) const {
  const int L = tab.empty() ? 0 : static_cast<int>(tab[0].size());
  // full-turn windows (width exactly 2*order) per pole
  std::vector<std::vector<int>> wins(tab.size());
  std::vector<int> widths(tab.size());
  std::vector<int> pids;
  for (size_t ip = 0; ip < tab.size(); ++ip) {
    const int w = 2 * poles_[ip].order;
    widths[ip] = w;
    if (w > L) continue;
    for (int s = 0; s < L; ++s) {
      bool ok = true;
      for (int j = 0; j < w && ok; ++j) ok = tab[ip][(s + j) % L];
      if (ok) wins[ip].push_back(s);
    }
    if (!wins[ip].empty()) pids.push_back(static_cast<int>(ip));
  }
  std::vector<char> cov(L);
  for (size_t i1 = 0; i1 < pids.size(); ++i1)
    for (size_t i2 = i1 + 1; i2 < pids.size(); ++i2) {
      int ip1 = pids[i1], ip2 = pids[i2];
      bool share = false;
      for (int k = 0; k < L && !share; ++k)
        share = tab[ip1][k] && tab[ip2][k];
      if (!share) continue;
      for (int s1 : wins[ip1])
        for (int s2 : wins[ip2]) {
          std::fill(cov.begin(), cov.end(), 0);
          for (int j = 0; j < widths[ip1]; ++j) cov[(s1 + j) % L] = 1;
          for (int j = 0; j < widths[ip2]; ++j) cov[(s2 + j) % L] = 1;
          if (std::count(cov.begin(), cov.end(), 1) == L) return true;
        }
    }
  return false;
}

}  // namespace polyorb

#pragma once

// Small builders shared by the test binaries.

#include <functional>

#include "qdual/hilbmod.hpp"
#include "qdual/wutf.hpp"

namespace qdual::testing {

inline CVec unit_vec(int n, int i) {
  CVec v = CVec::Zero(n);
  v(i) = 1.0;
  return v;
}

/// Sub-correspondence of M_n spanned by matrix units E_ij with grade(i, j) == g,
/// over the diagonal algebra C^n, with <x, y> = diagonal part of x^* y.
struct MatrixGrading {
  int n;
  GroupPresentation group;
  std::function<int(int, int)> grade;
};

inline GradedBundleData matrix_graded_bundle(const MatrixGrading& mg) {
  const int n = mg.n, ng = mg.group.size();
  FdCStarAlgebra a(std::vector<int>(n, 1));
  GradedBundleData g;
  g.group = mg.group;
  g.base = a;
  std::vector<std::vector<std::pair<int, int>>> units(ng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) units[mg.grade(i, j)].push_back({i, j});
  auto index_in = [&](int gr, int i, int j) {
    for (std::size_t k = 0; k < units[gr].size(); ++k)
      if (units[gr][k] == std::make_pair(i, j)) return static_cast<int>(k);
    return -1;
  };
  for (int gr = 0; gr < ng; ++gr) {
    Correspondence m;
    m.algebra = a;
    m.dim = static_cast<int>(units[gr].size());
    m.right.assign(n, CMat::Zero(m.dim, m.dim));
    m.left.assign(n, CMat::Zero(m.dim, m.dim));
    m.inner.assign(m.dim, std::vector<CVec>(m.dim, a.zero()));
    for (int k = 0; k < m.dim; ++k) {
      auto [i, j] = units[gr][k];
      m.right[j](k, k) = 1.0;  // E_ij E_jj
      m.left[i](k, k) = 1.0;   // E_ii E_ij
      for (int l = 0; l < m.dim; ++l) {
        auto [i2, j2] = units[gr][l];
        if (i == i2) m.inner[k][l](j) = j == j2 ? 1.0 : 0.0;  // E_ji E_ij2
      }
    }
    g.fibers.push_back(m);
  }
  // E_ij E_kl = delta_jk E_il
  for (int x = 0; x < ng; ++x)
    for (int y = 0; y < ng; ++y) {
      const int z = mg.group.mul[x][y];
      const int dx = static_cast<int>(units[x].size()), dy = static_cast<int>(units[y].size());
      const int dz = static_cast<int>(units[z].size());
      CMat phi = CMat::Zero(dz, dx * dy);
      for (int p = 0; p < dx; ++p)
        for (int q = 0; q < dy; ++q) {
          auto [i, j] = units[x][p];
          auto [k, l] = units[y][q];
          if (j != k) continue;
          int r = index_in(z, i, l);
          if (r < 0) throw std::logic_error("grading is not multiplicative");
          phi(r, p * dy + q) = 1.0;
        }
      g.mult[{x, y}] = phi;
    }
  return g;
}

/// Clock/shift grading of M_3 by i - j mod 3.
inline GradedBundleData clock_shift_bundle() {
  return matrix_graded_bundle({3, cyclic_group(3), [](int i, int j) { return ((i - j) % 3 + 3) % 3; }});
}

/// All fibers C with multiplication 1: the group algebra C[G].
inline GradedBundleData trivial_bundle(const GroupPresentation& grp) {
  FdCStarAlgebra a({1});
  GradedBundleData g;
  g.group = grp;
  g.base = a;
  for (int i = 0; i < grp.size(); ++i) g.fibers.push_back(Correspondence::identity(a));
  for (int x = 0; x < grp.size(); ++x)
    for (int y = 0; y < grp.size(); ++y) g.mult[{x, y}] = CMat::Ones(1, 1);
  return g;
}

}  // namespace qdual::testing

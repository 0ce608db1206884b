#include "qdual/module.hpp"

#include <algorithm>
#include <cmath>

namespace qdual {

namespace {

// pi_U(S omega) for every basis element omega.
std::vector<CMat> antipode_rep(const Backend& be, int alpha) {
  const HopfAlgebra& h = be.hopf();
  const auto& pi = be.rep(alpha).pi;
  const int d = be.irrep(alpha).dim;
  std::vector<CMat> out;
  for (int w = 0; w < h.dim; ++w) {
    CMat m = CMat::Zero(d, d);
    for (int c = 0; c < h.dim; ++c)
      if (h.antipode(c, w) != cplx(0.0)) m += h.antipode(c, w) * pi[c];
    out.push_back(m);
  }
  return out;
}

CMat vec_col(const CMat& t) { return linalg::vec(t); }

}  // namespace

CVec EquivariantModule::inner_product(const CVec& x, const CVec& y) const {
  CVec out = algebra().zero();
  for (int p = 0; p < dim; ++p) {
    if (x(p) == cplx(0.0)) continue;
    for (int q = 0; q < dim; ++q)
      if (y(q) != cplx(0.0)) out += std::conj(x(p)) * y(q) * inner[p][q];
  }
  return out;
}

CVec EquivariantModule::act_right(const CVec& x, const CVec& b) const {
  CVec out = CVec::Zero(dim);
  for (Eigen::Index k = 0; k < b.size(); ++k)
    if (b(k) != cplx(0.0)) out += b(k) * (right[static_cast<std::size_t>(k)] * x);
  return out;
}

CMat EquivariantModule::trace_gram() const {
  CMat g(dim, dim);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) g(p, q) = algebra().trace(inner[p][q]);
  return g;
}

CMat EquivariantModule::adjoint(const CMat& t) const {
  CMat g = trace_gram();
  return g.ldlt().solve(CMat(t.adjoint() * g));
}

EquivariantModule EquivariantModule::regular(const ActionData& act) {
  EquivariantModule m;
  m.base = act;
  const FdCStarAlgebra& b = act.algebra;
  m.dim = b.dim();
  for (int k = 0; k < b.dim(); ++k) m.right.push_back(b.right_mult(b.basis(k)));
  m.inner.assign(m.dim, std::vector<CVec>(m.dim));
  for (int p = 0; p < m.dim; ++p)
    for (int q = 0; q < m.dim; ++q) m.inner[p][q] = b.multiply(b.adjoint(b.basis(p)), b.basis(q));
  m.module_maps = act.module_maps;
  return m;
}

EquivariantModule EquivariantModule::tensor_irrep(const EquivariantModule& m, int alpha) {
  const Backend& be = m.backend();
  const HopfAlgebra& h = be.hopf();
  const int d = be.irrep(alpha).dim;
  EquivariantModule out;
  out.base = m.base;
  out.dim = m.dim * d;
  for (const auto& r : m.right) out.right.push_back(linalg::kron(r, CMat::Identity(d, d)));
  out.inner.assign(out.dim, std::vector<CVec>(out.dim, m.algebra().zero()));
  for (int p = 0; p < m.dim; ++p)
    for (int q = 0; q < m.dim; ++q)
      for (int i = 0; i < d; ++i) out.inner[p * d + i][q * d + i] = m.inner[p][q];
  std::vector<CMat> s = antipode_rep(be, alpha);
  for (int w = 0; w < h.dim; ++w) {
    CMat mm = CMat::Zero(out.dim, out.dim);
    for (int a = 0; a < h.dim; ++a)
      for (int b = 0; b < h.dim; ++b) {
        cplx c = h.coproduct(a * h.dim + b, w);
        if (c != cplx(0.0)) mm += c * linalg::kron(m.module_maps[a], s[b]);
      }
    out.module_maps.push_back(mm);
  }
  return out;
}

EquivariantModule EquivariantModule::direct_sum(const EquivariantModule& m, const EquivariantModule& n) {
  if (m.algebra() != n.algebra() || m.module_maps.size() != n.module_maps.size())
    throw DimensionError("direct_sum: modules over different actions");
  auto diag = [](const CMat& a, const CMat& b) {
    CMat out = CMat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
  };
  EquivariantModule out;
  out.base = m.base;
  out.dim = m.dim + n.dim;
  for (std::size_t k = 0; k < m.right.size(); ++k) out.right.push_back(diag(m.right[k], n.right[k]));
  for (std::size_t k = 0; k < m.module_maps.size(); ++k)
    out.module_maps.push_back(diag(m.module_maps[k], n.module_maps[k]));
  out.inner.assign(out.dim, std::vector<CVec>(out.dim, m.algebra().zero()));
  for (int p = 0; p < m.dim; ++p)
    for (int q = 0; q < m.dim; ++q) out.inner[p][q] = m.inner[p][q];
  for (int p = 0; p < n.dim; ++p)
    for (int q = 0; q < n.dim; ++q) out.inner[m.dim + p][m.dim + q] = n.inner[p][q];
  return out;
}

EquivariantModule EquivariantModule::submodule(const EquivariantModule& m, const CMat& basis) {
  if (basis.rows() != m.dim) throw DimensionError("submodule: basis has the wrong ambient dimension");
  CMat coords = linalg::pinv(basis);
  CMat proj = basis * coords;
  auto restrict = [&](const CMat& op) {
    CMat img = op * basis;
    if (linalg::max_abs(CMat(img - proj * img)) > 1e-8) throw ContractViolation("submodule: span is not invariant");
    return CMat(coords * img);
  };
  EquivariantModule out;
  out.base = m.base;
  out.dim = static_cast<int>(basis.cols());
  for (const auto& r : m.right) out.right.push_back(restrict(r));
  for (const auto& w : m.module_maps) out.module_maps.push_back(restrict(w));
  out.inner.assign(out.dim, std::vector<CVec>(out.dim));
  for (int p = 0; p < out.dim; ++p)
    for (int q = 0; q < out.dim; ++q) out.inner[p][q] = m.inner_product(basis.col(p), basis.col(q));
  return out;
}

Report validate_module(const EquivariantModule& m, const Tolerance& tol) {
  Report rep;
  const FdCStarAlgebra& b = m.algebra();
  const HopfAlgebra& h = m.backend().hopf();
  bool shapes = static_cast<int>(m.right.size()) == b.dim() && static_cast<int>(m.module_maps.size()) == h.dim &&
                static_cast<int>(m.inner.size()) == m.dim;
  for (const auto& r : m.right) shapes = shapes && r.rows() == m.dim && r.cols() == m.dim;
  for (const auto& r : m.module_maps) shapes = shapes && r.rows() == m.dim && r.cols() == m.dim;
  for (const auto& row : m.inner) {
    shapes = shapes && static_cast<int>(row.size()) == m.dim;
    for (const auto& v : row) shapes = shapes && v.size() == b.dim();
  }
  rep.add_flag("shapes", shapes);
  if (!shapes) return rep;
  rep.append(validate_action(m.base, tol), "base.");

  double ract = 0.0, unit = 0.0;
  CMat one = CMat::Zero(m.dim, m.dim);
  for (int k = 0; k < b.dim(); ++k) {
    one += b.unit()(k) * m.right[k];
    for (int l = 0; l < b.dim(); ++l) {
      CVec kl = b.multiply(b.basis(k), b.basis(l));
      CMat rkl = CMat::Zero(m.dim, m.dim);
      for (int c = 0; c < b.dim(); ++c)
        if (kl(c) != cplx(0.0)) rkl += kl(c) * m.right[c];
      ract = std::max(ract, linalg::max_abs(CMat(m.right[l] * m.right[k] - rkl)));
    }
  }
  unit = linalg::max_abs(CMat(one - CMat::Identity(m.dim, m.dim)));
  rep.add("right_action", ract, tol.tau);
  rep.add("unit_acts_trivially", unit, tol.tau);

  double lin = 0.0, herm = 0.0;
  for (int p = 0; p < m.dim; ++p)
    for (int q = 0; q < m.dim; ++q) {
      herm = std::max(herm, linalg::max_abs(CVec(m.inner[p][q] - b.adjoint(m.inner[q][p]))));
      for (int k = 0; k < b.dim(); ++k) {
        CVec lhs = m.inner_product(CVec(CVec::Unit(m.dim, p)), CVec(m.right[k].col(q)));
        lin = std::max(lin, linalg::max_abs(CVec(lhs - b.multiply(m.inner[p][q], b.basis(k)))));
      }
    }
  rep.add("inner_right_linear", lin, tol.tau);
  rep.add("inner_hermitian", herm, tol.tau);
  double mn = linalg::min_eigenvalue_hermitian(m.trace_gram());
  rep.add_flag("inner_positive_definite", m.dim == 0 || mn > tol.tau, "smallest eigenvalue " + std::to_string(mn));

  double action = 0.0;
  for (int x = 0; x < h.dim; ++x)
    for (int y = 0; y < h.dim; ++y) {
      CVec xy = h.multiply(h.basis(x), h.basis(y));
      CMat mm = CMat::Zero(m.dim, m.dim);
      for (int c = 0; c < h.dim; ++c)
        if (xy(c) != cplx(0.0)) mm += xy(c) * m.module_maps[c];
      action = std::max(action, linalg::max_abs(CMat(m.module_maps[y] * m.module_maps[x] - mm)));
    }
  rep.add("module_action", action, tol.tau);

  // (m b) |> omega = sum (m |> omega_(1)) (b |> omega_(2)),
  // <m, n> |> omega = sum <m |> S(omega_(1))^*, n |> omega_(2)>.
  double compat = 0.0, inner = 0.0;
  for (int w = 0; w < h.dim; ++w)
    for (int p = 0; p < m.dim; ++p) {
      for (int k = 0; k < b.dim(); ++k) {
        CVec lhs = m.module_maps[w] * m.right[k].col(p);
        CVec rhs = CVec::Zero(m.dim);
        for (int a = 0; a < h.dim; ++a)
          for (int c = 0; c < h.dim; ++c) {
            cplx co = h.coproduct(a * h.dim + c, w);
            if (co != cplx(0.0)) rhs += co * m.act_right(m.module_maps[a].col(p), m.base.module_maps[c] * b.basis(k));
          }
        compat = std::max(compat, linalg::max_abs(CVec(lhs - rhs)));
      }
      for (int q = 0; q < m.dim; ++q) {
        CVec lhs = m.base.module_maps[w] * m.inner[p][q];
        CVec rhs = b.zero();
        for (int a = 0; a < h.dim; ++a)
          for (int c = 0; c < h.dim; ++c) {
            cplx co = h.coproduct(a * h.dim + c, w);
            if (co == cplx(0.0)) continue;
            CVec sa = h.adjoint(h.antipode.col(a));
            CMat act = CMat::Zero(m.dim, m.dim);
            for (int e = 0; e < h.dim; ++e)
              if (sa(e) != cplx(0.0)) act += sa(e) * m.module_maps[e];
            rhs += co * m.inner_product(act.col(p), m.module_maps[c].col(q));
          }
        inner = std::max(inner, linalg::max_abs(CVec(lhs - rhs)));
      }
    }
  rep.add("action_compatible_with_right_module", compat, tol.tau);
  rep.add("action_compatible_with_inner_product", inner, tol.tau);
  return rep;
}

ModuleFunctor module_functor(const EquivariantModule& mod, const Tolerance& tol, std::uint64_t seed,
                             const std::optional<EndomorphismBase>& base) {
  Report val = validate_module(mod, tol);
  if (!val.ok()) {
    std::string what = "module_functor: invalid equivariant module:";
    for (const auto& c : val.checks)
      if (!c.passed) what += " " + c.name;
    throw ContractViolation(what);
  }
  const Backend& be = mod.backend();
  const HopfAlgebra& h = be.hopf();
  const int m = mod.dim, n = be.num_irreps(), nb = mod.algebra().dim();
  const Eigen::Index mm = static_cast<Eigen::Index>(m) * m;
  const CMat id = CMat::Identity(m, m);
  CMat g = mod.trace_gram();
  CMat gh = linalg::sqrt_psd(g), gi = linalg::inv_sqrt_pd(g), ginv = g.inverse();
  auto dagger = [&](const CMat& t) { return CMat(ginv * t.adjoint() * g); };

  // Solutions of right B-linearity and the intertwining identity, per irrep.
  auto solve = [&](int alpha) {
    const int d = be.irrep(alpha).dim;
    const auto& pi = be.rep(alpha).pi;
    const Eigen::Index nu = d * mm;
    CMat sys = CMat::Zero((static_cast<Eigen::Index>(nb) + h.dim) * nu, nu);
    Eigen::Index row = 0;
    for (int k = 0; k < nb; ++k) {
      CMat c = linalg::kron(CMat(mod.right[k].transpose()), id) - linalg::kron(id, mod.right[k]);
      for (int i = 0; i < d; ++i) sys.block(row + i * mm, i * mm, mm, mm) = c;
      row += nu;
    }
    for (int w = 0; w < h.dim; ++w) {
      CMat left = linalg::kron(id, mod.module_maps[w]);
      for (int i = 0; i < d; ++i) sys.block(row + i * mm, i * mm, mm, mm) += left;
      for (int a = 0; a < h.dim; ++a)
        for (int b = 0; b < h.dim; ++b) {
          cplx co = h.coproduct(a * h.dim + b, w);
          if (co == cplx(0.0)) continue;
          CMat right = linalg::kron(CMat(mod.module_maps[b].transpose()), id);
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
              if (pi[a](i, j) != cplx(0.0)) sys.block(row + i * mm, j * mm, mm, mm) -= co * pi[a](i, j) * right;
        }
      row += nu;
    }
    return linalg::null_space(sys, tol.rank);
  };
  auto part = [&](const CMat& basis, int col, int i) { return linalg::unvec(basis.col(col).segment(i * mm, mm), m, m); };

  ModuleFunctor out;
  const int e = be.trivial();
  FdCStarAlgebra a;
  if (base) {
    a = base->first;
    out.end_units = base->second;
  } else {
    CMat ends = solve(e);
    std::vector<CMat> span;
    for (Eigen::Index k = 0; k < ends.cols(); ++k) span.push_back(gh * part(ends, static_cast<int>(k), 0) * gi);
    WedderburnDecomposition w = wedderburn(span, seed, tol.rank);
    a = w.algebra;
    for (const auto& u : w.units) out.end_units.push_back(gi * u * gh);
  }
  const int na = a.dim();
  std::vector<cplx> norms;
  for (const auto& u : out.end_units) norms.push_back((dagger(u) * u).trace());
  auto coords_a = [&](const CMat& x) {
    CVec c(na);
    for (int k = 0; k < na; ++k) c(k) = (dagger(out.end_units[k]) * x).trace() / norms[k];
    return c;
  };

  FunctorData& f = out.functor;
  f.backend = mod.base.backend;
  f.base = a;
  std::vector<CMat> coords;
  for (int al = 0; al < n; ++al) {
    CMat basis;
    if (al == e) {
      basis = CMat(mm, na);
      for (int k = 0; k < na; ++k) basis.col(k) = vec_col(out.end_units[k]);
    } else {
      basis = solve(al);
    }
    out.bases.push_back(basis);
    coords.push_back(linalg::pinv(basis));
  }
  for (int al = 0; al < n; ++al) {
    const int d = be.irrep(al).dim, dm = static_cast<int>(out.bases[al].cols());
    const CMat& basis = out.bases[al];
    Correspondence c;
    c.algebra = a;
    c.dim = dm;
    for (int k = 0; k < na; ++k) {
      CMat r(d * mm, dm), l(d * mm, dm);
      for (int p = 0; p < dm; ++p)
        for (int i = 0; i < d; ++i) {
          CMat x = part(basis, p, i);
          r.block(i * mm, p, mm, 1) = vec_col(CMat(x * out.end_units[k]));
          l.block(i * mm, p, mm, 1) = vec_col(CMat(out.end_units[k] * x));
        }
      c.right.push_back(coords[al] * r);
      c.left.push_back(coords[al] * l);
    }
    c.inner.assign(dm, std::vector<CVec>(dm));
    for (int p = 0; p < dm; ++p)
      for (int q = 0; q < dm; ++q) {
        CMat s = CMat::Zero(m, m);
        for (int i = 0; i < d; ++i) s += dagger(part(basis, p, i)) * part(basis, q, i);
        c.inner[p][q] = coords_a(s);
      }
    f.modules.push_back(std::move(c));
  }
  // F_2(X (x) Y) = (X (x) 1) Y, component (i, j) = X_i Y_j.
  for (int al = 0; al < n; ++al)
    for (int bt = 0; bt < n; ++bt) {
      const int da = be.irrep(al).dim, db = be.irrep(bt).dim;
      const int ma = f.modules[al].dim, mb = f.modules[bt].dim;
      if (ma == 0 || mb == 0) continue;
      CMat z(static_cast<Eigen::Index>(da) * db * mm, static_cast<Eigen::Index>(ma) * mb);
      for (int p = 0; p < ma; ++p)
        for (int q = 0; q < mb; ++q)
          for (int i = 0; i < da; ++i)
            for (int j = 0; j < db; ++j)
              z.block((static_cast<Eigen::Index>(i) * db + j) * mm, static_cast<Eigen::Index>(p) * mb + q, mm, 1) =
                  vec_col(CMat(part(out.bases[al], p, i) * part(out.bases[bt], q, j)));
      std::vector<int> seen(n, 0);
      for (const auto& pt : be.fusion(al, bt)) {
        const int c = pt.label, k = seen[c]++;
        auto& slot = f.phi[{al, bt, c}];
        if (static_cast<int>(slot.size()) <= k) slot.resize(static_cast<std::size_t>(k) + 1);
        slot[static_cast<std::size_t>(k)] = coords[c] * linalg::kron(CMat(pt.w.adjoint()), CMat::Identity(mm, mm)) * z;
      }
    }
  return out;
}

NaturalIsomorphism regular_module_comparison(const ActionData& act, const Tolerance& tol, std::uint64_t seed) {
  NaturalIsomorphism out;
  const Backend& be = *act.backend;
  const FdCStarAlgebra& b = act.algebra;
  const int n = be.num_irreps(), db = b.dim();
  SpectralFunctor sf = spectral_functor(act, tol, seed);
  EndomorphismBase base;
  base.first = sf.fixed.algebra;
  for (int k = 0; k < sf.fixed.algebra.dim(); ++k) base.second.push_back(b.left_mult(sf.fixed.embedding.col(k)));
  ModuleFunctor mf = module_functor(EquivariantModule::regular(act), tol, seed, base);
  out.report.append(validate_wutf(mf.functor, tol), "module_functor.");
  const Eigen::Index mm = static_cast<Eigen::Index>(db) * db;
  for (int al = 0; al < n; ++al) {
    const int d = be.irrep(al).dim;
    const int ms = sf.functor.module(al).dim, mm2 = mf.functor.module(al).dim;
    CMat coords = linalg::pinv(mf.bases[al]);
    CMat ref(mm2, ms);
    for (int k = 0; k < ms; ++k) {
      CVec t(d * mm);
      for (int i = 0; i < d; ++i)
        t.segment(i * mm, mm) = linalg::vec(b.left_mult(sf.bases[al].block(static_cast<Eigen::Index>(i) * db, k, db, 1)));
      ref.col(k) = coords * t;
    }
    out.components.push_back(closest_bimodule_map(sf.functor.module(al), mf.functor.module(al), ref, tol));
  }
  out.report.append(check_natural_isomorphism(sf.functor, mf.functor, out.components, tol), "natural_isomorphism.");
  return out;
}

FullnessResult fullness_check(const EquivariantModule& mod, const Tolerance& tol) {
  FullnessResult out;
  const Backend& be = mod.backend();
  const FdCStarAlgebra& b = mod.algebra();
  const HopfAlgebra& h = be.hopf();
  const int m = mod.dim;
  out.full_rank = b.size();
  auto rank_of = [&](const CVec& x) {
    Eigen::SelfAdjointEigenSolver<CMat> es(b.to_matrix(x), Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    int r = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > tol.rank * scale) ++r;
    return r;
  };
  auto gram_of = [&](const CVec& x, int d) {
    CVec s = b.zero();
    for (int i = 0; i < d; ++i) s += mod.inner_product(x.segment(i * m, m), x.segment(i * m, m));
    return s;
  };
  CVec sum = b.zero();
  double spectral_res = 0.0;
  for (int al = 0; al < be.num_irreps() && out.rank < out.full_rank; ++al) {
    const int d = be.irrep(al).dim;
    CMat basis = spectral_subspace(be, mod.module_maps, al, tol);
    for (Eigen::Index k = 0; k < basis.cols() && out.rank < out.full_rank; ++k) {
      CVec x = basis.col(k);
      CVec cand = sum + gram_of(x, d);
      int r = rank_of(cand);
      if (r <= out.rank) continue;
      sum = cand;
      out.rank = r;
      out.vectors.push_back({al, x});
      for (int w = 0; w < h.dim; ++w)
        for (int i = 0; i < d; ++i) {
          CVec res = mod.module_maps[w] * x.segment(i * m, m);
          for (int j = 0; j < d; ++j) res -= be.rep(al).pi[w](i, j) * x.segment(j * m, m);
          spectral_res = std::max(spectral_res, linalg::max_abs(res));
        }
    }
  }
  out.full = out.rank == out.full_rank;
  out.report.add_flag("full", out.full,
                      "rank " + std::to_string(out.rank) + " of " + std::to_string(out.full_rank));
  out.report.add("spectral_vectors", spectral_res, tol.tau);
  if (!out.full) return out;

  // Y = sum_i X_i (x) conj(xi_i) with rho = 1, so <Y, Y> = sum_i <X_i, X_i>.
  out.gram = sum;
  CMat gm = b.to_matrix(sum);
  out.normalizer = b.from_matrix(linalg::inv_sqrt_pd(gm));
  double mn = b.min_eigenvalue(sum);
  out.report.add_flag("gram_invertible", mn > tol.tau, "smallest eigenvalue " + std::to_string(mn));
  double fixed = 0.0;
  for (int w = 0; w < h.dim; ++w)
    fixed = std::max(fixed, linalg::max_abs(CVec(mod.base.module_maps[w] * out.normalizer - h.counit(w) * out.normalizer)));
  out.report.add("normalizer_invariant", fixed, tol.tau);
  CVec iso = b.zero();
  for (const auto& [al, x] : out.vectors) {
    const int d = be.irrep(al).dim;
    for (int i = 0; i < d; ++i) {
      CVec yc = mod.act_right(x.segment(i * m, m), out.normalizer);
      iso += mod.inner_product(yc, yc);
    }
  }
  out.report.add("embedding_isometric", linalg::max_abs(CVec(iso - b.unit())), tol.tau);
  // Largest c with <Y, Y> - c sum <X_i, X_i> >= 0.
  CMat s = b.to_matrix(sum);
  CMat si = linalg::inv_sqrt_pd(s);
  out.domination = linalg::min_eigenvalue_hermitian(CMat(si * gm * si));
  out.report.add_flag("domination_constant_positive", out.domination > 0.0,
                      "c = " + std::to_string(out.domination));
  return out;
}

}  // namespace qdual

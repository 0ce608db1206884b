#include "qdual/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace qdual {

namespace {

CVec unit_vector(Eigen::Index n, Eigen::Index i) {
  CVec v = CVec::Zero(n);
  v(i) = 1.0;
  return v;
}

// Splits a stacked vector of d elements of B.
std::vector<CVec> unstack(const CVec& v, int d, int dim_b) {
  std::vector<CVec> out;
  for (int i = 0; i < d; ++i) out.push_back(v.segment(static_cast<Eigen::Index>(i) * dim_b, dim_b));
  return out;
}

CVec stack(const std::vector<CVec>& parts, int dim_b) {
  CVec v(static_cast<Eigen::Index>(parts.size()) * dim_b);
  for (std::size_t i = 0; i < parts.size(); ++i) v.segment(static_cast<Eigen::Index>(i) * dim_b, dim_b) = parts[i];
  return v;
}

}  // namespace

ActionData ActionData::from_automorphisms(std::shared_ptr<const Backend> be, FdCStarAlgebra b,
                                          std::vector<CMat> automorphisms) {
  if (be->kind() != BackendKind::FiniteGroup)
    throw ConfigurationError("automorphism actions need a finite-group backend");
  const GroupPresentation& g = be->group();
  if (static_cast<int>(automorphisms.size()) != g.size())
    throw DimensionError("one automorphism per group element is required");
  ActionData a;
  a.backend = std::move(be);
  a.algebra = std::move(b);
  a.kind = ActionKind::Automorphism;
  for (int x = 0; x < g.size(); ++x) {
    const CMat& m = automorphisms[static_cast<std::size_t>(g.inverse[x])];
    if (m.rows() != a.algebra.dim() || m.cols() != a.algebra.dim())
      throw DimensionError("automorphism matrix has the wrong size");
    a.module_maps.push_back(m);
  }
  return a;
}

ActionData ActionData::from_grading(std::shared_ptr<const Backend> be, FdCStarAlgebra b,
                                    const std::vector<CMat>& blocks) {
  if (be->kind() != BackendKind::DualGroup) throw ConfigurationError("gradings need a dual-group backend");
  const int n = be->group().size();
  if (static_cast<int>(blocks.size()) != n) throw DimensionError("one graded subspace per group element is required");
  const int d = b.dim();
  Eigen::Index total = 0;
  for (const auto& bl : blocks) {
    if (bl.rows() != d && bl.cols() != 0) throw DimensionError("graded subspace has the wrong ambient dimension");
    total += bl.cols();
  }
  if (total != d) throw ConfigurationError("graded subspaces do not add up to the algebra");
  CMat all(d, d);
  Eigen::Index off = 0;
  for (const auto& bl : blocks) {
    if (bl.cols()) all.middleCols(off, bl.cols()) = bl;
    off += bl.cols();
  }
  Eigen::FullPivLU<CMat> lu(all);
  if (!lu.isInvertible()) throw ConfigurationError("graded subspaces are linearly dependent");
  CMat inv = lu.inverse();
  ActionData a;
  a.backend = std::move(be);
  a.algebra = std::move(b);
  a.kind = ActionKind::Grading;
  off = 0;
  for (const auto& bl : blocks) {
    if (bl.cols() == 0) {
      a.module_maps.push_back(CMat::Zero(d, d));
    } else {
      a.module_maps.push_back(bl * inv.middleRows(off, bl.cols()));
    }
    off += bl.cols();
  }
  return a;
}

std::vector<CMat> ActionData::automorphisms() const {
  std::vector<CMat> out;
  const GroupPresentation& g = backend->group();
  for (int x = 0; x < g.size(); ++x) out.push_back(module_maps[static_cast<std::size_t>(g.inverse[x])]);
  return out;
}

std::vector<CMat> ActionData::grading() const {
  std::vector<CMat> out;
  for (const auto& m : module_maps) out.push_back(linalg::orthonormal_span(m, 1e-8));
  return out;
}

CVec ActionData::act(const CVec& x, const CVec& omega) const {
  CVec out = CVec::Zero(x.size());
  for (Eigen::Index b = 0; b < omega.size(); ++b)
    if (omega(b) != cplx(0.0)) out += omega(b) * (module_maps[static_cast<std::size_t>(b)] * x);
  return out;
}

Report validate_action(const ActionData& act, const Tolerance& tol) {
  Report rep;
  const HopfAlgebra& h = act.backend->hopf();
  const FdCStarAlgebra& b = act.algebra;
  const int d = b.dim();
  bool shapes = static_cast<int>(act.module_maps.size()) == h.dim;
  for (const auto& m : act.module_maps) shapes = shapes && m.rows() == d && m.cols() == d;
  rep.add_flag("shapes", shapes);
  if (!shapes) return rep;
  double action = 0.0;
  for (int x = 0; x < h.dim; ++x)
    for (int y = 0; y < h.dim; ++y) {
      CVec xy = h.multiply(h.basis(x), h.basis(y));
      CMat m = CMat::Zero(d, d);
      for (int c = 0; c < h.dim; ++c)
        if (xy(c) != cplx(0.0)) m += xy(c) * act.module_maps[c];
      action = std::max(action, linalg::max_abs(CMat(act.module_maps[y] * act.module_maps[x] - m)));
    }
  rep.add("right_action", action, tol.tau);
  CMat unit = CMat::Zero(d, d);
  for (int c = 0; c < h.dim; ++c) unit += h.unit(c) * act.module_maps[c];
  rep.add("unit_acts_trivially", linalg::max_abs(CMat(unit - CMat::Identity(d, d))), tol.tau);
  double one = 0.0;
  for (int c = 0; c < h.dim; ++c)
    one = std::max(one, linalg::max_abs(CVec(act.module_maps[c] * b.unit() - h.counit(c) * b.unit())));
  rep.add("algebra_unit_invariant", one, tol.tau);
  Rng rng(7);
  double modalg = 0.0, starc = 0.0;
  for (int s = 0; s < 4; ++s) {
    CVec x = rng.complex_vector(d), y = rng.complex_vector(d);
    CVec xy = b.multiply(x, y);
    for (int w = 0; w < h.dim; ++w) {
      CVec rhs = CVec::Zero(d);
      for (int i = 0; i < h.dim; ++i)
        for (int j = 0; j < h.dim; ++j) {
          cplx c = h.coproduct(i * h.dim + j, w);
          if (c != cplx(0.0)) rhs += c * b.multiply(act.module_maps[i] * x, act.module_maps[j] * y);
        }
      modalg = std::max(modalg, linalg::max_abs(CVec(act.module_maps[w] * xy - rhs)));
      CVec sw = h.adjoint(h.antipode.col(w));
      starc = std::max(starc, linalg::max_abs(CVec(b.adjoint(act.module_maps[w] * x) - act.act(b.adjoint(x), sw))));
    }
  }
  rep.add("multiplicative", modalg, tol.tau);
  rep.add("star_compatible", starc, tol.tau);
  return rep;
}

FixedAlgebra fixed_algebra(const ActionData& act, const Tolerance& tol, std::uint64_t seed) {
  FixedAlgebra out;
  if (act.fixed_embedding) {
    out.algebra = act.fixed_embedding->first;
    out.embedding = act.fixed_embedding->second;
    out.coords = linalg::pinv(out.embedding);
    return out;
  }
  const HopfAlgebra& h = act.backend->hopf();
  const FdCStarAlgebra& b = act.algebra;
  const int d = b.dim();
  CMat stacked(static_cast<Eigen::Index>(h.dim) * d, d);
  for (int k = 0; k < h.dim; ++k)
    stacked.middleRows(static_cast<Eigen::Index>(k) * d, d) = act.module_maps[k] - h.counit(k) * CMat::Identity(d, d);
  CMat fixed = linalg::null_space(stacked, tol.rank);
  std::vector<CMat> span;
  for (Eigen::Index k = 0; k < fixed.cols(); ++k) span.push_back(b.to_matrix(fixed.col(k)));
  WedderburnDecomposition w = wedderburn(span, seed, tol.rank);
  out.algebra = w.algebra;
  out.embedding = CMat(d, w.algebra.dim());
  for (int k = 0; k < w.algebra.dim(); ++k) out.embedding.col(k) = b.from_matrix(w.units[k]);
  out.coords = linalg::pinv(out.embedding);
  return out;
}

CMat spectral_subspace(const Backend& be, const std::vector<CMat>& module_maps, int alpha, const Tolerance& tol) {
  const HopfAlgebra& h = be.hopf();
  const int d = be.irrep(alpha).dim;
  const int db = module_maps.empty() ? 0 : static_cast<int>(module_maps[0].rows());
  CMat sys = CMat::Zero(static_cast<Eigen::Index>(h.dim) * d * db, static_cast<Eigen::Index>(d) * db);
  for (int w = 0; w < h.dim; ++w) {
    const CMat& p = be.rep(alpha).pi[w];
    for (int i = 0; i < d; ++i) {
      const Eigen::Index row = (static_cast<Eigen::Index>(w) * d + i) * db;
      sys.block(row, static_cast<Eigen::Index>(i) * db, db, db) += module_maps[w];
      for (int j = 0; j < d; ++j)
        sys.block(row, static_cast<Eigen::Index>(j) * db, db, db) -= p(i, j) * CMat::Identity(db, db);
    }
  }
  return linalg::null_space(sys, tol.rank);
}

CMat spectral_subspace(const ActionData& act, int alpha, const Tolerance& tol) {
  return spectral_subspace(*act.backend, act.module_maps, alpha, tol);
}

CMat closest_bimodule_map(const Correspondence& mf, const Correspondence& mg, const CMat& ref, const Tolerance& tol) {
  const int m = mf.dim, m2 = mg.dim, da = mf.algebra.dim();
  if (m == 0 || m2 == 0) return ref;
  CMat sys(2 * static_cast<Eigen::Index>(da) * m2 * m, static_cast<Eigen::Index>(m2) * m);
  const Eigen::Index blk = static_cast<Eigen::Index>(m2) * m;
  for (int k = 0; k < da; ++k) {
    // vec(T R_f - R_g T) = (R_f^T (x) 1 - 1 (x) R_g) vec(T)
    sys.middleRows(2 * k * blk, blk) = linalg::kron(CMat(mf.right[k].transpose()), CMat::Identity(m2, m2)) -
                                      linalg::kron(CMat::Identity(m, m), mg.right[k]);
    sys.middleRows((2 * k + 1) * blk, blk) = linalg::kron(CMat(mf.left[k].transpose()), CMat::Identity(m2, m2)) -
                                            linalg::kron(CMat::Identity(m, m), mg.left[k]);
  }
  CMat ns = linalg::null_space(sys, tol.rank);
  return linalg::unvec(ns * (ns.adjoint() * linalg::vec(ref)), m2, m);
}

SpectralFunctor spectral_functor(const ActionData& act, const Tolerance& tol, std::uint64_t seed) {
  const Backend& be = *act.backend;
  const FdCStarAlgebra& b = act.algebra;
  const int db = b.dim(), n = be.num_irreps();
  SpectralFunctor out;
  out.fixed = fixed_algebra(act, tol, seed);
  const FdCStarAlgebra& a = out.fixed.algebra;
  out.functor.backend = act.backend;
  out.functor.base = a;
  for (int al = 0; al < n; ++al) {
    CMat basis = al == be.trivial() ? out.fixed.embedding : spectral_subspace(act, al, tol);
    out.bases.push_back(basis);
    out.coords.push_back(linalg::pinv(basis));
  }
  std::vector<CMat> psi;
  for (int k = 0; k < a.dim(); ++k) psi.push_back(b.left_mult(out.fixed.embedding.col(k)));
  std::vector<CMat> psi_r;
  for (int k = 0; k < a.dim(); ++k) psi_r.push_back(b.right_mult(out.fixed.embedding.col(k)));
  for (int al = 0; al < n; ++al) {
    const int d = be.irrep(al).dim;
    const CMat& basis = out.bases[al];
    const CMat& coords = out.coords[al];
    const int m = static_cast<int>(basis.cols());
    Correspondence mod;
    mod.algebra = a;
    mod.dim = m;
    for (int k = 0; k < a.dim(); ++k) {
      CMat bigl = linalg::kron(CMat::Identity(d, d), psi[k]);
      CMat bigr = linalg::kron(CMat::Identity(d, d), psi_r[k]);
      mod.right.push_back(coords * bigr * basis);
      mod.left.push_back(coords * bigl * basis);
    }
    mod.inner.assign(m, std::vector<CVec>(m));
    for (int p = 0; p < m; ++p) {
      std::vector<CVec> xs = unstack(basis.col(p), d, db);
      for (int q = 0; q < m; ++q) {
        std::vector<CVec> ys = unstack(basis.col(q), d, db);
        CVec acc = CVec::Zero(db);
        for (int i = 0; i < d; ++i) acc += b.multiply(b.adjoint(xs[i]), ys[i]);
        mod.inner[p][q] = out.fixed.coords * acc;
      }
    }
    out.functor.modules.push_back(std::move(mod));
  }
  // phi(w^*)(X (x) Y) = coordinates of (w^* (x) 1)(x_i y_j)_(ij)
  for (int al = 0; al < n; ++al)
    for (int bt = 0; bt < n; ++bt) {
      const int da = be.irrep(al).dim, dbt = be.irrep(bt).dim;
      const int ma = out.functor.modules[al].dim, mb = out.functor.modules[bt].dim;
      if (ma == 0 || mb == 0) continue;
      // products z[(p,q)] stacked over (i,j)
      CMat z(static_cast<Eigen::Index>(da) * dbt * db, static_cast<Eigen::Index>(ma) * mb);
      for (int p = 0; p < ma; ++p) {
        std::vector<CVec> xs = unstack(out.bases[al].col(p), da, db);
        for (int q = 0; q < mb; ++q) {
          std::vector<CVec> ys = unstack(out.bases[bt].col(q), dbt, db);
          for (int i = 0; i < da; ++i)
            for (int j = 0; j < dbt; ++j)
              z.block((static_cast<Eigen::Index>(i) * dbt + j) * db, static_cast<Eigen::Index>(p) * mb + q, db, 1) =
                  b.multiply(xs[i], ys[j]);
        }
      }
      std::vector<int> seen(n, 0);
      for (const auto& part : be.fusion(al, bt)) {
        const int c = part.label, k = seen[c]++;
        auto& slot = out.functor.phi[{al, bt, c}];
        if (static_cast<int>(slot.size()) <= k) slot.resize(static_cast<std::size_t>(k) + 1);
        CMat t = linalg::kron(CMat(part.w.adjoint()), CMat::Identity(db, db));
        slot[static_cast<std::size_t>(k)] = out.coords[c] * t * z;
      }
    }
  return out;
}

Report check_spectral(const ActionData& act, const SpectralFunctor& s, const Tolerance& tol) {
  Report rep;
  const Backend& be = *act.backend;
  const FdCStarAlgebra& b = act.algebra;
  const int db = b.dim(), n = be.num_irreps();
  const FunctorData& f = s.functor;
  long count = 0;
  for (int al = 0; al < n; ++al) count += static_cast<long>(be.irrep(al).dim) * f.module(al).dim;
  rep.add_flag("peter_weyl_count", count == db,
               "sum dim U * dim M = " + std::to_string(count) + ", dim B = " + std::to_string(db));
  CMat me = spectral_subspace(act, be.trivial(), tol);
  rep.add_flag("trivial_component_is_fixed_algebra", me.cols() == f.base.dim(),
               "fixed points " + std::to_string(me.cols()) + ", dim A " + std::to_string(f.base.dim()));

  // S_X^* Z = X^*_13 Z on basis vectors.
  double sx = 0.0;
  for (int al = 0; al < n; ++al)
    for (int bt = 0; bt < n; ++bt) {
      const int da = be.irrep(al).dim, dbt = be.irrep(bt).dim;
      FObject u = irreducible_object(f, al), v = irreducible_object(f, bt);
      FObject uv = u;
      uv.rep = be.tensor(u.rep, v.rep);
      uv.parts = be.fusion(al, bt);
      uv.offsets.clear();
      uv.dim = 0;
      for (const auto& p : uv.parts) {
        uv.offsets.push_back(uv.dim);
        uv.dim += f.module(p.label).dim;
      }
      if (u.dim == 0 || v.dim == 0 || uv.dim == 0) continue;
      Correspondence muv = functor_module(f, uv);
      CMat f2 = functor_tensor(f, u, v, uv);
      // concrete vectors of F(U x V)
      CMat concrete = CMat::Zero(static_cast<Eigen::Index>(da) * dbt * db, uv.dim);
      for (std::size_t k = 0; k < uv.parts.size(); ++k) {
        const int c = uv.parts[k].label, mc = f.module(c).dim;
        if (mc == 0) continue;
        concrete.middleCols(uv.offsets[k], mc) = linalg::kron(uv.parts[k].w, CMat::Identity(db, db)) * s.bases[c];
      }
      for (int x = 0; x < u.dim; ++x) {
        CMat sxm = f2 * linalg::kron(CMat(unit_vector(u.dim, x)), CMat::Identity(v.dim, v.dim));
        AdjointResult ar = adjoint_of(f.module(bt), muv, sxm, tol.tau);
        std::vector<CVec> xs = unstack(s.bases[al].col(x), da, db);
        for (int z = 0; z < uv.dim; ++z) {
          std::vector<CVec> ys(dbt, CVec::Zero(db));
          for (int i = 0; i < da; ++i)
            for (int j = 0; j < dbt; ++j)
              ys[j] += b.multiply(b.adjoint(xs[i]),
                                  concrete.block((static_cast<Eigen::Index>(i) * dbt + j) * db, z, db, 1));
          CVec direct = s.coords[bt] * stack(ys, db);
          sx = std::max(sx, linalg::max_abs(CVec(direct - ar.adjoint.col(z))));
        }
      }
    }
  rep.add("sx_adjoint_formula", sx, tol.tau, "S_X^* Z = X^*_13 Z");

  // E = action of the integral is faithful.
  const HopfAlgebra& h = be.hopf();
  CMat e = CMat::Zero(db, db);
  for (int k = 0; k < h.dim; ++k) e += h.integral(k) * act.module_maps[k];
  CMat gram(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      gram(i, j) = b.trace(e * b.multiply(b.adjoint(b.basis(i)), b.basis(j)));
  double mn = linalg::min_eigenvalue_hermitian(gram);
  rep.add_flag("expectation_faithful", mn > tol.tau, "smallest Gram eigenvalue " + std::to_string(mn));
  return rep;
}

IsomorphismCertificate roundtrip_check(const ActionData& act, const Tolerance& tol, std::uint64_t seed,
                                       int samples) {
  IsomorphismCertificate cert;
  const Backend& be = *act.backend;
  const FdCStarAlgebra& b = act.algebra;
  const int db = b.dim(), n = be.num_irreps();
  cert.report.append(validate_action(act, tol), "action.");
  SpectralFunctor sf = spectral_functor(act, tol, seed);
  cert.report.append(check_spectral(act, sf, tol), "spectral.");
  BuildResult br;
  try {
    br = build(sf.functor, tol, seed, samples);
  } catch (const ConfigurationError& ex) {
    cert.report.append(validate_wutf(sf.functor, tol), "functor.");
    cert.report.add_flag("build", false, ex.what());
    return cert;
  }
  cert.report.append(br.validation, "functor.");
  cert.report.append(br.report, "build.");
  const ReconstructedAlgebra& bf = *br.algebra;
  CMat phi = CMat::Zero(db, bf.dim());
  for (int al = 0; al < n; ++al) {
    const int d = be.irrep(al).dim, m = bf.functor().module(al).dim;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < m; ++k)
        phi.col(bf.component_offset(al) + i * m + k) = sf.bases[al].block(static_cast<Eigen::Index>(i) * db, k, db, 1);
  }
  cert.map = phi;
  double smin = 0.0;
  if (phi.rows() == phi.cols() && phi.size()) {
    Eigen::JacobiSVD<CMat> svd(phi);
    smin = svd.singularValues()(svd.singularValues().size() - 1);
  }
  cert.report.add_flag("bijective", phi.rows() == phi.cols() && smin > tol.rank,
                       "dim B = " + std::to_string(db) + ", dim B_F = " + std::to_string(bf.dim()) +
                           ", smallest singular value " + std::to_string(smin));
  if (phi.rows() != phi.cols()) return cert;
  Rng rng(seed + 1);
  double mult = 0.0, star = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVec x = bf.random(rng), y = bf.random(rng);
    mult = std::max(mult, linalg::max_abs(CVec(phi * bf.multiply(x, y) - b.multiply(phi * x, phi * y))));
    star = std::max(star, linalg::max_abs(CVec(phi * bf.star(x) - b.adjoint(phi * x))));
  }
  cert.report.add("multiplicative", mult, tol.tau);
  cert.report.add("star_preserving", star, tol.tau);
  const HopfAlgebra& h = be.hopf();
  double eq = 0.0;
  for (int k = 0; k < h.dim; ++k)
    eq = std::max(eq, linalg::max_abs(CMat(phi * bf.act_matrix(h.basis(k)) - act.module_maps[k] * phi)));
  cert.report.add("equivariant", eq, tol.tau);
  double ida = 0.0;
  for (int k = 0; k < sf.fixed.algebra.dim(); ++k)
    ida = std::max(ida, linalg::max_abs(CVec(phi * bf.embed(sf.fixed.algebra.basis(k)) - sf.fixed.embedding.col(k))));
  cert.report.add("identity_on_fixed_algebra", ida, tol.tau);
  return cert;
}

RealizedAction realize(const ReconstructedAlgebra& bf, const Tolerance& tol, std::uint64_t seed) {
  const int d = bf.dim();
  const Correspondence& reg = bf.regular_module();
  CMat g = reg.trace_gram();
  CMat gs = linalg::sqrt_psd(g), gi = linalg::inv_sqrt_pd(g);
  std::vector<CMat> ls;
  for (int k = 0; k < d; ++k) ls.push_back(gs * bf.left_mult(bf.basis(k)) * gi);
  WedderburnDecomposition w = wedderburn(ls, seed, tol.rank);
  if (w.algebra.dim() != d) throw ContractViolation("reconstructed algebra is not semisimple of the expected dimension");
  RealizedAction out;
  out.to_blocks = CMat(d, d);
  for (int k = 0; k < d; ++k) out.to_blocks.col(k) = w.coordinates(ls[k]);
  out.from_blocks = out.to_blocks.inverse();
  ActionData& act = out.action;
  act.backend = bf.functor().backend;
  act.algebra = w.algebra;
  act.kind = act.backend->kind() == BackendKind::FiniteGroup ? ActionKind::Automorphism : ActionKind::Grading;
  const HopfAlgebra& h = act.backend->hopf();
  for (int k = 0; k < h.dim; ++k) act.module_maps.push_back(out.to_blocks * bf.act_matrix(h.basis(k)) * out.from_blocks);
  const FdCStarAlgebra& a = bf.base();
  CMat emb(d, a.dim());
  for (int k = 0; k < a.dim(); ++k) emb.col(k) = out.to_blocks * bf.embed(a.basis(k));
  act.fixed_embedding = std::make_pair(a, emb);
  return out;
}

Report check_natural_isomorphism(const FunctorData& f, const FunctorData& g, const std::vector<CMat>& eta,
                                 const Tolerance& tol) {
  Report rep;
  const Backend& be = *f.backend;
  const int n = be.num_irreps();
  bool shapes = static_cast<int>(eta.size()) == n && f.base == g.base;
  for (int a = 0; a < n && shapes; ++a)
    shapes = eta[a].rows() == g.module(a).dim && eta[a].cols() == f.module(a).dim &&
             f.module(a).dim == g.module(a).dim;
  rep.add_flag("shapes", shapes);
  if (!shapes) return rep;
  double bim = 0.0, uni = 0.0, mon = 0.0;
  for (int a = 0; a < n; ++a) {
    bim = std::max(bim, right_linearity_defect(f.module(a), g.module(a), eta[a]));
    bim = std::max(bim, left_linearity_defect(f.module(a), g.module(a), eta[a]));
    uni = std::max(uni, gram_defect(g.module(a).coordinate_grams(), eta[a], f.module(a).coordinate_grams()));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const auto ws = be.fusion_for(a, b, c);
        for (std::size_t k = 0; k < ws.size(); ++k) {
          CMat lhs = eta[c] * f.phi_basis(a, b, c, static_cast<int>(k));
          CMat rhs = g.phi_basis(a, b, c, static_cast<int>(k)) * linalg::kron(eta[a], eta[b]);
          if (lhs.size()) mon = std::max(mon, linalg::max_abs(CMat(lhs - rhs)));
        }
      }
  const int e = be.trivial();
  rep.add("bimodule_map", bim, tol.tau);
  rep.add("unitary", uni, tol.tau);
  rep.add("monoidal", mon, tol.tau);
  rep.add("unit_component_identity",
          linalg::max_abs(CMat(eta[e] - CMat::Identity(eta[e].rows(), eta[e].cols()))), tol.tau);
  return rep;
}

NaturalIsomorphism functor_roundtrip(const FunctorData& f, const Tolerance& tol, std::uint64_t seed) {
  NaturalIsomorphism out;
  Report val = validate_wutf(f, tol);
  out.report.append(val, "functor.");
  if (!val.ok()) return out;
  ReconstructedAlgebra bf(f, tol);
  RealizedAction ra = realize(bf, tol, seed);
  out.report.append(validate_action(ra.action, tol), "action.");
  SpectralFunctor sf = spectral_functor(ra.action, tol, seed);
  out.report.append(validate_wutf(sf.functor, tol), "spectral_functor.");
  const Backend& be = *f.backend;
  const int n = be.num_irreps(), db = ra.action.algebra.dim();
  for (int al = 0; al < n; ++al) {
    const int d = be.irrep(al).dim, m = f.module(al).dim, m2 = sf.functor.module(al).dim;
    CMat ref(m2, m);
    for (int k = 0; k < m; ++k) {
      std::vector<CVec> ys;
      for (int i = 0; i < d; ++i) {
        CMat comp = CMat::Zero(d, m);
        comp(i, k) = 1.0;
        ys.push_back(ra.to_blocks * bf.from_component(al, comp));
      }
      ref.col(k) = sf.coords[al] * stack(ys, db);
    }
    out.components.push_back(closest_bimodule_map(f.module(al), sf.functor.module(al), ref, tol));
  }
  out.report.append(check_natural_isomorphism(f, sf.functor, out.components, tol), "natural_isomorphism.");
  for (int al = 0; al < n; ++al) {
    if (f.module(al).dim == 0) continue;
    Report br = check_bullet(f, al, tol);
    out.report.append(br, "bullet[" + be.irrep(al).label + "].");
  }
  return out;
}

}  // namespace qdual

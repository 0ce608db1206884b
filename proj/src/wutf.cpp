#include "qdual/wutf.hpp"

#include <cmath>
#include <sstream>

namespace qdual {

namespace {

std::string triple_name(const Backend& be, int a, int b, int c) {
  return "(" + be.irrep(a).label + "," + be.irrep(b).label + "," + be.irrep(c).label + ")";
}

CVec unit_vector(int n, int i) {
  CVec v = CVec::Zero(n);
  v(i) = 1.0;
  return v;
}

FObject object_with_parts(const FunctorData& f, const Rep& u, std::vector<Part> parts) {
  FObject x;
  x.rep = u;
  x.parts = std::move(parts);
  for (const auto& p : x.parts) {
    x.offsets.push_back(x.dim);
    x.dim += f.module(p.label).dim;
  }
  return x;
}

FObject fusion_object(const FunctorData& f, int a, int b) {
  const Backend& be = *f.backend;
  return object_with_parts(f, be.tensor(be.rep(a), be.rep(b)), be.fusion(a, b));
}

std::string failing(const Report& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.passed) s += (s.empty() ? "" : ", ") + c.name;
  return s;
}

}  // namespace

CMat FunctorData::phi_basis(int a, int b, int c, int k) const {
  const int da = module(a).dim, db = module(b).dim, dc = module(c).dim;
  if (da == 0 || db == 0 || dc == 0) return CMat::Zero(dc, da * db);
  auto it = phi.find({a, b, c});
  if (it == phi.end() || k >= static_cast<int>(it->second.size()))
    throw IncompleteDataError("missing phi tensor for " + triple_name(*backend, a, b, c) +
                              " intertwiner " + std::to_string(k));
  const CMat& m = it->second[static_cast<std::size_t>(k)];
  if (m.rows() != dc || m.cols() != da * db)
    throw DimensionError("phi tensor for " + triple_name(*backend, a, b, c) + " has the wrong shape");
  return m;
}

CMat FunctorData::phi_of(int a, int b, int c, const CMat& t) const {
  const int da = module(a).dim, db = module(b).dim, dc = module(c).dim;
  CMat out = CMat::Zero(dc, da * db);
  if (da == 0 || db == 0 || dc == 0) return out;
  std::vector<CMat> ws = backend->fusion_for(a, b, c);
  const double dgamma = backend->irrep(c).dim;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    // T_k = w_k^*, <T_k, T> = Tr(w_k T), <T_k, T_k> = dim U_c.
    cplx coeff = (ws[k] * t).trace() / dgamma;
    if (std::abs(coeff) > 0) out += coeff * phi_basis(a, b, c, static_cast<int>(k));
  }
  return out;
}

FObject functor_object(const FunctorData& f, const Rep& u) {
  return object_with_parts(f, u, decompose(*f.backend, u));
}

FObject irreducible_object(const FunctorData& f, int a) {
  const auto& ir = f.backend->irrep(a);
  return object_with_parts(f, ir.rep, {Part{a, CMat::Identity(ir.dim, ir.dim)}});
}

Correspondence functor_module(const FunctorData& f, const FObject& x) {
  std::vector<Correspondence> parts;
  for (const auto& p : x.parts) parts.push_back(f.module(p.label));
  return direct_sum(parts, f.base);
}

CMat functor_morphism(const FunctorData& f, const FObject& x, const FObject& y, const CMat& t) {
  if (t.rows() != y.rep.dim() || t.cols() != x.rep.dim())
    throw DimensionError("functor_morphism: morphism has the wrong shape");
  CMat out = CMat::Zero(y.dim, x.dim);
  for (std::size_t j = 0; j < y.parts.size(); ++j)
    for (std::size_t i = 0; i < x.parts.size(); ++i) {
      if (y.parts[j].label != x.parts[i].label) continue;
      const int d = f.module(x.parts[i].label).dim;
      if (d == 0) continue;
      CMat s = y.parts[j].w.adjoint() * t * x.parts[i].w;
      cplx scalar = s.trace() / static_cast<double>(s.rows());
      out.block(y.offsets[j], x.offsets[i], d, d) = scalar * CMat::Identity(d, d);
    }
  return out;
}

CMat functor_tensor(const FunctorData& f, const FObject& x, const FObject& y, const FObject& z) {
  if (z.rep.dim() != x.rep.dim() * y.rep.dim())
    throw DimensionError("functor_tensor: target does not match the tensor product");
  CMat out = CMat::Zero(z.dim, x.dim * y.dim);
  for (std::size_t i = 0; i < x.parts.size(); ++i) {
    const int a = x.parts[i].label, da = f.module(a).dim;
    if (da == 0) continue;
    for (std::size_t j = 0; j < y.parts.size(); ++j) {
      const int b = y.parts[j].label, db = f.module(b).dim;
      if (db == 0) continue;
      CMat wij = linalg::kron(x.parts[i].w, y.parts[j].w);
      for (std::size_t k = 0; k < z.parts.size(); ++k) {
        const int c = z.parts[k].label, dc = f.module(c).dim;
        if (dc == 0 || f.backend->fusion_for(a, b, c).empty()) continue;
        CMat phi = f.phi_of(a, b, c, z.parts[k].w.adjoint() * wij);
        for (int p = 0; p < da; ++p)
          for (int q = 0; q < db; ++q)
            out.block(z.offsets[k], (x.offsets[i] + p) * y.dim + y.offsets[j] + q, dc, 1) =
                phi.col(p * db + q);
      }
    }
  }
  return out;
}

CMat tensor_left_map(const FunctorData& f, const FObject& u, const FObject& v, const FObject& uv,
                     const CVec& x) {
  return functor_tensor(f, u, v, uv) * linalg::kron(CMat(x), CMat::Identity(v.dim, v.dim));
}

// ---------------------------------------------------------------------------

Report validate_wutf(const FunctorData& f, const Tolerance& tol) {
  Report rep;
  const Backend& be = *f.backend;
  const int n = be.num_irreps();
  const double tau = tol.tau;
  if (static_cast<int>(f.modules.size()) != n)
    throw IncompleteDataError("functor data must give a module for every irreducible");

  bool modules_ok = true;
  std::string bad_modules;
  for (int a = 0; a < n; ++a) {
    if (f.module(a).algebra != f.base) throw ConfigurationError("module over a different algebra");
    Report r = validate_correspondence(f.module(a), tau);
    if (!r.ok()) {
      modules_ok = false;
      bad_modules += be.irrep(a).label + ": " + failing(r) + "; ";
    }
  }
  rep.add_flag("modules_valid", modules_ok, bad_modules);

  // (i) M_e = A
  {
    const Correspondence& me = f.module(be.trivial());
    Correspondence a = Correspondence::identity(f.base);
    double r = 0.0;
    if (me.dim != a.dim) {
      r = 1.0;
    } else {
      for (int k = 0; k < f.base.dim(); ++k) {
        r = std::max(r, linalg::max_abs(CMat(me.right[k] - a.right[k])));
        r = std::max(r, linalg::max_abs(CMat(me.left[k] - a.left[k])));
      }
      for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
          r = std::max(r, linalg::max_abs(CVec(me.inner[i][j] - a.inner[i][j])));
    }
    rep.add("axiom_i", r, tau, "trivial module equals the base algebra");
  }

  // phi are bimodule maps
  {
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const auto ws = be.fusion_for(a, b, c);
          const Correspondence &ma = f.module(a), &mb = f.module(b), &mc = f.module(c);
          if (ma.dim == 0 || mb.dim == 0 || mc.dim == 0) continue;
          CMat ia = CMat::Identity(ma.dim, ma.dim), ib = CMat::Identity(mb.dim, mb.dim);
          for (std::size_t k = 0; k < ws.size(); ++k) {
            CMat phi = f.phi_basis(a, b, c, static_cast<int>(k));
            for (int m = 0; m < f.base.dim(); ++m) {
              r = std::max(r, linalg::max_abs(CMat(phi * linalg::kron(ma.right[m], ib) -
                                                   phi * linalg::kron(ia, mb.left[m]))));
              r = std::max(r, linalg::max_abs(CMat(phi * linalg::kron(ma.left[m], ib) - mc.left[m] * phi)));
              r = std::max(r, linalg::max_abs(CMat(phi * linalg::kron(ia, mb.right[m]) - mc.right[m] * phi)));
            }
          }
        }
    rep.add("phi_bimodule", r, tau, "phi balanced over A and A-bilinear");
  }

  // (ii) (phi(w_1^*), ..., phi(w_n^*)) is isometric
  {
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Correspondence &ma = f.module(a), &mb = f.module(b);
        if (ma.dim == 0 || mb.dim == 0) continue;
        FObject ab = fusion_object(f, a, b);
        CMat f2 = functor_tensor(f, irreducible_object(f, a), irreducible_object(f, b), ab);
        r = std::max(r, gram_defect(functor_module(f, ab).coordinate_grams(), f2,
                                    tensor_semi_grams(ma, mb)));
      }
    rep.add("axiom_ii", r, tau, "F_2 isometric on irreducible pairs");
  }

  // (iii) unit conditions
  {
    double r = 0.0;
    const int e = be.trivial();
    for (int a = 0; a < n; ++a) {
      const Correspondence& ma = f.module(a);
      if (ma.dim == 0) continue;
      const int da = be.irrep(a).dim, dA = f.base.dim();
      CMat id = CMat::Identity(da, da);
      CMat left = f.phi_of(e, a, a, id), right = f.phi_of(a, e, a, id);
      for (int m = 0; m < dA; ++m)
        for (int j = 0; j < ma.dim; ++j) {
          r = std::max(r, linalg::max_abs(CVec(left.col(m * ma.dim + j) - ma.left[m].col(j))));
          r = std::max(r, linalg::max_abs(CVec(right.col(j * dA + m) - ma.right[m].col(j))));
        }
    }
    rep.add("axiom_iii", r, tau, "unit maps a (x) X -> aX and X (x) a -> Xa");
  }

  // (iv) associativity and (v) adjointability plus exchange
  double assoc = 0.0, adj_res = 0.0, exch = 0.0;
  bool adjointable = true;
  std::string adj_detail;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      FObject u = irreducible_object(f, a), v = irreducible_object(f, b);
      FObject uv = fusion_object(f, a, b);
      CMat f2_uv = functor_tensor(f, u, v, uv);
      Correspondence m_uv = functor_module(f, uv);
      // S_X : F(V) -> F(U x V) for basis X of M_a
      std::vector<CMat> s_adj;
      for (int x = 0; x < u.dim; ++x) {
        CMat s = f2_uv * linalg::kron(CMat(unit_vector(u.dim, x)), CMat::Identity(v.dim, v.dim));
        try {
          AdjointResult ar = adjoint_of(f.module(b), m_uv, s, tau);
          adj_res = std::max(adj_res, ar.residual);
          if (!ar.adjointable) {
            adjointable = false;
            adj_detail = "S_X not adjointable for " + triple_name(be, a, b, b);
          }
          s_adj.push_back(ar.adjoint);
        } catch (const ContractViolation& ex) {
          adjointable = false;
          adj_detail = std::string(ex.what()) + " at " + triple_name(be, a, b, b);
          s_adj.push_back(CMat::Zero(v.dim, uv.dim));
        }
      }
      for (int c = 0; c < n; ++c) {
        FObject w = irreducible_object(f, c);
        if (u.dim == 0 || v.dim == 0 || w.dim == 0) continue;
        FObject vw = fusion_object(f, b, c);
        FObject uvw = functor_object(f, be.tensor(uv.rep, w.rep));
        CMat f2_uv_w = functor_tensor(f, uv, w, uvw);
        CMat f2_vw = functor_tensor(f, v, w, vw);
        CMat f2_u_vw = functor_tensor(f, u, vw, uvw);
        CMat lhs = f2_uv_w * linalg::kron(f2_uv, CMat::Identity(w.dim, w.dim));
        CMat rhs = f2_u_vw * linalg::kron(CMat::Identity(u.dim, u.dim), f2_vw);
        assoc = std::max(assoc, linalg::max_abs(CMat(lhs - rhs)));

        Correspondence m_uvw = functor_module(f, uvw), m_vw = functor_module(f, vw);
        for (int x = 0; x < u.dim; ++x) {
          CMat s_vw = f2_u_vw * linalg::kron(CMat(unit_vector(u.dim, x)), CMat::Identity(vw.dim, vw.dim));
          CMat s_vw_adj;
          try {
            AdjointResult ar = adjoint_of(m_vw, m_uvw, s_vw, tau);
            adj_res = std::max(adj_res, ar.residual);
            if (!ar.adjointable) {
              adjointable = false;
              adj_detail = "S_X not adjointable for " + triple_name(be, a, b, c);
            }
            s_vw_adj = ar.adjoint;
          } catch (const ContractViolation& ex) {
            adjointable = false;
            adj_detail = std::string(ex.what()) + " at " + triple_name(be, a, b, c);
            continue;
          }
          CMat l = f2_vw * linalg::kron(s_adj[static_cast<std::size_t>(x)], CMat::Identity(w.dim, w.dim));
          CMat r = s_vw_adj * f2_uv_w;
          exch = std::max(exch, linalg::max_abs(CMat(l - r)));
        }
      }
    }
  rep.add("axiom_iv", assoc, tau, "F_2 associativity on all irreducible triples");
  Check& c = rep.add("axiom_v_adjointable", adj_res, tau, adj_detail);
  c.passed = c.passed && adjointable;
  rep.add("axiom_v_exchange", exch, tau, "F_2(S_X^* (x) 1) = S_X^* F_2");
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct BulletData {
  int conj;
  FObject triv, u, ubar, uubar;
  CVec fr;  // F(Rbar)(1) in F(U x Ubar)
  CMat f2;  // F_2 : M_a (x) M_conj -> F(U x Ubar)
  Correspondence m_uubar;
};

BulletData bullet_data(const FunctorData& f, int a) {
  const Backend& be = *f.backend;
  BulletData d;
  d.conj = be.irrep(a).conj;
  d.triv = irreducible_object(f, be.trivial());
  d.u = irreducible_object(f, a);
  d.ubar = irreducible_object(f, d.conj);
  d.uubar = fusion_object(f, a, d.conj);
  CMat rbar = be.conjugate(a).rbar;
  d.fr = functor_morphism(f, d.triv, d.uubar, rbar) * f.base.unit();
  d.f2 = functor_tensor(f, d.u, d.ubar, d.uubar);
  d.m_uubar = functor_module(f, d.uubar);
  return d;
}

CVec bullet_basis(const FunctorData& f, const BulletData& d, int x, const Tolerance& tol) {
  CMat s = d.f2 * linalg::kron(CMat(unit_vector(d.u.dim, x)), CMat::Identity(d.ubar.dim, d.ubar.dim));
  AdjointResult ar = adjoint_of(f.module(d.conj), d.m_uubar, s, tol.tau);
  if (!ar.adjointable) throw ContractViolation("bullet: S_X is not adjointable (axiom (v) fails)");
  return ar.adjoint * d.fr;
}

}  // namespace

CMat bullet_matrix(const FunctorData& f, int a, const Tolerance& tol) {
  BulletData d = bullet_data(f, a);
  CMat out(d.ubar.dim, d.u.dim);
  for (int x = 0; x < d.u.dim; ++x) out.col(x) = bullet_basis(f, d, x, tol).conjugate();
  return out;
}

CVec bullet(const FunctorData& f, int a, const CVec& x, const Tolerance& tol) {
  return (bullet_matrix(f, a, tol) * x).conjugate();
}

cplx double_bullet_scalar(const Backend& be, int a) {
  const int c = be.irrep(a).conj;
  const CVec& r = be.conjugate(a).r;
  const CVec& rbar = be.conjugate(c).rbar;
  return r.dot(rbar) / r.squaredNorm();
}

Report check_bullet(const FunctorData& f, int a, const Tolerance& tol) {
  Report rep;
  const Backend& be = *f.backend;
  BulletData d = bullet_data(f, a);
  const Correspondence &ma = f.module(a), &mc = f.module(d.conj);
  CMat bm = bullet_matrix(f, a, tol);
  // <X^bullet, Y> = F(Rbar^*) F_2(X (x) Y)
  CMat rbar_adj = CMat(be.conjugate(a).rbar).adjoint();
  CMat frbar_adj = functor_morphism(f, d.uubar, d.triv, rbar_adj);
  double r1 = 0.0;
  for (int x = 0; x < ma.dim; ++x) {
    CVec xb = CVec(bm.col(x)).conjugate();
    for (int y = 0; y < mc.dim; ++y) {
      CVec lhs = mc.inner_product(xb, unit_vector(mc.dim, y));
      CVec rhs = frbar_adj * d.f2 * linalg::kron(unit_vector(ma.dim, x), unit_vector(mc.dim, y));
      r1 = std::max(r1, linalg::max_abs(CVec(lhs - rhs)));
    }
  }
  rep.add("bullet_first_identity", r1, tol.tau);
  // <X, Y> = F(R^*) F_2(X^bullet (x) Y)
  FObject ubar_u = fusion_object(f, d.conj, a);
  CMat f2b = functor_tensor(f, d.ubar, d.u, ubar_u);
  CMat fr_adj = functor_morphism(f, ubar_u, d.triv, CMat(CMat(be.conjugate(a).r).adjoint()));
  double r2 = 0.0;
  for (int x = 0; x < ma.dim; ++x) {
    CVec xb = CVec(bm.col(x)).conjugate();
    for (int y = 0; y < ma.dim; ++y) {
      CVec lhs = ma.inner_product(unit_vector(ma.dim, x), unit_vector(ma.dim, y));
      CVec rhs = fr_adj * f2b * linalg::kron(xb, unit_vector(ma.dim, y));
      r2 = std::max(r2, linalg::max_abs(CVec(lhs - rhs)));
    }
  }
  rep.add("bullet_second_identity", r2, tol.tau);
  // X^{bullet bullet} = u X
  CMat bmc = bullet_matrix(f, d.conj, tol);
  cplx u = double_bullet_scalar(be, a);
  double r3 = 0.0;
  for (int x = 0; x < ma.dim; ++x) {
    CVec xb = CVec(bm.col(x)).conjugate();
    CVec xbb = (bmc * xb).conjugate();
    r3 = std::max(r3, linalg::max_abs(CVec(xbb - u * unit_vector(ma.dim, x))));
  }
  rep.add("double_bullet", r3, tol.tau);
  return rep;
}

// ---------------------------------------------------------------------------

CMat GradedBundleData::mult_of(int a, int b) const {
  const int c = group.mul[a][b];
  const int da = fibers.at(a).dim, db = fibers.at(b).dim, dc = fibers.at(c).dim;
  if (da == 0 || db == 0 || dc == 0) return CMat::Zero(dc, da * db);
  auto it = mult.find({a, b});
  if (it == mult.end())
    throw IncompleteDataError("missing multiplication map for (" + group.elements[a] + "," +
                              group.elements[b] + ")");
  if (it->second.rows() != dc || it->second.cols() != da * db)
    throw DimensionError("multiplication map for (" + group.elements[a] + "," + group.elements[b] +
                         ") has the wrong shape");
  return it->second;
}

Report validate_graded(const GradedBundleData& g, const Tolerance& tol) {
  Report rep;
  const int n = g.group.size();
  const double tau = tol.tau;
  const FdCStarAlgebra& base = g.base;
  if (static_cast<int>(g.fibers.size()) != n)
    throw IncompleteDataError("graded data must give a fiber for every group element");
  bool fibers_ok = true;
  std::string bad;
  for (int a = 0; a < n; ++a) {
    if (g.fibers[a].algebra != base) throw ConfigurationError("fiber over a different algebra");
    Report r = validate_correspondence(g.fibers[a], tau);
    if (!r.ok()) {
      fibers_ok = false;
      bad += g.group.elements[a] + ": " + failing(r) + "; ";
    }
  }
  rep.add_flag("fibers_valid", fibers_ok, bad);

  // (a) M_e = A
  {
    const Correspondence& me = g.fibers[g.group.identity];
    Correspondence a = Correspondence::identity(base);
    double r = 0.0;
    if (me.dim != a.dim) {
      r = 1.0;
    } else {
      for (int k = 0; k < base.dim(); ++k) {
        r = std::max(r, linalg::max_abs(CMat(me.right[k] - a.right[k])));
        r = std::max(r, linalg::max_abs(CMat(me.left[k] - a.left[k])));
      }
      for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
          r = std::max(r, linalg::max_abs(CVec(me.inner[i][j] - a.inner[i][j])));
    }
    rep.add("a", r, tau, "identity fiber equals the base algebra");
  }

  // bimodule property and isometry of each multiplication map
  double bim = 0.0, iso = 0.0;
  bool surjective = true;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Correspondence &ma = g.fibers[a], &mb = g.fibers[b], &mc = g.fibers[g.group.mul[a][b]];
      CMat phi = g.mult_of(a, b);
      if (mc.dim > 0) {
        Eigen::Index rank = phi.size() ? Eigen::FullPivLU<CMat>(phi).setThreshold(1e-10).rank() : 0;
        if (rank < mc.dim) surjective = false;
      }
      if (ma.dim == 0 || mb.dim == 0 || mc.dim == 0) continue;
      CMat ia = CMat::Identity(ma.dim, ma.dim), ib = CMat::Identity(mb.dim, mb.dim);
      for (int m = 0; m < base.dim(); ++m) {
        bim = std::max(bim, linalg::max_abs(CMat(phi * linalg::kron(ma.right[m], ib) -
                                                 phi * linalg::kron(ia, mb.left[m]))));
        bim = std::max(bim, linalg::max_abs(CMat(phi * linalg::kron(ma.left[m], ib) - mc.left[m] * phi)));
        bim = std::max(bim, linalg::max_abs(CMat(phi * linalg::kron(ia, mb.right[m]) - mc.right[m] * phi)));
      }
      iso = std::max(iso, gram_defect(mc.coordinate_grams(), phi, tensor_semi_grams(ma, mb)));
    }
  rep.add("bimodule", bim, tau, "multiplication maps balanced and A-bilinear");
  rep.add("isometric", iso, tau, "multiplication maps isometric");

  // (b) unit maps
  {
    double r = 0.0;
    const int e = g.group.identity, dA = base.dim();
    for (int a = 0; a < n; ++a) {
      const Correspondence& ma = g.fibers[a];
      if (ma.dim == 0) continue;
      CMat left = g.mult_of(e, a), right = g.mult_of(a, e);
      for (int m = 0; m < dA; ++m)
        for (int j = 0; j < ma.dim; ++j) {
          r = std::max(r, linalg::max_abs(CVec(left.col(m * ma.dim + j) - ma.left[m].col(j))));
          r = std::max(r, linalg::max_abs(CVec(right.col(j * dA + m) - ma.right[m].col(j))));
        }
    }
    rep.add("b", r, tau, "unit maps");
  }

  // (c) associativity
  {
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const int ab = g.group.mul[a][b], bc = g.group.mul[b][c];
          const int da = g.fibers[a].dim, dc = g.fibers[c].dim;
          CMat lhs = g.mult_of(ab, c) * linalg::kron(g.mult_of(a, b), CMat::Identity(dc, dc));
          CMat rhs = g.mult_of(a, bc) * linalg::kron(CMat::Identity(da, da), g.mult_of(b, c));
          r = std::max(r, lhs.size() ? linalg::max_abs(CMat(lhs - rhs)) : 0.0);
        }
    rep.add("c", r, tau, "associativity");
  }

  // (d) adjointability and exchange, not needed when every map is surjective
  if (surjective) {
    rep.add_flag("d", true, "skipped: all multiplication maps are surjective");
  } else {
    double res = 0.0, exch = 0.0;
    bool adjointable = true;
    std::string detail;
    auto s_adjoint = [&](int a, int b, int x, double& residual) -> CMat {
      const Correspondence &ma = g.fibers[a], &mb = g.fibers[b], &mab = g.fibers[g.group.mul[a][b]];
      CMat s = g.mult_of(a, b) * linalg::kron(CMat(unit_vector(ma.dim, x)), CMat::Identity(mb.dim, mb.dim));
      AdjointResult ar = adjoint_of(mb, mab, s, tau);
      residual = std::max(residual, ar.residual);
      if (!ar.adjointable) {
        adjointable = false;
        detail = "S_X not adjointable at (" + g.group.elements[a] + "," + g.group.elements[b] + ")";
      }
      return ar.adjoint;
    };
    try {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            const int ab = g.group.mul[a][b], bc = g.group.mul[b][c];
            const int dc = g.fibers[c].dim;
            for (int x = 0; x < g.fibers[a].dim; ++x) {
              CMat sb = s_adjoint(a, b, x, res), sbc = s_adjoint(a, bc, x, res);
              CMat lhs = g.mult_of(b, c) * linalg::kron(sb, CMat::Identity(dc, dc));
              CMat rhs = sbc * g.mult_of(ab, c);
              if (lhs.size()) exch = std::max(exch, linalg::max_abs(CMat(lhs - rhs)));
            }
          }
    } catch (const ContractViolation& ex) {
      adjointable = false;
      detail = ex.what();
    }
    Check& ch = rep.add("d", std::max(res, exch), tau, detail);
    ch.passed = ch.passed && adjointable;
  }
  return rep;
}

FunctorData from_graded(const GradedBundleData& g, const Tolerance& tol) {
  Report r = validate_graded(g, tol);
  if (!r.ok()) throw ConfigurationError("graded data fails validation: " + failing(r));
  FunctorData f;
  auto be = std::make_shared<Backend>(Backend::dual_group(g.group, tol));
  f.backend = be;
  f.base = g.base;
  f.modules = g.fibers;
  const int n = g.group.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int c = g.group.mul[a][b];
      std::vector<CMat> ws = be->fusion_for(a, b, c);
      if (ws.size() != 1) throw TableError("unexpected fusion multiplicity in the dual backend");
      f.phi[{a, b, c}] = {std::conj(ws[0](0, 0)) * g.mult_of(a, b)};
    }
  return f;
}

}  // namespace qdual

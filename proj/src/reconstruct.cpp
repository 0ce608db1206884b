#include "qdual/reconstruct.hpp"

#include <algorithm>
#include <cmath>

namespace qdual {

namespace {

std::string failing(const Report& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.passed) s += (s.empty() ? "" : ", ") + c.name;
  return s;
}

}  // namespace

ReconstructedAlgebra::ReconstructedAlgebra(FunctorData f, const Tolerance& tol)
    : f_(std::move(f)), tol_(tol) {
  const Backend& be = *f_.backend;
  const int n = be.num_irreps();
  for (int a = 0; a < n; ++a) {
    offsets_.push_back(dim_);
    sizes_.push_back(be.irrep(a).dim * f_.module(a).dim);
    dim_ += sizes_.back();
  }
  pairs_.assign(n, std::vector<PairData>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (f_.module(a).dim == 0 || f_.module(b).dim == 0) continue;
      PairData& pd = pairs_[a][b];
      std::vector<int> seen(n, 0);
      for (const auto& part : be.fusion(a, b)) {
        const int k = seen[part.label]++;
        if (f_.module(part.label).dim == 0) continue;
        pd.labels.push_back(part.label);
        pd.w.push_back(part.w);
        pd.phi.push_back(f_.phi_basis(a, b, part.label, k));
      }
    }
  for (int a = 0; a < n; ++a) {
    if (f_.module(a).dim == 0) {
      bullet_.push_back(CMat(f_.module(be.irrep(a).conj).dim, 0));
    } else {
      bullet_.push_back(bullet_matrix(f_, a, tol_));
    }
  }
}

CMat ReconstructedAlgebra::component(const CVec& x, int a) const {
  return unflatten_rowmajor(x.segment(offsets_[a], sizes_[a]), backend().irrep(a).dim,
                            f_.module(a).dim);
}

CVec ReconstructedAlgebra::from_component(int a, const CMat& c) const {
  CVec x = zero();
  x.segment(offsets_[a], sizes_[a]) = flatten_rowmajor(c);
  return x;
}

CVec ReconstructedAlgebra::basis(int k) const {
  CVec x = zero();
  x(k) = 1.0;
  return x;
}

CVec ReconstructedAlgebra::random(Rng& rng) const { return rng.complex_vector(dim_); }

CVec ReconstructedAlgebra::embed(const CVec& a) const {
  return from_component(backend().trivial(), CMat(a.transpose()));
}

CVec ReconstructedAlgebra::pi(const FObject& x, const CMat& z) const {
  if (z.rows() != x.rep.dim() || z.cols() != x.dim) throw DimensionError("pi: element has the wrong shape");
  CVec out = zero();
  for (std::size_t i = 0; i < x.parts.size(); ++i) {
    const int a = x.parts[i].label, d = f_.module(a).dim;
    if (d == 0) continue;
    CMat c = x.parts[i].w.transpose() * z.middleCols(x.offsets[i], d);
    out.segment(offsets_[a], sizes_[a]) += flatten_rowmajor(c);
  }
  return out;
}

CMat ReconstructedAlgebra::free_product(const FObject& u, const CMat& z, const FObject& v, const CMat& t,
                                        const FObject& uv) const {
  CMat f2 = functor_tensor(f_, u, v, uv);
  return (f2 * linalg::kron(CMat(z.transpose()), CMat(t.transpose()))).transpose();
}

CVec ReconstructedAlgebra::multiply(const CVec& x, const CVec& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionError("multiply: element has the wrong size");
  const int n = backend().num_irreps();
  CVec out = zero();
  for (int a = 0; a < n; ++a) {
    if (sizes_[a] == 0 || linalg::max_abs(CVec(x.segment(offsets_[a], sizes_[a]))) == 0.0) continue;
    CMat xa = component(x, a);
    for (int b = 0; b < n; ++b) {
      if (sizes_[b] == 0 || linalg::max_abs(CVec(y.segment(offsets_[b], sizes_[b]))) == 0.0) continue;
      CMat k = linalg::kron(CMat(xa.transpose()), CMat(component(y, b).transpose()));
      const PairData& pd = pairs_[a][b];
      for (std::size_t m = 0; m < pd.labels.size(); ++m) {
        const int c = pd.labels[m];
        CMat contrib = (pd.phi[m] * k * pd.w[m]).transpose();
        out.segment(offsets_[c], sizes_[c]) += flatten_rowmajor(contrib);
      }
    }
  }
  return out;
}

CVec ReconstructedAlgebra::star(const CVec& x) const {
  const Backend& be = backend();
  CVec out = zero();
  for (int a = 0; a < be.num_irreps(); ++a) {
    if (sizes_[a] == 0) continue;
    const int c = be.irrep(a).conj;
    CMat r = unflatten_rowmajor(be.conjugate(a).r, be.irrep(c).dim, be.irrep(a).dim);
    CMat y = (r * component(x, a) * bullet_[a].transpose()).conjugate();
    out.segment(offsets_[c], sizes_[c]) += flatten_rowmajor(y);
  }
  return out;
}

CVec ReconstructedAlgebra::expectation(const CVec& x) const {
  const int e = backend().trivial();
  return x.segment(offsets_[e], sizes_[e]);
}

CVec ReconstructedAlgebra::act(const CVec& x, const CVec& omega) const {
  const Backend& be = backend();
  CVec out = zero();
  for (int a = 0; a < be.num_irreps(); ++a) {
    if (sizes_[a] == 0) continue;
    CMat p = be.evaluate(be.rep(a), omega);
    out.segment(offsets_[a], sizes_[a]) = flatten_rowmajor(p.transpose() * component(x, a));
  }
  return out;
}

CMat ReconstructedAlgebra::act_matrix(const CVec& omega) const {
  CMat m(dim_, dim_);
  for (int k = 0; k < dim_; ++k) m.col(k) = act(basis(k), omega);
  return m;
}

const Correspondence& ReconstructedAlgebra::regular_module() const {
  if (regular_) return *regular_;
  const FdCStarAlgebra& a = f_.base;
  Correspondence m;
  m.algebra = a;
  m.dim = dim_;
  for (int k = 0; k < a.dim(); ++k) {
    CVec ak = embed(a.basis(k));
    CMat r(dim_, dim_), l(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
      r.col(j) = multiply(basis(j), ak);
      l.col(j) = multiply(ak, basis(j));
    }
    m.right.push_back(r);
    m.left.push_back(l);
  }
  m.inner.assign(dim_, std::vector<CVec>(dim_));
  std::vector<CVec> stars;
  for (int i = 0; i < dim_; ++i) stars.push_back(star(basis(i)));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m.inner[i][j] = expectation(multiply(stars[i], basis(j)));
  regular_ = std::move(m);
  return *regular_;
}

CMat ReconstructedAlgebra::left_mult(const CVec& x) const {
  CMat m(dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.col(j) = multiply(x, basis(j));
  return m;
}

double ReconstructedAlgebra::regular_norm(const CVec& x) const {
  const Correspondence& m = regular_module();
  return operator_norm(m, m, left_mult(x), tol_.gram_cutoff);
}

std::vector<CMat> ReconstructedAlgebra::structure_constants() const {
  std::vector<CMat> c(dim_, CMat::Zero(dim_, dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      CVec p = multiply(basis(i), basis(j));
      for (int k = 0; k < dim_; ++k) c[k](i, j) = p(k);
    }
  return c;
}

// ---------------------------------------------------------------------------

Report check_reconstruction(const ReconstructedAlgebra& b, const Tolerance& tol, std::uint64_t seed,
                            int samples) {
  Report rep;
  Rng rng(seed);
  const Backend& be = b.backend();
  const FdCStarAlgebra& a = b.base();
  const double tau = tol.tau;
  const int n = be.num_irreps();
  auto rel = [](double r, double scale) { return scale > 0 ? r / scale : r; };

  std::vector<CVec> xs;
  std::vector<double> norms;
  for (int s = 0; s < samples; ++s) {
    xs.push_back(b.random(rng));
    norms.push_back(b.regular_norm(xs.back()));
  }
  auto pick = [&](int s, int k) -> std::size_t { return static_cast<std::size_t>((s + k * 37) % samples); };

  double assoc = 0.0, inv = 0.0, invol = 0.0, cstar = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CVec &x = xs[pick(s, 0)], &y = xs[pick(s, 1)], &z = xs[pick(s, 2)];
    double nx = norms[pick(s, 0)], ny = norms[pick(s, 1)], nz = norms[pick(s, 2)];
    CVec xy = b.multiply(x, y);
    assoc = std::max(assoc, rel(linalg::max_abs(CVec(b.multiply(xy, z) - b.multiply(x, b.multiply(y, z)))),
                                nx * ny * nz));
    inv = std::max(inv, rel(linalg::max_abs(CVec(b.star(xy) - b.multiply(b.star(y), b.star(x)))), nx * ny));
    invol = std::max(invol, rel(linalg::max_abs(CVec(b.star(b.star(x)) - x)), nx));
    double nxx = b.regular_norm(b.multiply(b.star(x), x));
    cstar = std::max(cstar, rel(std::abs(nxx - nx * nx), nx * nx));
  }
  rep.add("associativity", assoc, tau, std::to_string(samples) + " random triples");
  rep.add("star_antimultiplicative", inv, tau);
  rep.add("star_involutive", invol, tau);
  rep.add("cstar_identity", cstar, tau, "regular representation norm");

  // A sits inside as a *-subalgebra and the unit is the unit of A.
  double sub = 0.0, unit = 0.0;
  for (int s = 0; s < std::min(samples, 10); ++s) {
    CVec p = rng.complex_vector(a.dim()), q = rng.complex_vector(a.dim());
    sub = std::max(sub, linalg::max_abs(CVec(b.multiply(b.embed(p), b.embed(q)) - b.embed(a.multiply(p, q)))));
    sub = std::max(sub, linalg::max_abs(CVec(b.star(b.embed(p)) - b.embed(a.adjoint(p)))));
    const CVec& x = xs[static_cast<std::size_t>(s)];
    unit = std::max(unit, linalg::max_abs(CVec(b.multiply(b.unit(), x) - x)));
    unit = std::max(unit, linalg::max_abs(CVec(b.multiply(x, b.unit()) - x)));
  }
  rep.add("base_subalgebra", sub, tau);
  rep.add("unit", unit, tau);

  // Conditional expectation.
  double ebim = 0.0, cond3 = 0.0;
  for (int s = 0; s < std::min(samples, 20); ++s) {
    CVec p = rng.complex_vector(a.dim()), q = rng.complex_vector(a.dim());
    const CVec& x = xs[static_cast<std::size_t>(s)];
    CVec lhs = b.expectation(b.multiply(b.multiply(b.embed(p), x), b.embed(q)));
    CVec rhs = a.multiply(a.multiply(p, b.expectation(x)), q);
    ebim = std::max(ebim, linalg::max_abs(CVec(lhs - rhs)));
    const CVec& y = xs[pick(s, 1)];
    double ny = norms[pick(s, 1)];
    CVec xx = b.expectation(b.multiply(b.star(x), x));
    CVec yx = b.multiply(y, x);
    CVec xyyx = b.expectation(b.multiply(b.star(yx), yx));
    CVec diff = ny * ny * xx - xyyx;
    cond3 = std::max(cond3, rel(std::max(0.0, -a.min_eigenvalue(diff)), ny * ny * a.norm(xx)));
  }
  rep.add("expectation_bimodule", ebim, tau);
  rep.add("expectation_bounded", cond3, tau, "E(x^*a^*ax) <= |a|^2 E(x^*x)");
  const Correspondence& reg = b.regular_module();
  if (b.dim() > 0) {
    CMat fg = reg.faithful_gram();
    double minpos = linalg::min_eigenvalue_hermitian(fg);
    rep.add("expectation_positive", std::max(0.0, -minpos), tau);
    double minfaith = linalg::min_eigenvalue_hermitian(reg.trace_gram());
    rep.add_flag("expectation_faithful", minfaith > tau,
                 "smallest Gram eigenvalue " + std::to_string(minfaith));
  }

  // pi is a homomorphism and does not depend on the decomposition.
  FunctorData const& f = b.functor();
  double hom = 0.0, indep = 0.0;
  int triples = std::min(samples, n * n * n);
  for (int s = 0; s < triples; ++s) {
    const int t = (s * 7919) % (n * n * n);
    const int al = t / (n * n), bt = (t / n) % n, gm = t % n;
    FObject u = functor_object(f, be.tensor(be.rep(al), be.rep(bt)));
    FObject v = irreducible_object(f, gm);
    FObject uv = functor_object(f, be.tensor(u.rep, v.rep));
    if (u.dim == 0 || v.dim == 0) continue;
    CMat z = rng.complex_matrix(u.rep.dim(), u.dim), w = rng.complex_matrix(v.rep.dim(), v.dim);
    CVec lhs = b.pi(uv, b.free_product(u, z, v, w, uv));
    CVec rhs = b.multiply(b.pi(u, z), b.pi(v, w));
    hom = std::max(hom, rel(linalg::max_abs(CVec(lhs - rhs)), std::max(1.0, linalg::max_abs(rhs))));
    // Second decomposition: rotate each multiplicity space and reverse the order.
    FObject u2 = u;
    std::reverse(u2.parts.begin(), u2.parts.end());
    for (int lab = 0; lab < n; ++lab) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < u2.parts.size(); ++i)
        if (u2.parts[i].label == lab) idx.push_back(i);
      if (idx.size() < 2) continue;
      CMat q = rng.unitary(static_cast<Eigen::Index>(idx.size()));
      std::vector<CMat> ws;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        CMat acc = CMat::Zero(u2.parts[idx[0]].w.rows(), u2.parts[idx[0]].w.cols());
        for (std::size_t j = 0; j < idx.size(); ++j) acc += q(i, j) * u2.parts[idx[j]].w;
        ws.push_back(acc);
      }
      for (std::size_t i = 0; i < idx.size(); ++i) u2.parts[idx[i]].w = ws[i];
    }
    u2.offsets.clear();
    u2.dim = 0;
    for (const auto& p : u2.parts) {
      u2.offsets.push_back(u2.dim);
      u2.dim += f.module(p.label).dim;
    }
    CMat id = CMat::Identity(u.rep.dim(), u.rep.dim());
    CMat z2 = (functor_morphism(f, u, u2, id) * z.transpose()).transpose();
    indep = std::max(indep, linalg::max_abs(CVec(b.pi(u2, z2) - b.pi(u, z))));
  }
  rep.add("pi_homomorphism", hom, tau);
  rep.add("pi_decomposition_independent", indep, tau);

  // The coaction: module algebra, star compatibility, fixed points.
  const HopfAlgebra& h = be.hopf();
  std::vector<CMat> acts;
  for (int k = 0; k < h.dim; ++k) acts.push_back(b.act_matrix(h.basis(k)));
  double modalg = 0.0, starc = 0.0, action = 0.0;
  for (int s = 0; s < std::min(samples, 3); ++s) {
    const CVec &x = xs[pick(s, 0)], &y = xs[pick(s, 1)];
    std::vector<CVec> xa, ya;
    for (int k = 0; k < h.dim; ++k) {
      xa.push_back(acts[k] * x);
      ya.push_back(acts[k] * y);
    }
    CVec xy = b.multiply(x, y), xs_star = b.star(x);
    for (int k = 0; k < h.dim; ++k) {
      CVec rhs = b.zero();
      const CMat& cop = be.coproduct();
      for (int i = 0; i < h.dim; ++i)
        for (int j = 0; j < h.dim; ++j) {
          cplx c = cop(i * h.dim + j, k);
          if (c != cplx(0.0)) rhs += c * b.multiply(xa[i], ya[j]);
        }
      modalg = std::max(modalg, linalg::max_abs(CVec(acts[k] * xy - rhs)));
      CVec sw = h.adjoint(be.antipode().col(k));
      starc = std::max(starc, linalg::max_abs(CVec(b.star(xa[k]) - b.act(xs_star, sw))));
      for (int l = 0; l < h.dim; ++l) {
        CVec prod = h.multiply(h.basis(k), h.basis(l));
        action = std::max(action, linalg::max_abs(CVec(acts[l] * xa[k] - b.act(x, prod))));
      }
    }
  }
  rep.add("coaction_module_algebra", modalg, tau);
  rep.add("coaction_star", starc, tau);
  rep.add("coaction_action", action, tau);
  rep.add("coaction_unit", linalg::max_abs(CMat(b.act_matrix(h.unit) - CMat::Identity(b.dim(), b.dim()))), tau);
  CMat stacked(static_cast<Eigen::Index>(h.dim) * b.dim(), b.dim());
  for (int k = 0; k < h.dim; ++k)
    stacked.middleRows(static_cast<Eigen::Index>(k) * b.dim(), b.dim()) =
        acts[k] - h.counit(k) * CMat::Identity(b.dim(), b.dim());
  CMat fixed = linalg::null_space(stacked, tol.rank);
  rep.add_flag("fixed_points_equal_base", fixed.cols() == a.dim(),
               "fixed point dimension " + std::to_string(fixed.cols()) + ", dim A " +
                   std::to_string(a.dim()));
  std::string dims = "dim B_F = " + std::to_string(b.dim()) + "; components";
  for (int k = 0; k < n; ++k) dims += " " + be.irrep(k).label + ":" + std::to_string(b.component_dim(k));
  rep.add_flag("dimension", true, dims);
  return rep;
}

BuildResult build(const FunctorData& f, const Tolerance& tol, std::uint64_t seed, int samples) {
  BuildResult out;
  out.validation = validate_wutf(f, tol);
  if (!out.validation.ok())
    throw ConfigurationError("functor fails validation: " + failing(out.validation));
  out.algebra = std::make_shared<ReconstructedAlgebra>(f, tol);
  out.report = check_reconstruction(*out.algebra, tol, seed, samples);
  return out;
}

}  // namespace qdual

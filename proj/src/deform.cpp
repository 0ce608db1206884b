#include "qdual/deform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace qdual {

namespace {

// Left multiplication by x on U(G)^{(x) k}.
CMat left_tensor_mult(const HopfAlgebra& h, const CVec& x, int factors) {
  const Eigen::Index n = x.size();
  CMat m(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    CVec e = CVec::Zero(n);
    e(c) = 1.0;
    m.col(c) = h.multiply_tensor(x, e, factors);
  }
  return m;
}

cplx counit2(const HopfAlgebra& h, const CVec& omega) {
  cplx s = 0.0;
  for (int a = 0; a < h.dim; ++a)
    for (int b = 0; b < h.dim; ++b) s += omega(a * h.dim + b) * h.counit(a) * h.counit(b);
  return s;
}

}  // namespace

CocycleData CocycleData::from_values(const Backend& be, const CVec& omega) {
  const HopfAlgebra& h = be.hopf();
  if (omega.size() != static_cast<Eigen::Index>(h.dim) * h.dim)
    throw DimensionError("cocycle has the wrong number of coefficients");
  Eigen::FullPivLU<CMat> lu(left_tensor_mult(h, omega, 2));
  if (!lu.isInvertible()) throw ConfigurationError("cocycle is not invertible");
  CocycleData c;
  c.kind = be.kind();
  c.original = omega;
  c.phase = counit2(h, omega);
  if (std::abs(c.phase) < 1e-12) throw ConfigurationError("cocycle has vanishing counit and cannot be normalized");
  c.values = omega / c.phase;
  return c;
}

CocycleData CocycleData::trivial(const Backend& be) { return from_values(be, be.hopf().one_tensor(2)); }

CocycleData CocycleData::bicharacter(const Backend& be, int n) {
  if (be.kind() != BackendKind::DualGroup) throw ConfigurationError("bicharacter cocycles need a dual-group backend");
  const GroupPresentation& g = be.group();
  if (g.size() != n * n) throw DimensionError("bicharacter: group is not Z_n x Z_n");
  std::vector<std::pair<int, int>> coords;
  for (const auto& label : g.elements) {
    int a = 0, b = 0;
    if (std::sscanf(label.c_str(), "(%d,%d)", &a, &b) != 2)
      throw ConfigurationError("bicharacter: element label " + label + " is not of the form (a,b)");
    coords.push_back({a, b});
  }
  CVec omega(static_cast<Eigen::Index>(g.size()) * g.size());
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y) {
      const double ang = 2.0 * std::numbers::pi * coords[x].second * coords[y].first / n;
      omega(x * g.size() + y) = std::polar(1.0, ang);
    }
  return from_values(be, omega);
}

Report check_cocycle(const Backend& be, const CocycleData& c, const Tolerance& tol) {
  Report rep;
  const HopfAlgebra& h = be.hopf();
  const CVec& om = c.values;
  const CVec one2 = h.one_tensor(2);
  CVec st = h.adjoint_tensor(om, 2);
  double uni = std::max(linalg::max_abs(CVec(h.multiply_tensor(st, om, 2) - one2)),
                        linalg::max_abs(CVec(h.multiply_tensor(om, st, 2) - one2)));
  rep.add("unitary", uni, tol.tau);

  CVec lhs = h.multiply_tensor(linalg::kron(om, h.unit), h.coproduct_on_leg(om, 2, 0), 3);
  CVec rhs = h.multiply_tensor(linalg::kron(h.unit, om), h.coproduct_on_leg(om, 2, 1), 3);
  CVec diff = lhs - rhs;
  Eigen::Index worst = 0;
  double res = diff.size() ? diff.cwiseAbs().maxCoeff(&worst) : 0.0;
  const auto& el = be.group().elements;
  const Eigen::Index n = h.dim;
  std::string detail = "worst triple (" + el[worst / (n * n)] + ", " + el[(worst / n) % n] + ", " + el[worst % n] + ")";
  rep.add("cocycle_identity", res, tol.tau, detail);

  double cu = 0.0;
  for (int b = 0; b < h.dim; ++b) {
    cplx left = 0.0, right = 0.0;
    for (int a = 0; a < h.dim; ++a) {
      left += h.counit(a) * om(a * h.dim + b);
      right += om(b * h.dim + a) * h.counit(a);
    }
    cu = std::max({cu, std::abs(left - h.unit(b)), std::abs(right - h.unit(b))});
  }
  std::string ph = "normalized by phase (" + std::to_string(c.phase.real()) + ", " + std::to_string(c.phase.imag()) + ")";
  rep.add("counital", cu, tol.tau, ph);
  return rep;
}

UElement u_element(const Backend& be, const CocycleData& c, const Tolerance& tol) {
  UElement out;
  const HopfAlgebra& h = be.hopf();
  const CVec& om = c.values;
  CVec u = CVec::Zero(h.dim), inv1 = CVec::Zero(h.dim);
  CVec st = h.adjoint_tensor(om, 2);
  for (int a = 0; a < h.dim; ++a)
    for (int b = 0; b < h.dim; ++b) {
      const cplx w = om(a * h.dim + b), ws = st(a * h.dim + b);
      if (w != cplx(0.0)) u += w * h.multiply(h.basis(a), h.antipode.col(b));
      if (ws != cplx(0.0)) inv1 += ws * h.multiply(h.antipode.col(a), h.basis(b));
    }
  CVec inv2 = h.antipode * h.adjoint(u);
  out.value = u;
  out.inverse = inv2;
  out.report.add("u_times_inverse",
                 std::max(linalg::max_abs(CVec(h.multiply(u, inv2) - h.unit)),
                          linalg::max_abs(CVec(h.multiply(inv2, u) - h.unit))),
                 tol.tau, "u^{-1} = S(u^*)");
  out.report.add("inverse_formulas_agree", linalg::max_abs(CVec(inv1 - inv2)), tol.tau,
                 "m(S (x) 1)(omega^*) = S(u^*)");
  double eu = 0.0;
  for (int a = 0; a < be.num_irreps(); ++a) {
    const int ab = be.irrep(a).conj;
    const CVec& r = be.conjugate(a).r;
    CMat om_ab = be.evaluate2(be.rep(ab), be.rep(a), om);
    CMat u_ab = linalg::kron(be.evaluate(be.rep(ab), u), CMat::Identity(be.irrep(a).dim, be.irrep(a).dim));
    eu = std::max(eu, linalg::max_abs(CVec(om_ab * r - u_ab * r)));
  }
  out.report.add("omega_R_equals_u_R", eu, tol.tau, "on every irreducible");
  return out;
}

DeformedAlgebra::DeformedAlgebra(ActionData act, const CocycleData& omega, const Tolerance& tol)
    : act_(std::move(act)), omega_(omega.values) {
  if (omega.kind != act_.backend->kind()) throw ConfigurationError("cocycle kind does not match the backend");
  twisted_ = std::make_shared<const Backend>(Backend::twisted(*act_.backend, omega_, tol));
  u_ = u_element(*act_.backend, omega, tol).value;
}

CVec DeformedAlgebra::multiply(const CVec& x, const CVec& y) const {
  const FdCStarAlgebra& b = act_.algebra;
  const int n = act_.backend->hopf().dim;
  CVec out = b.zero();
  for (int a = 0; a < n; ++a) {
    CVec xa;
    bool have = false;
    for (int c = 0; c < n; ++c) {
      const cplx w = omega_(a * n + c);
      if (w == cplx(0.0)) continue;
      if (!have) {
        xa = act_.module_maps[a] * x;
        have = true;
      }
      out += w * b.multiply(xa, act_.module_maps[c] * y);
    }
  }
  return out;
}

CVec DeformedAlgebra::star(const CVec& x) const {
  return act_.act(act_.algebra.adjoint(x), act_.backend->hopf().adjoint(u_));
}

CMat DeformedAlgebra::left_mult(const CVec& x) const {
  const int d = dim();
  CMat m(d, d);
  for (int k = 0; k < d; ++k) m.col(k) = multiply(x, act_.algebra.basis(k));
  return m;
}

DeformResult deform_action(const ActionData& act, const CocycleData& omega, const Tolerance& tol, std::uint64_t seed,
                           int samples) {
  DeformResult out;
  out.report.append(validate_action(act, tol), "action.");
  out.report.append(check_cocycle(*act.backend, omega, tol), "cocycle.");
  out.algebra = std::make_shared<DeformedAlgebra>(act, omega, tol);
  const DeformedAlgebra& d = *out.algebra;
  const FdCStarAlgebra& b = act.algebra;
  const int n = b.dim();
  Rng rng(seed);
  double assoc = 0.0, unit = 0.0, inv = 0.0, anti = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVec x = rng.complex_vector(n), y = rng.complex_vector(n), z = rng.complex_vector(n);
    assoc = std::max(assoc, linalg::max_abs(CVec(d.multiply(d.multiply(x, y), z) - d.multiply(x, d.multiply(y, z)))));
    unit = std::max({unit, linalg::max_abs(CVec(d.multiply(d.unit(), x) - x)),
                     linalg::max_abs(CVec(d.multiply(x, d.unit()) - x))});
    inv = std::max(inv, linalg::max_abs(CVec(d.star(d.star(x)) - x)));
    anti = std::max(anti, linalg::max_abs(CVec(d.star(d.multiply(x, y)) - d.multiply(d.star(y), d.star(x)))));
  }
  out.report.add("associative", assoc, tol.tau);
  out.report.add("unit", unit, tol.tau);
  out.report.add("star_involutive", inv, tol.tau);
  out.report.add("star_antimultiplicative", anti, tol.tau);

  // The same maps as a right module over the twisted dual.
  const Backend& tw = *d.twisted_backend();
  const HopfAlgebra& h = tw.hopf();
  double modalg = 0.0, starc = 0.0, one = 0.0;
  for (int s = 0; s < std::max(1, samples / 5); ++s) {
    CVec x = rng.complex_vector(n), y = rng.complex_vector(n);
    CVec xy = d.multiply(x, y);
    for (int w = 0; w < h.dim; ++w) {
      CVec rhs = b.zero();
      for (int i = 0; i < h.dim; ++i)
        for (int j = 0; j < h.dim; ++j) {
          const cplx c = tw.coproduct()(i * h.dim + j, w);
          if (std::abs(c) > 1e-15) rhs += c * d.multiply(act.module_maps[i] * x, act.module_maps[j] * y);
        }
      modalg = std::max(modalg, linalg::max_abs(CVec(act.module_maps[w] * xy - rhs)));
      CVec sw = h.adjoint(tw.antipode().col(w));
      starc = std::max(starc, linalg::max_abs(CVec(d.star(act.module_maps[w] * x) - d.act(d.star(x), sw))));
    }
  }
  for (int w = 0; w < h.dim; ++w)
    one = std::max(one, linalg::max_abs(CVec(act.module_maps[w] * d.unit() - h.counit(w) * d.unit())));
  out.report.add("twisted_action_multiplicative", modalg, tol.tau);
  out.report.add("twisted_action_star_compatible", starc, tol.tau);
  out.report.add("twisted_action_unit", one, tol.tau);

  FixedAlgebra fa = fixed_algebra(act, tol, seed);
  double fixed = 0.0;
  for (int i = 0; i < fa.algebra.dim(); ++i) {
    const CVec ai = fa.embedding.col(i);
    fixed = std::max(fixed, linalg::max_abs(CVec(d.star(ai) - b.adjoint(ai))));
    for (int j = 0; j < fa.algebra.dim(); ++j) {
      const CVec aj = fa.embedding.col(j);
      fixed = std::max(fixed, linalg::max_abs(CVec(d.multiply(ai, aj) - b.multiply(ai, aj))));
    }
  }
  out.report.add("fixed_algebra_unchanged", fixed, tol.tau);

  // tau(E(x^dagger * y)) is a faithful positive form.
  const HopfAlgebra& hb = act.backend->hopf();
  CMat e = CMat::Zero(n, n);
  for (int k = 0; k < hb.dim; ++k) e += hb.integral(k) * act.module_maps[k];
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = b.trace(e * d.multiply(d.star(b.basis(i)), b.basis(j)));
  out.report.add("expectation_form_hermitian", linalg::max_abs(CMat(g - g.adjoint())), tol.tau);
  const double mn = linalg::min_eigenvalue_hermitian(g);
  out.report.add_flag("expectation_form_positive", mn > tol.tau, "smallest eigenvalue " + std::to_string(mn));
  return out;
}

int center_dimension(const DeformedAlgebra& b, const Tolerance& tol) {
  const int n = b.dim();
  CMat sys(static_cast<Eigen::Index>(n) * n, n);
  for (int k = 0; k < n; ++k) {
    const CVec ek = b.action().algebra.basis(k);
    CMat c(n, n);
    for (int j = 0; j < n; ++j) {
      const CVec ej = b.action().algebra.basis(j);
      c.col(j) = b.multiply(ej, ek) - b.multiply(ek, ej);
    }
    sys.middleRows(static_cast<Eigen::Index>(k) * n, n) = c;
  }
  return static_cast<int>(linalg::null_space(sys, tol.rank).cols());
}

FunctorData deform_functor(const FunctorData& f, const CocycleData& omega, const Tolerance& tol) {
  const Backend& be = *f.backend;
  if (omega.kind != be.kind()) throw ConfigurationError("cocycle kind does not match the backend");
  auto tw = std::make_shared<const Backend>(Backend::twisted(be, omega.values, tol));
  FunctorData out;
  out.backend = tw;
  out.base = f.base;
  out.modules = f.modules;
  const int n = be.num_irreps();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (f.module(a).dim == 0 || f.module(b).dim == 0) continue;
      CMat om = be.evaluate2(be.rep(a), be.rep(b), omega.values);
      for (int c = 0; c < n; ++c) {
        const auto old = be.fusion_for(a, b, c);
        const auto fresh = tw->fusion_for(a, b, c);
        if (fresh.empty()) continue;
        const double dc = be.irrep(c).dim;
        std::vector<CMat> phis;
        for (const auto& wt : fresh) {
          // omega^* w~ is an untwisted intertwiner; expand it on the old basis.
          CMat t = om.adjoint() * wt;
          CMat p = CMat::Zero(f.module(c).dim, static_cast<Eigen::Index>(f.module(a).dim) * f.module(b).dim);
          for (std::size_t j = 0; j < old.size(); ++j) {
            const cplx coef = (old[j].adjoint() * t).trace() / dc;
            if (p.size()) p += std::conj(coef) * f.phi_basis(a, b, c, static_cast<int>(j));
          }
          phis.push_back(p);
        }
        out.phi[{a, b, c}] = std::move(phis);
      }
    }
  return out;
}

Report deform_cross_test(const FunctorData& f, const CocycleData& omega, const Tolerance& tol, std::uint64_t seed,
                         int samples) {
  Report rep;
  FunctorData g = deform_functor(f, omega, tol);
  rep.append(validate_wutf(g, tol), "deformed_functor.");
  BuildResult bg;
  try {
    bg = build(g, tol, seed, samples);
  } catch (const ConfigurationError& ex) {
    rep.add_flag("build", false, ex.what());
    return rep;
  }
  rep.append(bg.report, "deformed_build.");
  ReconstructedAlgebra bf(f, tol);
  RealizedAction ra = realize(bf, tol, seed);
  DeformResult dr = deform_action(ra.action, omega, tol, seed, samples);
  rep.append(dr.report, "deformed_action.");
  const DeformedAlgebra& d = *dr.algebra;
  const ReconstructedAlgebra& b2 = *bg.algebra;
  const CMat& phi = ra.to_blocks;
  Rng rng(seed + 3);
  double mult = 0.0, star = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVec x = b2.random(rng), y = b2.random(rng);
    mult = std::max(mult, linalg::max_abs(CVec(phi * b2.multiply(x, y) - d.multiply(phi * x, phi * y))));
    star = std::max(star, linalg::max_abs(CVec(phi * b2.star(x) - d.star(phi * x))));
  }
  rep.add("isomorphism_multiplicative", mult, tol.tau);
  rep.add("isomorphism_star", star, tol.tau);
  const HopfAlgebra& h = f.backend->hopf();
  double eq = 0.0;
  for (int k = 0; k < h.dim; ++k)
    eq = std::max(eq, linalg::max_abs(CMat(phi * b2.act_matrix(h.basis(k)) - ra.action.module_maps[k] * phi)));
  rep.add("isomorphism_equivariant", eq, tol.tau);
  return rep;
}

}  // namespace qdual

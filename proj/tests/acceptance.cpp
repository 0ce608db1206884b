// End-to-end acceptance suite: one PASS/FAIL line per criterion.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "corpus.hpp"
#include "qdual/cli.hpp"
#include "support.hpp"

using namespace qdual;
using namespace qdual::testing;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& ex) {
    o = {false, std::string("exception: ") + ex.what()};
  }
  if (!o.passed) ++failures;
  std::printf("[%s] %2d %s: %s\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string first_failure(const Report& r) {
  for (const auto& c : r.checks)
    if (!c.passed) return c.name + " = " + sci(c.residual);
  return {};
}

const std::vector<std::string> kActions = {
    "z2_trivial_c2.action.json", "s3_trivial_c.action.json",      "z2_swap.action.json",
    "s3_translation.action.json", "m3_clock_shift.action.json",    "m2_inner_z2.action.json",
    "m3_permutation_s3.action.json", "z2xz2_group_algebra.action.json"};

const std::vector<std::string> kFunctors = {"s3_spectral.functor.json", "z2_nonfull.functor.json",
                                            "clock_shift.graded.json", "z2xz2_group_algebra.graded.json"};

GradedBundleData zn_squared_group_algebra(int n) {
  return trivial_bundle(product_group(cyclic_group(n), cyclic_group(n)));
}

// Omega = sum c(chi, psi) p_chi (x) p_psi in C[Z2 x Z2] (x) C[Z2 x Z2], with p_chi the
// minimal projections and c the bicharacter of the dual group.
CVec finite_klein_cocycle() {
  auto chi = [](int s, int g) { return ((s / 2) * (g / 2) + (s % 2) * (g % 2)) % 2 ? -1.0 : 1.0; };
  CVec om = CVec::Zero(16);
  for (int g = 0; g < 4; ++g)
    for (int h = 0; h < 4; ++h)
      for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
          const double c = ((s % 2) * (t / 2)) % 2 ? -1.0 : 1.0;
          om(g * 4 + h) += c * chi(s, g) * chi(t, h) / 16.0;
        }
  return om;
}

}  // namespace

int main() {
  const double tau = 1e-9;

  criterion(1, "conjugate equations and quantum dimensions", [&] {
    double worst = 0.0;
    int count = 0;
    for (const std::string name : {"S3", "Z4", "Z2xZ2", "dual:S3", "dual:Z4", "dual:Z2xZ2"}) {
      Backend be = builtin_backend(name);
      for (int a = 0; a < be.num_irreps(); ++a) {
        const int d = be.irrep(a).dim, dc = be.irrep(be.irrep(a).conj).dim;
        // Kac type: the quantum dimension is the ordinary dimension.
        const double dq = d;
        ConjugateResiduals r = conjugate_residuals(be.conjugate(a), d, dc, dq);
        const double norm_r = std::abs(be.conjugate(a).r.squaredNorm() - dq);
        const double norm_rb = std::abs(be.conjugate(a).rbar.squaredNorm() - dq);
        worst = std::max({worst, r.first, r.second, norm_r, norm_rb, std::abs(quantum_dim(be, a) - dq)});
        ++count;
      }
    }
    return Outcome{worst < tau, std::to_string(count) + " irreps, max residual " + sci(worst)};
  });

  criterion(2, "Peter-Weyl count for S3 translation on C(S3)", [&] {
    ActionData act = load_action("s3_translation.action.json");
    const Backend& be = *act.backend;
    const auto autos = act.automorphisms();
    int total = 0;
    bool per_irrep = true;
    std::string dims;
    for (int a = 0; a < be.num_irreps(); ++a) {
      // multiplicity from characters: the permutation character counts fixed points
      cplx m = 0.0;
      for (int g = 0; g < 6; ++g) m += std::conj(be.rep(a).pi[g].trace()) * autos[g].trace();
      const int mult = static_cast<int>(std::lround(m.real() / 6.0));
      const int d = be.irrep(a).dim;
      const int got = static_cast<int>(spectral_subspace(act, a, {}).cols());
      per_irrep = per_irrep && got == d && got == mult;
      total += d * got;
      dims += (a ? "," : "") + std::to_string(got);
    }
    return Outcome{per_irrep && total == 6, "dims (" + dims + "), sum d*dim = " + std::to_string(total)};
  });

  criterion(3, "round trip action -> functor -> algebra on the action corpus", [&] {
    double worst = 0.0;
    std::string bad;
    for (const auto& name : {"z2_trivial_c2.action.json", "s3_trivial_c.action.json", "z2_swap.action.json",
                             "s3_translation.action.json", "m3_clock_shift.action.json", "m2_inner_z2.action.json"}) {
      ActionData act = load_action(name);
      IsomorphismCertificate c = roundtrip_check(act);
      // independent: the certificate intertwines the product of B_F with the plain product of B
      ReconstructedAlgebra bf(spectral_functor(act).functor);
      Rng rng(7);
      double mult = 0.0, star = 0.0;
      for (int s = 0; s < 20; ++s) {
        CVec x = bf.random(rng), y = bf.random(rng);
        mult = std::max(mult, linalg::max_abs(CVec(c.map * bf.multiply(x, y) -
                                                    act.algebra.multiply(c.map * x, c.map * y))));
        star = std::max(star, linalg::max_abs(CVec(c.map * bf.star(x) - act.algebra.adjoint(c.map * x))));
      }
      const bool square = c.map.rows() == c.map.cols() && Eigen::FullPivLU<CMat>(c.map).rank() == c.map.rows();
      worst = std::max({worst, c.report.max_residual(), mult, star});
      if (!c.report.ok() || !square || mult > tau || star > tau)
        bad += std::string(" ") + name + (c.report.ok() ? "" : "(" + first_failure(c.report) + ")");
    }
    return Outcome{bad.empty(), "6 actions, max residual " + sci(worst) + bad};
  });

  criterion(4, "functor -> algebra -> spectral functor is naturally isomorphic", [&] {
    double worst = 0.0;
    std::string bad;
    for (const auto& name : kFunctors) {
      NaturalIsomorphism n = functor_roundtrip(load_functor(name));
      worst = std::max(worst, n.report.max_residual());
      if (!n.report.ok()) bad += " " + name + "(" + first_failure(n.report) + ")";
    }
    return Outcome{bad.empty() && worst < tau, std::to_string(kFunctors.size()) + " functors, max residual " + sci(worst) + bad};
  });

  criterion(5, "axiom (v) witness on the non-full functor", [&] {
    FunctorData f = load_functor("z2_nonfull.functor.json");
    Report clean = validate_wutf(f);
    // Mutation: M_sign = C with the multiplication M_sign (x) M_sign -> M_triv injected as 0.
    FunctorData g = f;
    g.modules[1] = Correspondence::identity(g.base);
    g.phi[{0, 1, 1}] = {CMat::Ones(1, 1)};
    g.phi[{1, 0, 1}] = {CMat::Ones(1, 1)};
    g.phi[{1, 1, 0}] = {CMat::Zero(1, 1)};
    Report mutated = validate_wutf(g);
    double v = 0.0;
    bool v_failed = false;
    for (const auto& c : mutated.checks)
      if (c.name.rfind("axiom_v", 0) == 0 && !c.passed) {
        v_failed = true;
        v = std::max(v, c.residual);
      }
    return Outcome{clean.ok() && v_failed && v > 1e-3,
                   std::string("clean ") + (clean.ok() ? "passes" : "fails") + ", mutated axiom (v) residual " + sci(v)};
  });

  criterion(6, "clock/shift Z3 bundle reconstructs M3", [&] {
    GradedBundleData g = load_graded("clock_shift.graded.json");
    FunctorData f = from_graded(g);
    Report v = validate_wutf(f);
    ReconstructedAlgebra b(f);
    // explicit map: basis vector k of component gamma -> the matrix unit it was built from
    std::vector<std::vector<std::pair<int, int>>> units(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) units[((i - j) % 3 + 3) % 3].push_back({i, j});
    std::vector<CMat> image(static_cast<std::size_t>(b.dim()));
    for (int gam = 0; gam < 3; ++gam)
      for (std::size_t k = 0; k < units[gam].size(); ++k) {
        CMat row = CMat::Zero(1, static_cast<Eigen::Index>(units[gam].size()));
        row(0, static_cast<Eigen::Index>(k)) = 1.0;
        CVec x = b.from_component(gam, row);
        Eigen::Index idx;
        x.cwiseAbs().maxCoeff(&idx);
        CMat e = CMat::Zero(3, 3);
        e(units[gam][k].first, units[gam][k].second) = 1.0;
        image[static_cast<std::size_t>(idx)] = e;
      }
    auto phi = [&](const CVec& x) {
      CMat m = CMat::Zero(3, 3);
      for (int k = 0; k < b.dim(); ++k) m += x(k) * image[static_cast<std::size_t>(k)];
      return m;
    };
    double res = 0.0;
    for (int p = 0; p < b.dim(); ++p) {
      res = std::max(res, linalg::max_abs(CMat(phi(b.star(b.basis(p))) - phi(b.basis(p)).adjoint())));
      for (int q = 0; q < b.dim(); ++q)
        res = std::max(res, linalg::max_abs(CMat(phi(b.multiply(b.basis(p), b.basis(q))) -
                                                  phi(b.basis(p)) * phi(b.basis(q)))));
    }
    // simplicity: the center is one-dimensional, so the only ideals are 0 and B
    CMat comm(static_cast<Eigen::Index>(b.dim()) * b.dim(), b.dim());
    for (int k = 0; k < b.dim(); ++k)
      for (int j = 0; j < b.dim(); ++j)
        comm.block(static_cast<Eigen::Index>(k) * b.dim(), j, b.dim(), 1) =
            b.multiply(b.basis(j), b.basis(k)) - b.multiply(b.basis(k), b.basis(j));
    Eigen::JacobiSVD<CMat> svd(comm);
    int center = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) < 1e-8) ++center;
    const bool ok = v.ok() && b.dim() == 9 && res < tau && center == 1;
    return Outcome{ok, "dim " + std::to_string(b.dim()) + ", isomorphism residual " + sci(res) + ", center dim " +
                           std::to_string(center)};
  });

  criterion(7, "C*-identity on 100 random elements of each built algebra", [&] {
    double worst = 0.0;
    int algebras = 0;
    std::vector<FunctorData> fs;
    for (const auto& name : kFunctors) fs.push_back(load_functor(name));
    for (const auto& name : kActions) fs.push_back(spectral_functor(load_action(name)).functor);
    for (const auto& f : fs) {
      BuildResult br = build(f);
      const ReconstructedAlgebra& b = *br.algebra;
      Rng rng(11);
      for (int s = 0; s < 100; ++s) {
        CVec x = b.random(rng);
        const double n = b.regular_norm(x);
        if (n == 0.0) continue;
        worst = std::max(worst, std::abs(b.regular_norm(b.multiply(b.star(x), x)) - n * n) / (n * n));
      }
      ++algebras;
    }
    return Outcome{worst < 1e-8, std::to_string(algebras) + " algebras, max relative defect " + sci(worst)};
  });

  criterion(8, "Z2xZ2 bicharacter deformation is M2 via the Pauli matrices", [&] {
    ActionData act = load_action("z2xz2_group_algebra.action.json");
    CocycleData om = load_cocycle("z2xz2_bicharacter.cocycle.json", *act.backend);
    DeformResult d = deform_action(act, om);
    // lambda_g as a function on the dual group: chi -> chi(g)
    CMat basis(4, 4);
    for (int g = 0; g < 4; ++g)
      for (int k = 0; k < 4; ++k) basis(k, g) = (((k / 2) * (g / 2) + (k % 2) * (g % 2)) % 2) ? -1.0 : 1.0;
    Eigen::FullPivLU<CMat> lu(basis);
    CMat x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    std::vector<CMat> w;
    for (int g = 0; g < 4; ++g) {
      const auto& label = act.backend->group().elements[g];
      CMat m = CMat::Identity(2, 2);
      if (label[1] == '1') m = m * x;
      if (label[3] == '1') m = m * z;
      w.push_back(m);
    }
    auto pauli = [&](const CVec& v) {
      CVec c = lu.solve(v);
      CMat m = CMat::Zero(2, 2);
      for (int g = 0; g < 4; ++g) m += c(g) * w[g];
      return m;
    };
    double res = 0.0;
    for (int g = 0; g < 4; ++g) {
      res = std::max(res, linalg::max_abs(CMat(pauli(d.algebra->star(basis.col(g))) - w[g].adjoint())));
      for (int h = 0; h < 4; ++h)
        res = std::max(res, linalg::max_abs(CMat(pauli(d.algebra->multiply(basis.col(g), basis.col(h))) - w[g] * w[h])));
    }
    const int center = center_dimension(*d.algebra);
    // trivial cocycle: the deformed operations coincide with the original ones
    DeformResult d0 = deform_action(act, CocycleData::trivial(*act.backend));
    double ident = 0.0;
    for (int p = 0; p < 4; ++p) {
      const CVec e = act.algebra.basis(p);
      ident = std::max(ident, linalg::max_abs(CVec(d0.algebra->star(e) - act.algebra.adjoint(e))));
      for (int q = 0; q < 4; ++q) {
        const CVec f = act.algebra.basis(q);
        ident = std::max(ident, linalg::max_abs(CVec(d0.algebra->multiply(e, f) - act.algebra.multiply(e, f))));
      }
    }
    const bool ok = d.report.ok() && res < tau && center == 1 && ident < 1e-14;
    return Outcome{ok, "Pauli residual " + sci(res) + ", center dim " + std::to_string(center) +
                           ", trivial-cocycle defect " + sci(ident)};
  });

  criterion(9, "deformed functor rebuilds the deformed action", [&] {
    struct Pair {
      std::string label;
      FunctorData f;
      CVec omega;  // empty: use the named constructor below
      int bichar = 0;
    };
    std::vector<Pair> pairs;
    FunctorData klein = load_functor("z2xz2_group_algebra.graded.json");
    pairs.push_back({"Z2xZ2 bicharacter", klein, {}, 2});
    pairs.push_back({"Z2xZ2 trivial", klein, klein.backend->hopf().one_tensor(2), 0});
    FunctorData cs = load_functor("clock_shift.graded.json");
    pairs.push_back({"clock/shift trivial", cs, cs.backend->hopf().one_tensor(2), 0});
    pairs.push_back({"Z3xZ3 bicharacter", from_graded(zn_squared_group_algebra(3)), {}, 3});
    FunctorData ktr = spectral_functor(load_action("z2xz2_group_algebra.action.json")).functor;
    pairs.push_back({"Z2xZ2 spectral bicharacter", ktr, {}, 2});
    // finite Z2 x Z2 acting by translation on its function algebra, with a dual cocycle
    {
      auto be = std::make_shared<const Backend>(builtin_backend("Z2xZ2"));
      std::vector<CMat> autos;
      for (int x = 0; x < 4; ++x) {
        CMat p = CMat::Zero(4, 4);
        for (int h = 0; h < 4; ++h) p(be->group().mul[x][h], h) = 1.0;
        autos.push_back(p);
      }
      FunctorData tr =
          spectral_functor(ActionData::from_automorphisms(be, FdCStarAlgebra(std::vector<int>(4, 1)), autos)).functor;
      pairs.push_back({"finite Z2xZ2 translation", tr, finite_klein_cocycle(), 0});
    }
    double worst = 0.0;
    std::string bad;
    for (const auto& p : pairs) {
      CocycleData c = p.bichar ? CocycleData::bicharacter(*p.f.backend, p.bichar)
                               : CocycleData::from_values(*p.f.backend, p.omega);
      Report r;
      try {
        r = deform_cross_test(p.f, c);
      } catch (const std::exception& ex) {
        r.add_flag("exception", false, ex.what());
      }
      for (const auto& ch : r.checks)
        if (ch.name.rfind("isomorphism_", 0) == 0) worst = std::max(worst, ch.residual);
      if (!r.ok()) bad += " [" + p.label + ": " + first_failure(r) + "]";
    }
    return Outcome{bad.empty() && worst < tau, std::to_string(pairs.size()) + " pairs, max residual " + sci(worst) + bad};
  });

  criterion(10, "u-element: omega R = (u (x) 1) R and u^-1 = S(u^*)", [&] {
    double worst = 0.0, oracle = 0.0;
    std::string bad;
    auto run = [&](const std::string& label, const Backend& be, const CocycleData& c) {
      UElement u = u_element(be, c);
      worst = std::max(worst, u.report.max_residual());
      if (!u.report.ok()) bad += " " + label;
      if (be.kind() == BackendKind::DualGroup) {
        // on functions on the group: u(g) = omega(g, g^-1)
        const int n = be.group().size();
        for (int g = 0; g < n; ++g)
          oracle = std::max(oracle, std::abs(u.value(g) - c.values(g * n + be.group().inverse[g])));
      }
    };
    Backend k2 = builtin_backend("dual:Z2xZ2"), k3 = builtin_backend("dual:Z3xZ3");
    run("dual Z2xZ2", k2, CocycleData::bicharacter(k2, 2));
    run("dual Z3xZ3", k3, CocycleData::bicharacter(k3, 3));
    Backend kf = builtin_backend("Z2xZ2");
    run("finite Z2xZ2", kf, CocycleData::from_values(kf, finite_klein_cocycle()));
    Backend s3 = builtin_backend("S3"), ds3 = builtin_backend("dual:S3");
    run("S3 trivial", s3, CocycleData::trivial(s3));
    run("dual S3 trivial", ds3, CocycleData::trivial(ds3));
    return Outcome{bad.empty() && worst < tau && oracle < tau,
                   "5 cocycles, max residual " + sci(worst) + ", pointwise oracle " + sci(oracle) + bad};
  });

  criterion(11, "fullness of B and B (x) H_U, failure on a proper ideal", [&] {
    int full = 0, total = 0;
    double min_c = 1e300, dom_res = 0.0;
    for (const auto& name : kActions) {
      ActionData act = load_action(name);
      std::vector<EquivariantModule> mods = {EquivariantModule::regular(act)};
      for (int a = 0; a < act.backend->num_irreps(); ++a)
        mods.push_back(EquivariantModule::tensor_irrep(mods.front(), a));
      for (const auto& m : mods) {
        FullnessResult r = fullness_check(m);
        ++total;
        if (!r.full || !r.report.ok()) continue;
        ++full;
        // independent recomputation of sum <X_i, X_i> and of <Y,Y> >= c sum <X_i, X_i>
        const FdCStarAlgebra& b = m.algebra();
        CVec s = b.zero();
        for (const auto& [al, x] : r.vectors)
          for (int i = 0; i < m.backend().irrep(al).dim; ++i)
            s += m.inner_product(x.segment(i * m.dim, m.dim), x.segment(i * m.dim, m.dim));
        min_c = std::min(min_c, r.domination);
        dom_res = std::max(dom_res, -b.min_eigenvalue(CVec(r.gram - r.domination * s)));
      }
    }
    FullnessResult ideal = fullness_check(load_module("z2_trivial_c2_ideal.module.json"));
    const bool ok = full == total && min_c > 0 && dom_res < tau && !ideal.full;
    return Outcome{ok, std::to_string(full) + "/" + std::to_string(total) + " full, min c " + sci(min_c) +
                           ", ideal rank " + std::to_string(ideal.rank) + "/" + std::to_string(ideal.full_rank) +
                           (ideal.full ? " (unexpectedly full)" : " not full")};
  });

  criterion(12, "identical seeds give byte-identical reports", [&] {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "qdual_determinism";
    fs::remove_all(root);
    std::vector<cli::JobConfig> jobs;
    auto job = [&](std::string verb, std::vector<std::string> inputs, bool cross = false) {
      cli::JobConfig c;
      c.verb = std::move(verb);
      for (auto& i : inputs) c.inputs.push_back(fixture_path(i));
      c.cross_test = cross;
      jobs.push_back(c);
    };
    job("validate", {"s3_spectral.functor.json"});
    job("validate-graded", {"clock_shift.graded.json"});
    job("build", {"clock_shift.graded.json"});
    job("spectral", {"s3_translation.action.json"});
    job("roundtrip", {"z2_swap.action.json"});
    job("roundtrip", {"s3_spectral.functor.json"});
    job("module-functor", {"s3_translation_std.module.json"});
    job("fullness", {"z2_swap_sign.module.json"});
    job("cocycle-check", {"z2xz2_bicharacter.cocycle.json"});
    job("deform", {"z2xz2_group_algebra.action.json", "z2xz2_bicharacter.cocycle.json"});
    job("deform", {"z2xz2_group_algebra.graded.json", "z2xz2_bicharacter.cocycle.json"}, true);
    int identical = 0;
    std::string bad;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      std::string text[2];
      for (int run = 0; run < 2; ++run) {
        fs::create_directories(root / std::to_string(run));
        cli::JobConfig c = jobs[k];
        c.report = (root / std::to_string(run) / ("job" + std::to_string(k) + ".json")).string();
        std::ostringstream sink;
        cli::run(c, sink);
        std::ifstream in(c.report, std::ios::binary);
        text[run].assign(std::istreambuf_iterator<char>(in), {});
      }
      if (!text[0].empty() && text[0] == text[1])
        ++identical;
      else
        bad += " " + jobs[k].verb;
    }
    fs::remove_all(root);
    return Outcome{identical == static_cast<int>(jobs.size()),
                   std::to_string(identical) + "/" + std::to_string(jobs.size()) + " reports identical" + bad};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

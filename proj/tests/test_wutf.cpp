#include <doctest.h>

#include "corpus.hpp"
#include "support.hpp"

using namespace qdual;
using namespace qdual::testing;

namespace {

double residual(const Report& r, const std::string& name) {
  const Check* c = r.find(name);
  REQUIRE(c != nullptr);
  return c->residual;
}

bool passed(const Report& r, const std::string& name) {
  const Check* c = r.find(name);
  REQUIRE(c != nullptr);
  return c->passed;
}

// Z2 bundle over C + C: M_1 = C with a . x = a_1 x, x . a = x a_2.
// M2 over its diagonal, graded by parity of i - j: the odd fiber is spanned by E12, E21.
GradedBundleData checkerboard_bundle() {
  FdCStarAlgebra a({1, 1});
  GradedBundleData g;
  g.group = cyclic_group(2);
  g.base = a;
  Correspondence m;
  m.algebra = a;
  m.dim = 2;
  m.left = {CMat(CVec(unit_vec(2, 0)).asDiagonal()), CMat(CVec(unit_vec(2, 1)).asDiagonal())};
  m.right = {CMat(CVec(unit_vec(2, 1)).asDiagonal()), CMat(CVec(unit_vec(2, 0)).asDiagonal())};
  m.inner = {{unit_vec(2, 1), CVec::Zero(2)}, {CVec::Zero(2), unit_vec(2, 0)}};
  g.fibers = {Correspondence::identity(a), m};
  g.mult[{0, 0}] = CMat::Zero(2, 4);
  g.mult[{0, 0}](0, 0) = 1.0;
  g.mult[{0, 0}](1, 3) = 1.0;
  g.mult[{0, 1}] = CMat::Zero(2, 4);
  g.mult[{0, 1}](0, 0) = 1.0;
  g.mult[{0, 1}](1, 3) = 1.0;
  g.mult[{1, 0}] = CMat::Zero(2, 4);
  g.mult[{1, 0}](0, 1) = 1.0;
  g.mult[{1, 0}](1, 2) = 1.0;
  g.mult[{1, 1}] = CMat::Zero(2, 4);
  g.mult[{1, 1}](0, 1) = 1.0;
  g.mult[{1, 1}](1, 2) = 1.0;
  return g;
}

}  // namespace

TEST_CASE("spectral functor of Z2 translating C(Z2) validates") {
  ActionData act = load_action("z2_swap.action.json");
  Report r = validate_wutf(spectral_functor(act).functor);
  CHECK(r.ok());
}

TEST_CASE("zero modules are allowed") {
  FunctorData f = load_functor("z2_nonfull.functor.json");
  CHECK(f.module(1).dim == 0);
  CHECK(validate_wutf(f).ok());
}

TEST_CASE("perturbing one multiplication map breaks associativity") {
  FunctorData f = load_functor("clock_shift.graded.json");
  REQUIRE(validate_wutf(f).ok());
  CMat& p = f.phi.at({1, 1, 2}).front();
  p(0, 0) += 1e-3;
  Report r = validate_wutf(f);
  CHECK_FALSE(passed(r, "axiom_iv"));
  CHECK(residual(r, "axiom_iv") == doctest::Approx(1e-3).epsilon(0.01));
}

TEST_CASE("graded bundles") {
  SUBCASE("clock/shift grading of M3 over the diagonal") {
    GradedBundleData g = clock_shift_bundle();
    CHECK(validate_graded(g).ok());
    CHECK(validate_wutf(from_graded(g)).ok());
  }
  SUBCASE("only the unit fiber") {
    GradedBundleData g = trivial_bundle(cyclic_group(3));
    for (int x = 1; x < 3; ++x) g.fibers[x] = Correspondence::zero(g.base);
    for (auto& [key, m] : g.mult)
      m = CMat::Zero(g.fibers[g.group.mul[key.first][key.second]].dim, g.fibers[key.first].dim * g.fibers[key.second].dim);
    g.mult[{0, 0}] = CMat::Ones(1, 1);
    CHECK(validate_graded(g).ok());
    ReconstructedAlgebra b(from_graded(g));
    CHECK(b.dim() == 1);
  }
  SUBCASE("checkerboard grading of M2") {
    GradedBundleData g = checkerboard_bundle();
    CHECK(validate_graded(g).ok());
    FunctorData f = from_graded(g);
    CHECK(validate_wutf(f).ok());
    CHECK(ReconstructedAlgebra(f).dim() == 4);
  }
  SUBCASE("a fiber that is not its own conjugate") {
    GradedBundleData g = checkerboard_bundle();
    Correspondence& m = g.fibers[1];
    m.dim = 1;
    m.left = {CMat::Ones(1, 1), CMat::Zero(1, 1)};
    m.right = {CMat::Zero(1, 1), CMat::Ones(1, 1)};
    m.inner = {{unit_vec(2, 1)}};
    g.mult[{0, 1}] = CMat::Zero(1, 2);
    g.mult[{0, 1}](0, 0) = 1.0;
    g.mult[{1, 0}] = CMat::Zero(1, 2);
    g.mult[{1, 0}](0, 1) = 1.0;
    g.mult[{1, 1}] = CMat::Zero(2, 1);
    CHECK_FALSE(validate_graded(g).ok());
  }
  SUBCASE("swapping two multiplication maps breaks associativity") {
    GradedBundleData g = clock_shift_bundle();
    std::swap(g.mult.at({1, 1}), g.mult.at({2, 2}));
    std::swap(g.mult.at({1, 2}), g.mult.at({2, 1}));
    Report r = validate_graded(g);
    CHECK_FALSE(r.ok());
  }
}

TEST_CASE("the bullet of a graded functor") {
  GradedBundleData g = clock_shift_bundle();
  FunctorData f = from_graded(g);
  for (int a = 0; a < 3; ++a) {
    CHECK(check_bullet(f, a).ok());
    const int ai = g.group.inverse[a];
    const Correspondence& m = f.module(a);
    const Correspondence& mi = f.module(ai);
    for (int k = 0; k < m.dim; ++k) {
      CVec x = unit_vec(m.dim, k);
      CVec xb = bullet(f, a, x);
      for (int l = 0; l < mi.dim; ++l) {
        CVec lhs = mi.inner_product(xb, unit_vec(mi.dim, l));
        CVec rhs = g.mult_of(a, ai) * linalg::kron(x, unit_vec(mi.dim, l));
        CHECK(linalg::max_abs(CVec(lhs - rhs)) < 1e-9);
      }
      // conjugate-linear, trace preserving for rho = 1
      CVec xi = bullet(f, a, CVec(cplx(0, 1) * x));
      CHECK(linalg::max_abs(CVec(xi + cplx(0, 1) * xb)) < 1e-12);
      CHECK(std::abs(g.base.trace(mi.inner_product(xb, xb)) - g.base.trace(m.inner_product(x, x))) < 1e-9);
    }
  }
  CVec one = g.base.unit();
  CHECK(linalg::max_abs(CVec(bullet(f, 0, one) - one)) < 1e-12);
}

TEST_CASE("the bullet on a spectral functor with a two-dimensional irrep") {
  FunctorData f = load_functor("s3_spectral.functor.json");
  for (int a = 0; a < f.backend->num_irreps(); ++a) CHECK(check_bullet(f, a).ok());
}

TEST_CASE("functor data rejects missing tensors") {
  FunctorData f = load_functor("clock_shift.graded.json");
  f.phi.erase({1, 2, 0});
  CHECK_THROWS_AS(f.phi_basis(1, 2, 0, 0), IncompleteDataError);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "support.hpp"

using namespace qdual;
using namespace qdual::testing;

namespace {

std::shared_ptr<const Backend> dual(const std::string& g) {
  return std::make_shared<const Backend>(builtin_backend("dual:" + g));
}

// Omega(a, b) = exp(2 pi i a_2 b_1 / n) on Z_n x Z_n, element (a_1, a_2) stored as a_1 * n + a_2.
CVec bichar_oracle(int n) {
  CVec v(n * n * n * n);
  for (int a = 0; a < n * n; ++a)
    for (int b = 0; b < n * n; ++b)
      v(a * n * n + b) = std::polar(1.0, 2 * std::numbers::pi * (a % n) * (b / n) / n);
  return v;
}

}  // namespace

TEST_CASE("bicharacter cocycles") {
  auto be = dual("Z3xZ3");
  CocycleData c = CocycleData::bicharacter(*be, 3);
  CHECK(linalg::max_abs(CVec(c.values - bichar_oracle(3))) < 1e-12);
  CHECK(check_cocycle(*be, c).ok());
  UElement u = u_element(*be, c);
  CHECK(u.report.ok());
  // u(g) = Omega(g, g^-1), of modulus one
  const GroupPresentation& g = be->group();
  for (int x = 0; x < 9; ++x) {
    CHECK(std::abs(std::abs(u.value(x)) - 1.0) < 1e-12);
    CHECK(std::abs(u.value(x) - c.values(x * 9 + g.inverse[x])) < 1e-12);
  }
}

TEST_CASE("the trivial cocycle changes nothing") {
  ActionData act = load_action("z2xz2_group_algebra.action.json");
  CocycleData c = CocycleData::trivial(*act.backend);
  UElement u = u_element(*act.backend, c);
  for (int x = 0; x < 4; ++x) CHECK(std::abs(u.value(x) - 1.0) < 1e-12);
  DeformResult d = deform_action(act, c);
  CHECK(d.report.ok());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CVec x = act.algebra.basis(i), y = act.algebra.basis(j);
      CHECK(linalg::max_abs(CVec(d.algebra->multiply(x, y) - act.algebra.multiply(x, y))) < 1e-12);
    }
  CHECK(center_dimension(*d.algebra) == 4);
}

TEST_CASE("a random phase function is not a cocycle") {
  auto be = dual("Z2xZ2");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  CVec v(16);
  for (int i = 0; i < 16; ++i) v(i) = std::polar(1.0, ang(rng));
  Report r = check_cocycle(*be, CocycleData::from_values(*be, v));
  CHECK(r.find("unitary")->passed);
  const Check* id = r.find("cocycle_identity");
  REQUIRE(id != nullptr);
  CHECK_FALSE(id->passed);
  CHECK(id->detail.find('(') != std::string::npos);
}

TEST_CASE("non-invertible cocycles are rejected") {
  auto be = dual("Z2");
  CVec v = CVec::Ones(4);
  v(3) = 0.0;
  CHECK_THROWS_AS(CocycleData::from_values(*be, v), ConfigurationError);
}

TEST_CASE("counital normalization keeps the phase") {
  auto be = dual("Z2xZ2");
  CVec v = bichar_oracle(2) * cplx(0, 1);
  CocycleData c = CocycleData::from_values(*be, v);
  CHECK(std::abs(c.phase - cplx(0, 1)) < 1e-12);
  CHECK(linalg::max_abs(CVec(c.values - bichar_oracle(2))) < 1e-12);
}

TEST_CASE("deforming the functions on Z2 x Z2 dual by the bicharacter") {
  ActionData act = load_action("z2xz2_group_algebra.action.json");
  CocycleData c = load_cocycle("z2xz2_bicharacter.cocycle.json", *act.backend);
  DeformResult d = deform_action(act, c);
  CHECK(d.report.ok());
  // commutative C^4 becomes M_2
  CHECK(center_dimension(*d.algebra) == 1);
  CHECK(d.report.find("fixed_algebra_unchanged")->passed);
}

namespace {

// character chi_g of Z2 x Z2 as a function on the group, i.e. the degree-g element
CVec character(int g) {
  CVec v(4);
  for (int k = 0; k < 4; ++k) v(k) = (((k / 2) * (g / 2) + (k % 2) * (g % 2)) % 2) ? -1.0 : 1.0;
  return v;
}

}  // namespace

TEST_CASE("homogeneous elements pick up Omega, and conj(Omega) undoes it") {
  ActionData act = load_action("z2xz2_group_algebra.action.json");
  CocycleData c = CocycleData::bicharacter(*act.backend, 2);
  CocycleData cbar = CocycleData::from_values(*act.backend, c.values.conjugate());
  CHECK(check_cocycle(*act.backend, cbar).ok());
  DeformedAlgebra d(act, c), dbar(act, cbar);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const CVec prod = act.algebra.multiply(character(a), character(b));
      const cplx om = c.values(a * 4 + b);
      CHECK(linalg::max_abs(CVec(d.multiply(character(a), character(b)) - om * prod)) < 1e-12);
      CHECK(linalg::max_abs(CVec(dbar.multiply(character(a), character(b)) - std::conj(om) * prod)) < 1e-12);
    }
}

TEST_CASE("a coboundary twist is isomorphic to the original algebra") {
  ActionData act = load_action("z2xz2_group_algebra.action.json");
  const GroupPresentation& g = act.backend->group();
  const std::vector<cplx> cf = {1.0, cplx(0, 1), std::polar(1.0, 0.3), -1.0};
  CVec v(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) v(a * 4 + b) = cf[a] * cf[b] / cf[g.mul[a][b]];
  CocycleData c = CocycleData::from_values(*act.backend, v);
  CHECK(check_cocycle(*act.backend, c).ok());
  DeformedAlgebra d(act, c);
  // T(chi_a) = c(a) chi_a
  CMat t = CMat::Zero(4, 4), h(4, 4);
  for (int a = 0; a < 4; ++a) h.col(a) = character(a);
  for (int a = 0; a < 4; ++a) t += cf[a] * character(a) * h.inverse().row(a);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CVec x = act.algebra.basis(i), y = act.algebra.basis(j);
      CHECK(linalg::max_abs(CVec(t * d.multiply(x, y) - act.algebra.multiply(t * x, t * y))) < 1e-12);
    }
  CHECK(center_dimension(d) == 4);
}

TEST_CASE("deformed graded functors are rescaled by Omega") {
  FunctorData f = load_functor("z2xz2_group_algebra.graded.json");
  CocycleData c = load_cocycle("z2xz2_bicharacter.cocycle.json", *f.backend);
  FunctorData g = deform_functor(f, c);
  CHECK(validate_wutf(g).ok());
  for (const auto& [key, maps] : f.phi) {
    const auto& [a, b, e] = key;
    const cplx om = c.values(a * 4 + b);
    REQUIRE(g.phi.count(key));
    for (size_t k = 0; k < maps.size(); ++k)
      CHECK(linalg::max_abs(CMat(g.phi.at(key)[k] - om * maps[k])) < 1e-12);
  }
  CHECK(deform_cross_test(f, c).ok());
}

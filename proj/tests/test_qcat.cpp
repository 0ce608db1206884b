#include <doctest.h>

#include "qdual/qcat.hpp"

using namespace qdual;

namespace {

// characters computed by brute force from the representation matrices
cplx brute_pairing(const Backend& be, const Rep& u, const Rep& v) {
  const int n = be.group().size();
  cplx s = 0.0;
  for (int g = 0; g < n; ++g) s += std::conj(u.pi[g].trace()) * v.pi[g].trace();
  return s / static_cast<double>(n);
}

int index_of(const Backend& be, const std::string& label) { return be.irrep_index(label); }

}  // namespace

TEST_CASE("group presentations satisfy the group axioms") {
  for (const auto& g : {symmetric_group_3(), cyclic_group(4), product_group(cyclic_group(2), cyclic_group(3))}) {
    for (int a = 0; a < g.size(); ++a) {
      CHECK(g.mul[a][g.inverse[a]] == g.identity);
      CHECK(g.mul[g.identity][a] == a);
      for (int b = 0; b < g.size(); ++b)
        for (int c = 0; c < g.size(); ++c) CHECK(g.mul[g.mul[a][b]][c] == g.mul[a][g.mul[b][c]]);
    }
  }
}

TEST_CASE("a non-associative table is rejected") {
  std::vector<std::vector<int>> mul = {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
  CHECK_THROWS(GroupPresentation::from_table({"e", "a", "b"}, mul, 0));
}

TEST_CASE("haar averaging") {
  Backend be = builtin_backend("S3");
  const int triv = index_of(be, "triv"), sign = index_of(be, "sign"), stdr = index_of(be, "std");
  SUBCASE("trivial to trivial is the identity") {
    CMat out = haar_average(be, be.rep(triv), be.rep(triv), CMat::Ones(1, 1));
    CHECK(std::abs(out(0, 0) - 1.0) < 1e-12);
  }
  SUBCASE("std to std gives a scalar, matching a brute-force average") {
    Rng rng(3);
    CMat seed = rng.complex_matrix(2, 2);
    CMat out = haar_average(be, be.rep(stdr), be.rep(stdr), seed);
    CMat brute = CMat::Zero(2, 2);
    for (int g = 0; g < 6; ++g) brute += be.rep(stdr).pi[g] * seed * be.rep(stdr).pi[g].adjoint();
    brute /= 6.0;
    CHECK(linalg::max_abs(CMat(out - brute)) < 1e-12);
    CHECK(linalg::max_abs(CMat(out - out(0, 0) * CMat::Identity(2, 2))) < 1e-12);
    CHECK(linalg::max_abs(CMat(haar_average(be, be.rep(stdr), be.rep(stdr), out) - out)) < 1e-12);
  }
  SUBCASE("trivial to sign vanishes") {
    CMat out = haar_average(be, be.rep(triv), be.rep(sign), CMat::Constant(1, 1, 0.7));
    CHECK(std::abs(out(0, 0)) < 1e-12);
  }
}

TEST_CASE("intertwiner spaces match character arithmetic") {
  Backend be = builtin_backend("S3");
  const int stdr = index_of(be, "std"), triv = index_of(be, "triv");
  Rep ss = be.tensor(be.rep(stdr), be.rep(stdr));
  CHECK(mor_space(be, be.rep(stdr), be.rep(stdr)).size() == 1);
  CHECK(static_cast<double>(mor_space(be, ss, be.rep(triv)).size()) ==
        doctest::Approx(brute_pairing(be, ss, be.rep(triv)).real()));
  for (int a = 0; a < be.num_irreps(); ++a)
    for (int b = 0; b < be.num_irreps(); ++b)
      if (a != b) CHECK(mor_space(be, be.rep(a), be.rep(b)).size() == 0);

  Backend dz = builtin_backend("dual:Z3");
  CHECK(mor_space(dz, dz.rep(1), dz.rep(2)).size() == 0);
}

TEST_CASE("decompositions account for every dimension") {
  for (const std::string name : {"S3", "Z4", "dual:S3"}) {
    Backend be = builtin_backend(name);
    for (int a = 0; a < be.num_irreps(); ++a)
      for (int b = 0; b < be.num_irreps(); ++b)
        for (int c = 0; c < be.num_irreps(); ++c) {
          Rep u = be.tensor(be.tensor(be.rep(a), be.rep(b)), be.rep(c));
          auto parts = decompose(be, u);
          int total = 0;
          CMat sum = CMat::Zero(u.dim(), u.dim());
          for (const auto& p : parts) {
            total += be.irrep(p.label).dim;
            sum += p.w * p.w.adjoint();
            CHECK(linalg::max_abs(CMat(p.w.adjoint() * p.w - CMat::Identity(p.w.cols(), p.w.cols()))) < 1e-9);
          }
          CHECK(total == u.dim());
          CHECK(linalg::max_abs(CMat(sum - CMat::Identity(u.dim(), u.dim()))) < 1e-9);
        }
  }
  Backend be = builtin_backend("S3");
  auto parts = decompose(be, be.tensor(be.rep(2), be.rep(2)));
  std::vector<std::string> labels;
  for (const auto& p : parts) labels.push_back(be.irrep(p.label).label);
  std::sort(labels.begin(), labels.end());
  CHECK(labels == std::vector<std::string>{"sign", "std", "triv"});

  Backend dz = builtin_backend("dual:Z2xZ2");
  auto one = decompose(dz, dz.tensor(dz.rep(1), dz.rep(3)));
  REQUIRE(one.size() == 1);
  CHECK(one[0].label == dz.group().mul[1][3]);
}

TEST_CASE("conjugate solutions") {
  for (const std::string name : {"S3", "Z4", "dual:S3", "dual:Z2xZ2"}) {
    Backend be = builtin_backend(name);
    for (int a = 0; a < be.num_irreps(); ++a) {
      const int d = be.irrep(a).dim;
      auto r = conjugate_residuals(be.conjugate(a), d, be.irrep(be.irrep(a).conj).dim, quantum_dim(be, a));
      CHECK(r.first < 1e-9);
      CHECK(r.second < 1e-9);
      CHECK(be.conjugate(a).r.squaredNorm() == doctest::Approx(d));
      CHECK(quantum_dim(be, a) == doctest::Approx(d));
    }
  }
  Backend be = builtin_backend("S3");
  CHECK(std::abs(std::abs(be.conjugate(be.trivial()).r(0)) - 1.0) < 1e-12);
}

TEST_CASE("non-Kac rho: quantum dimension is a direct trace") {
  const double q = 0.5;
  Irrep u;
  u.dim = 2;
  u.rho = CMat::Zero(2, 2);
  u.rho(0, 0) = q;
  u.rho(1, 1) = 1.0 / q;
  CHECK(quantum_dim(u) == doctest::Approx(q + 1.0 / q));
  CMat j = CMat::Identity(2, 2);
  ConjugateSolution s = standard_solution(u.rho, j);
  auto r = conjugate_residuals(s, 2, 2, q + 1.0 / q);
  CHECK(r.first < 1e-9);
  CHECK(r.second < 1e-9);
  CHECK(r.norm_r < 1e-9);
}

TEST_CASE("Frobenius reciprocity round trip") {
  Backend be = builtin_backend("S3");
  Rng rng(5);
  const int alpha = 2, db = 2, dv = 2;
  CMat t = rng.complex_matrix(db * dv, db * be.irrep(alpha).dim);
  CMat back = frobenius_inverse(be, alpha, frobenius(be, alpha, t, db, dv), db, dv);
  CHECK(linalg::max_abs(CMat(back - t)) < 1e-10);
}

TEST_CASE("twisted backend keeps the irreducibles") {
  Backend be = builtin_backend("dual:Z2xZ2");
  CVec om(16);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) om(x * 4 + y) = ((x % 2) * (y / 2)) % 2 ? -1.0 : 1.0;
  Backend tw = Backend::twisted(be, om);
  CHECK(tw.is_twisted());
  CHECK(tw.num_irreps() == be.num_irreps());
  CHECK_THROWS_AS(Backend::twisted(be, CVec::Zero(16)), ConfigurationError);
}

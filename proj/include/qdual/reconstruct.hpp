#pragma once

// The *-algebra B_F = sum over irreducibles of conj(H_alpha) (x) M_alpha built
// from a weak unitary tensor functor, with its right U(G)-module structure
// (the coaction), conditional expectation and C*-norm.
//
// An element is a coordinate vector; component alpha is a dim U_alpha x dim M_alpha
// block stored row-major, row i standing for the conjugate basis vector of e_i.

#include <cstdint>

#include "qdual/wutf.hpp"

namespace qdual {

class ReconstructedAlgebra {
 public:
  ReconstructedAlgebra(FunctorData f, const Tolerance& tol = {});

  const FunctorData& functor() const { return f_; }
  const Backend& backend() const { return *f_.backend; }
  const FdCStarAlgebra& base() const { return f_.base; }
  int dim() const { return dim_; }
  int component_offset(int a) const { return offsets_.at(static_cast<std::size_t>(a)); }
  int component_dim(int a) const { return sizes_.at(static_cast<std::size_t>(a)); }

  CMat component(const CVec& x, int a) const;
  CVec from_component(int a, const CMat& c) const;
  CVec basis(int k) const;
  CVec zero() const { return CVec::Zero(dim_); }
  CVec random(Rng& rng) const;

  /// A embedded as the trivial component.
  CVec embed(const CVec& a) const;
  CVec unit() const { return embed(f_.base.unit()); }

  /// pi on conj(H_U) (x) F(U): z is dim U x dim F(X).
  CVec pi(const FObject& x, const CMat& z) const;
  /// The free product (xi (x) X)(zeta (x) Y) = conj(xi (x) zeta) (x) F_2(X (x) Y).
  CMat free_product(const FObject& u, const CMat& z, const FObject& v, const CMat& t,
                    const FObject& uv) const;

  CVec multiply(const CVec& x, const CVec& y) const;
  CVec star(const CVec& x) const;
  CVec expectation(const CVec& x) const;
  CVec inner(const CVec& x, const CVec& y) const { return expectation(multiply(star(x), y)); }

  /// x |> omega for omega in U(G): the coaction paired with omega.
  CVec act(const CVec& x, const CVec& omega) const;
  CMat act_matrix(const CVec& omega) const;

  /// B_F as a right Hilbert A-module with <x, y> = E(x^* y).
  const Correspondence& regular_module() const;
  CMat left_mult(const CVec& x) const;
  double regular_norm(const CVec& x) const;

  /// c[k][i][j] = coordinate k of basis_i basis_j.
  std::vector<CMat> structure_constants() const;

 private:
  struct PairData {
    std::vector<int> labels;
    std::vector<CMat> w;
    std::vector<CMat> phi;
  };

  FunctorData f_;
  Tolerance tol_;
  std::vector<int> offsets_, sizes_;
  int dim_ = 0;
  std::vector<std::vector<PairData>> pairs_;
  std::vector<CMat> bullet_;  // bullet matrices per irrep
  mutable std::optional<Correspondence> regular_;
};

struct BuildResult {
  std::shared_ptr<ReconstructedAlgebra> algebra;
  Report validation;
  Report report;
};

/// Validates the functor, constructs B_F and checks its invariants.
BuildResult build(const FunctorData& f, const Tolerance& tol = {}, std::uint64_t seed = 0,
                  int samples = 100);

/// Checks the algebraic-action conditions of a reconstructed algebra.
Report check_reconstruction(const ReconstructedAlgebra& b, const Tolerance& tol, std::uint64_t seed,
                            int samples);

}  // namespace qdual

#pragma once

// Equivariant right Hilbert B-modules, the functor U -> Mor(M, M (x) U) and the
// fullness (generator) test.
//
// Mor(M, M (x) U) is realized as tuples T = (T_1..T_d) of right B-linear maps
// on M with T_i(m) |> omega = sum pi_U(omega_(1))_ij T_j(m |> omega_(2)), the
// same convention as spectral_subspace, so that Mor(B, B (x) U) is literally
// the spectral subspace of U.

#include <optional>

#include "qdual/spectral.hpp"

namespace qdual {

struct EquivariantModule {
  ActionData base;
  int dim = 0;                              // complex dimension of the carrier
  std::vector<CMat> right;                  // per basis element of B: m -> m b_k
  std::vector<std::vector<CVec>> inner;     // <e_p, e_q> in B
  std::vector<CMat> module_maps;            // per basis element of U(G)

  const FdCStarAlgebra& algebra() const { return base.algebra; }
  const Backend& backend() const { return *base.backend; }

  CVec inner_product(const CVec& x, const CVec& y) const;
  CVec act_right(const CVec& x, const CVec& b) const;
  /// tau(<e_p, e_q>), positive definite for a valid module.
  CMat trace_gram() const;
  /// B-adjoint of a right B-linear map on the carrier.
  CMat adjoint(const CMat& t) const;

  /// B as a module over itself.
  static EquivariantModule regular(const ActionData& act);
  /// M (x) H_U with (m (x) xi) |> omega = sum (m |> omega_(1)) (x) pi_U(S omega_(2)) xi.
  static EquivariantModule tensor_irrep(const EquivariantModule& m, int alpha);
  static EquivariantModule direct_sum(const EquivariantModule& m, const EquivariantModule& n);
  /// Submodule spanned by the columns of basis (must be invariant).
  static EquivariantModule submodule(const EquivariantModule& m, const CMat& basis);
};

Report validate_module(const EquivariantModule& m, const Tolerance& tol = {});

/// A fixed choice of End(M): block algebra plus matrices of its basis on the carrier.
using EndomorphismBase = std::pair<FdCStarAlgebra, std::vector<CMat>>;

struct ModuleFunctor {
  FunctorData functor;
  std::vector<CMat> end_units;  // basis of A = End(M) as carrier matrices
  std::vector<CMat> bases;      // per irrep: columns are stacked (T_1..T_d), each vec'd
};

/// Throws ContractViolation if M is not a valid equivariant module.
ModuleFunctor module_functor(const EquivariantModule& m, const Tolerance& tol = {}, std::uint64_t seed = 0,
                             const std::optional<EndomorphismBase>& base = std::nullopt);

/// For M = B: compares module_functor with spectral_functor through X -> (L_{x_i})_i.
NaturalIsomorphism regular_module_comparison(const ActionData& act, const Tolerance& tol = {},
                                             std::uint64_t seed = 0);

struct FullnessResult {
  bool full = false;
  int rank = 0;       // rank of the accumulated sum of <X_i, X_i>
  int full_rank = 0;  // dim of B in its faithful representation
  std::vector<std::pair<int, CVec>> vectors;  // (irrep, stacked spectral vector)
  CVec gram;        // <Y, Y>
  CVec normalizer;  // <Y, Y>^{-1/2}
  double domination = 0.0;  // largest c with <Y, Y> >= c sum <X_i, X_i>
  Report report;
};

FullnessResult fullness_check(const EquivariantModule& m, const Tolerance& tol = {});

}  // namespace qdual

#pragma once

// Actions of finite quantum groups on finite-dimensional C*-algebras, their
// spectral functors, and the round trip B -> F -> B_F.
//
// Internally an action is stored as a right U(G)-module structure on B:
// x |> g = alpha_{g^{-1}}(x) for a group action, x |> delta_g = x_g (the
// degree-g component) for a grading.

#include <cstdint>
#include <memory>
#include <optional>

#include "qdual/reconstruct.hpp"
#include "qdual/wutf.hpp"

namespace qdual {

enum class ActionKind { Automorphism, Grading };

struct ActionData {
  std::shared_ptr<const Backend> backend;
  FdCStarAlgebra algebra;
  ActionKind kind = ActionKind::Automorphism;
  std::vector<CMat> module_maps;  // one dim B x dim B matrix per basis element of U(G)
  /// Optional embedding A -> B (dim B x dim A) fixing the coordinates of the fixed point algebra.
  std::optional<std::pair<FdCStarAlgebra, CMat>> fixed_embedding;

  /// From automorphisms alpha_g given as coordinate maps, indexed by group element.
  static ActionData from_automorphisms(std::shared_ptr<const Backend> be, FdCStarAlgebra b,
                                       std::vector<CMat> automorphisms);
  /// From a grading: columns of blocks[g] span B_g.
  static ActionData from_grading(std::shared_ptr<const Backend> be, FdCStarAlgebra b,
                                 const std::vector<CMat>& blocks);

  std::vector<CMat> automorphisms() const;
  std::vector<CMat> grading() const;
  CVec act(const CVec& x, const CVec& omega) const;
};

/// Checks that the action is a *-compatible module-algebra structure.
Report validate_action(const ActionData& act, const Tolerance& tol = {});

struct FixedAlgebra {
  FdCStarAlgebra algebra;
  CMat embedding;  // dim B x dim A
  CMat coords;     // dim A x dim B, left inverse of the embedding on its range
};

FixedAlgebra fixed_algebra(const ActionData& act, const Tolerance& tol = {}, std::uint64_t seed = 0);

/// Orthonormal basis (columns) of the solutions X = (x_1..x_d) in B^d, stacked, of
/// x_i |> omega = sum_j pi_alpha(omega)_ij x_j.
CMat spectral_subspace(const ActionData& act, int alpha, const Tolerance& tol = {});
/// Same equations for any right U(G)-module given by its basis matrices.
CMat spectral_subspace(const Backend& be, const std::vector<CMat>& module_maps, int alpha,
                       const Tolerance& tol = {});

struct SpectralFunctor {
  FunctorData functor;
  FixedAlgebra fixed;
  std::vector<CMat> bases;  // per irrep: stacked B^d coordinates of the basis of M_alpha
  std::vector<CMat> coords;  // per irrep: left inverse of bases[alpha]
};

SpectralFunctor spectral_functor(const ActionData& act, const Tolerance& tol = {}, std::uint64_t seed = 0);

/// Checks S_X^* Z = X^*_13 Z and the Peter-Weyl dimension count.
Report check_spectral(const ActionData& act, const SpectralFunctor& s, const Tolerance& tol = {});

struct IsomorphismCertificate {
  CMat map;  // dim B x dim B_F
  Report report;
};

/// B -> spectral functor -> B_F, with the explicit isomorphism B_F -> B.
IsomorphismCertificate roundtrip_check(const ActionData& act, const Tolerance& tol = {},
                                       std::uint64_t seed = 0, int samples = 100);

/// B_F as a concrete action on a direct sum of matrix algebras.
struct RealizedAction {
  ActionData action;
  CMat to_blocks;    // B_F coordinates -> block coordinates
  CMat from_blocks;  // inverse
};

RealizedAction realize(const ReconstructedAlgebra& b, const Tolerance& tol = {}, std::uint64_t seed = 0);

struct NaturalIsomorphism {
  std::vector<CMat> components;  // per irrep: M_alpha(F) -> M_alpha(G)
  Report report;
};

/// Checks that eta (given per irrep) is a unitary monoidal natural isomorphism F -> G.
Report check_natural_isomorphism(const FunctorData& f, const FunctorData& g,
                                 const std::vector<CMat>& eta, const Tolerance& tol = {});

/// The A-bimodule map M -> N closest in Frobenius norm to ref.
CMat closest_bimodule_map(const Correspondence& m, const Correspondence& n, const CMat& ref,
                          const Tolerance& tol = {});

/// F -> B_F -> spectral functor of B_F, compared with F through the reference
/// map X -> sum_i e_i (x) (conj(e_i) (x) X).
NaturalIsomorphism functor_roundtrip(const FunctorData& f, const Tolerance& tol = {},
                                     std::uint64_t seed = 0);

}  // namespace qdual

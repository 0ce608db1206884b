#pragma once

// Finite-dimensional C*-algebras and C*-correspondences over them.
//
// An element of A = M_{n_1} + ... + M_{n_k} is a coordinate vector over the
// matrix units, block by block, each block row-major. With these coordinates
// the Euclidean inner product is tau(x^* y) for tau the sum of block traces.

#include <cstdint>
#include <optional>
#include <vector>

#include "qdual/linalg.hpp"
#include "qdual/report.hpp"

namespace qdual {

class FdCStarAlgebra {
 public:
  FdCStarAlgebra() = default;
  explicit FdCStarAlgebra(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int dim() const { return dim_; }
  /// Size of the block-diagonal matrix realization.
  int size() const { return size_; }
  int offset(int block) const { return offsets_.at(static_cast<std::size_t>(block)); }
  int coord(int block, int row, int col) const;

  CVec basis(int k) const;
  CVec unit() const;
  CVec zero() const { return CVec::Zero(dim_); }
  CVec multiply(const CVec& x, const CVec& y) const;
  CVec adjoint(const CVec& x) const;
  cplx trace(const CVec& x) const;

  CMat block(const CVec& x, int k) const;
  CMat to_matrix(const CVec& x) const;  // block-diagonal, size() x size()
  CVec from_matrix(const CMat& m) const;  // reads the diagonal blocks

  double norm(const CVec& x) const;
  /// Smallest eigenvalue of the Hermitian part over all blocks.
  double min_eigenvalue(const CVec& x) const;
  bool is_positive(const CVec& x, double tau) const;
  /// Matrix of y -> x y in coordinates.
  CMat left_mult(const CVec& x) const;
  CMat right_mult(const CVec& x) const;

  bool operator==(const FdCStarAlgebra& o) const { return blocks_ == o.blocks_; }
  bool operator!=(const FdCStarAlgebra& o) const { return !(*this == o); }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  std::vector<int> moffsets_;
  int dim_ = 0;
  int size_ = 0;
};

/// A C*-correspondence over A stored on a vector-space basis e_1..e_d.
struct Correspondence {
  FdCStarAlgebra algebra;
  int dim = 0;
  std::vector<CMat> right;  // right[k] e = e . a_k, as d x d matrices
  std::vector<CMat> left;   // left[k] e = a_k . e
  std::vector<std::vector<CVec>> inner;  // inner[i][j] = <e_i, e_j> in A

  CVec inner_product(const CVec& x, const CVec& y) const;
  CVec act_right(const CVec& x, const CVec& a) const;
  CVec act_left(const CVec& a, const CVec& x) const;
  CMat right_matrix(const CVec& a) const;
  CMat left_matrix(const CVec& a) const;
  /// tau(<e_i, e_j>), positive definite for a valid correspondence.
  CMat trace_gram() const;
  /// Gram matrix of the Hilbert space M (x)_A C^N, N = algebra.size().
  CMat faithful_gram() const;

  /// One d x d matrix per algebra coordinate p: (i, j) -> <e_i, e_j>_p.
  std::vector<CMat> coordinate_grams() const;

  static Correspondence identity(const FdCStarAlgebra& a);
  static Correspondence zero(const FdCStarAlgebra& a);
};

/// Checks the correspondence axioms on basis elements.
Report validate_correspondence(const Correspondence& m, double tau);

struct TensorProduct {
  Correspondence module;
  CMat quotient;  // coordinates of e_i (x) f_j (column i * dim N + j) in the quotient
};

TensorProduct internal_tensor(const Correspondence& m, const Correspondence& n,
                              double gram_cutoff = 1e-10);

/// Coordinate Gram matrices of the semi-inner product on the vector-space
/// tensor product: <e_i (x) f_j, e_k (x) f_l> = <f_j, <e_i, e_k> f_l>.
std::vector<CMat> tensor_semi_grams(const Correspondence& m, const Correspondence& n);

/// Max over coordinates of |A^* G_p(n) B - H_p| where H are grams on the source.
double gram_defect(const std::vector<CMat>& target_grams, const CMat& map,
                   const std::vector<CMat>& source_grams);

Correspondence direct_sum(const std::vector<Correspondence>& parts, const FdCStarAlgebra& a);

struct AdjointResult {
  bool adjointable = false;
  CMat adjoint;
  double residual = 0.0;
};

/// T : M -> N given as a dim N x dim M matrix.
AdjointResult adjoint_of(const Correspondence& m, const Correspondence& n, const CMat& t, double tau);

/// Residual of right A-linearity of T : M -> N.
double right_linearity_defect(const Correspondence& m, const Correspondence& n, const CMat& t);
double left_linearity_defect(const Correspondence& m, const Correspondence& n, const CMat& t);

double module_norm(const Correspondence& m, const CVec& x);

/// Operator norm of an adjointable T : M -> N for the module norms.
double operator_norm(const Correspondence& m, const Correspondence& n, const CMat& t,
                     double gram_cutoff = 1e-10);

/// Block decomposition of a *-closed algebra of N x N matrices.
struct WedderburnDecomposition {
  FdCStarAlgebra algebra;
  std::vector<CMat> units;  // N x N matrix unit for each coordinate of `algebra`

  /// Coordinates of a matrix lying in the algebra.
  CVec coordinates(const CMat& x) const;
  CMat matrix(const CVec& coords) const;
};

/// Recovers blocks and matrix units from a spanning set via random
/// self-adjoint central and block elements (seeded).
WedderburnDecomposition wedderburn(const std::vector<CMat>& span, std::uint64_t seed, double rank_tol);

}  // namespace qdual

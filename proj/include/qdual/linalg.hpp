#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdual {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
struct Tolerance {
  double tau = 1e-9;         // unitarity / intertwining / axiom residuals
  double rank = 1e-8;        // singular-value cutoff for null spaces and spans
  double prune = 1e-13;      // component pruning in reconstructed elements
  double gram_cutoff = 1e-10;  // relative eigenvalue cutoff for Gram quotients
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompleteDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic random source used by every randomized check.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return dist_(engine_); }
  cplx complex_uniform() {
    double re = uniform();
    double im = uniform();
    return {re, im};
  }
  CMat complex_matrix(Eigen::Index rows, Eigen::Index cols);
  CVec complex_vector(Eigen::Index n);
  CMat unitary(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_{-1.0, 1.0};
};

namespace linalg {

CMat kron(const CMat& a, const CMat& b);
CVec kron(const CVec& a, const CVec& b);

/// Orthonormal basis (columns) of the null space of `m`, using a relative
/// singular-value cutoff.
CMat null_space(const CMat& m, double rel_cutoff);

/// Modified Gram-Schmidt over the columns of `m` in order, dropping columns
/// whose residual norm falls below `cutoff` times max(1, largest column norm).
CMat orthonormal_span(const CMat& m, double cutoff);

/// Moore-Penrose pseudo-inverse with relative cutoff.
CMat pinv(const CMat& m, double rel_cutoff = 1e-12);

double max_abs(const CMat& m);
double max_abs(const CVec& v);

/// Positive square root and its inverse for a Hermitian positive matrix.
CMat sqrt_psd(const CMat& h);
CMat inv_sqrt_pd(const CMat& h);

double min_eigenvalue_hermitian(const CMat& h);
double max_eigenvalue_hermitian(const CMat& h);

/// Largest singular value.
double op_norm(const CMat& m);

/// Vectorize column-major and back.
CVec vec(const CMat& m);
CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols);

/// Groups sorted real values into clusters separated by more than `gap`.
std::vector<std::vector<Eigen::Index>> cluster_sorted(const RVec& values, double gap);

}  // namespace linalg
}  // namespace qdual

#include "qdual/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qdual {

CMat Rng::complex_matrix(Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_uniform();
  return m;
}

CVec Rng::complex_vector(Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_uniform();
  return v;
}

CMat Rng::unitary(Eigen::Index n) {
  CMat m = complex_matrix(n, n);
  Eigen::HouseholderQR<CMat> qr(m);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  return q;
}

namespace linalg {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMat null_space(const CMat& m, double rel_cutoff) {
  const Eigen::Index n = m.cols();
  if (n == 0) return CMat(0, 0);
  if (m.rows() == 0) return CMat::Identity(n, n);
  // Reduce tall systems to a square triangular factor first.
  CMat reduced;
  if (m.rows() > n) {
    Eigen::HouseholderQR<CMat> qr(m);
    reduced = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    reduced = m;
  }
  Eigen::JacobiSVD<CMat> svd(reduced, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  double cut = rel_cutoff * std::max(smax, 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

CMat orthonormal_span(const CMat& m, double cutoff) {
  double scale = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) scale = std::max(scale, m.col(j).norm());
  std::vector<CVec> basis;
  scale = std::max(scale, 1.0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    CVec v = m.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    double nv = v.norm();
    if (nv > cutoff * scale) basis.push_back(v / nv);
  }
  CMat out(m.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

CMat pinv(const CMat& m, double rel_cutoff) {
  if (m.size() == 0) return CMat::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  double cut = rel_cutoff * (s.size() ? s(0) : 0.0);
  RVec inv = RVec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

namespace {
template <class F>
CMat spectral_apply(const CMat& h, F f) {
  CMat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  RVec ev = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace

CMat sqrt_psd(const CMat& h) {
  return spectral_apply(h, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

CMat inv_sqrt_pd(const CMat& h) {
  return spectral_apply(h, [](double x) {
    if (x <= 0) throw std::domain_error("inv_sqrt_pd: matrix is not positive definite");
    return 1.0 / std::sqrt(x);
  });
}

double min_eigenvalue_hermitian(const CMat& h) {
  if (h.size() == 0) return 0.0;
  CMat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue_hermitian(const CMat& h) {
  if (h.size() == 0) return 0.0;
  CMat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

CVec vec(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

std::vector<std::vector<Eigen::Index>> cluster_sorted(const RVec& values, double gap) {
  std::vector<std::vector<Eigen::Index>> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (out.empty() || values(i) - values(out.back().back()) > gap)
      out.push_back({i});
    else
      out.back().push_back(i);
  }
  return out;
}

}  // namespace linalg
}  // namespace qdual

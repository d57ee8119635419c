#include "ugraphon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ugraphon/error.hpp"

namespace ugraphon {

double max_asymmetry(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

EigenDecomposition empirical_spectrum(const Eigen::MatrixXd& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigensolve needs a square matrix");
  const double asym = max_asymmetry(m);
  if (asym > 1e-10) {
    throw std::invalid_argument("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  EigenDecomposition out;
  if (m.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  out.values = solver.eigenvalues().reverse();
  if (with_vectors) out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double power_iteration(const Eigen::MatrixXd& m, double tol, int max_iter) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(m * w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
    v = std::move(w);
  }
  throw NumericalError("power iteration did not converge");
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace ugraphon

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ugraphon {

/// Eigenpairs sorted by descending eigenvalue; vectors empty when not requested.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Dense symmetric eigensolve. Throws std::invalid_argument when the input is
/// asymmetric by more than 1e-10 (absolute, entrywise).
EigenDecomposition empirical_spectrum(const Eigen::MatrixXd& m, bool with_vectors = true);

double max_asymmetry(const Eigen::MatrixXd& m);

/// Largest eigenvalue of a symmetric nonnegative matrix by power iteration.
double power_iteration(const Eigen::MatrixXd& m, double tol = 1e-12, int max_iter = 100000);

/// Median (mean of the two middle values for even sizes). Throws on empty input.
double median(std::vector<double> values);

}  // namespace ugraphon

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ugraphon/graphon.hpp"
#include "ugraphon/linalg.hpp"
#include "ugraphon/sampling.hpp"

namespace ugraphon {

struct SpectrumEntry {
  std::optional<NodeId> node;  // empty for the constant mode (eigenvalue 0)
  double eigenvalue = 0.0;
  std::size_t multiplicity = 0;
  std::size_t offset = 0;  // first position in the expanded descending order
};

/// Eigenvalues of L_det per tree node, descending with 0 first. Nearly equal
/// eigenvalues are ordered by node level, then by left endpoint.
struct ClosedFormSpectrum {
  std::size_t n = 0;
  std::vector<SpectrumEntry> entries;

  std::vector<double> expanded() const;
  const SpectrumEntry& entry(NodeId id) const;
};

/// lambda(I) = -N_k nu(I) with multiplicity |C(I)| - 1 (internal nodes) or
/// m(I) - 1 (finest nodes holding at least two points).
ClosedFormSpectrum closed_form_spectrum(const Graphon& g, const SampleGrid& grid,
                                        bool clique_atoms = false);

/// Dense N_k x N_k projector E_I onto the eigenspace of node I.
Eigen::MatrixXd closed_form_projector(const UltrametricTree& tree, const SampleGrid& grid, NodeId node);

/// Index block of the expanded spectrum holding lambda(node). Distinct nodes
/// sharing the eigenvalue (within rel_tol * N_k) are merged into one block.
struct SpectralBlock {
  std::size_t begin = 0;
  std::size_t count = 0;
  std::vector<NodeId> nodes;
  bool merged() const { return nodes.size() > 1; }
};

SpectralBlock spectral_block(const ClosedFormSpectrum& spectrum, NodeId node, double rel_tol = 1e-9);

/// Sum of E_J over the block's nodes.
Eigen::MatrixXd block_projector(const UltrametricTree& tree, const SampleGrid& grid,
                                const SpectralBlock& block);

/// Vhat Vhat^T over the eigenvector columns [begin, begin + count).
Eigen::MatrixXd empirical_projector(const EigenDecomposition& eig, std::size_t begin, std::size_t count);

/// Distance from lambda(node) to the nearest other deterministic eigenvalue,
/// divided by N_k.
double spectral_gap(const ClosedFormSpectrum& spectrum, NodeId node, double rel_tol = 1e-9);

/// True when the `count` empirical eigenvalues nearest to `target` are not
/// exactly the index block.
bool nearest_selection_differs(const Eigen::VectorXd& values, const SpectralBlock& block, double target);

struct PairingRow {
  int k = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> det_over_n;
  std::vector<double> rand_over_n;
  double max_error = 0.0;
};

struct PairingSummary {
  int k = 0;
  std::size_t n = 0;
  double median_max_error = 0.0;
};

struct PairingReport {
  std::vector<PairingRow> rows;
  std::vector<PairingSummary> per_k;
  double fitted_c = 0.0;  // least-squares fit of median error ~ C N_k^{-1/2}
};

PairingReport pairing_experiment(const Graphon& g, const std::vector<int>& ks,
                                 const std::vector<std::uint64_t>& seeds, bool clique_atoms = false);

struct ProjectorResult {
  NodeId node{};
  double frobenius_error = 0.0;
  double delta = 0.0;
  double bound = 0.0;  // 2 sqrt(2) m N_k^(gamma - 1/2) / delta
  bool merged = false;
  bool nearest_differs = false;
};

ProjectorResult projector_from_decomposition(const UltrametricTree& tree, const SampleGrid& grid,
                                             const ClosedFormSpectrum& spectrum,
                                             const EigenDecomposition& eig, NodeId node,
                                             double gamma = 0.25);

ProjectorResult projector_experiment(const Graphon& g, NodeId node, int k, std::uint64_t seed,
                                     double gamma = 0.25);

struct DetectionResult {
  NodeId node{};
  std::vector<int> labels;  // component label per vertex of the node's range
  std::size_t n_components = 0;
  std::size_t misassigned = 0;
  bool ambiguous = false;   // component count differs from the child count
  bool merged_block = false;
  bool exact() const { return !ambiguous && misassigned == 0; }
};

/// Sign-structure detection on a projector estimate: connected components of
/// {(i, j) : E_ij > zero_tol} inside the node's vertex range, matched greedily
/// to the true children. zero_tol <= 0 selects 1 / (4 m(I)).
DetectionResult detect_from_projector(const Eigen::MatrixXd& projector, const UltrametricTree& tree,
                                      const SampleGrid& grid, NodeId node, double zero_tol = 0.0);

DetectionResult detect_children(const Graphon& g, NodeId node, int k, std::uint64_t seed,
                                double zero_tol = 0.0);

enum class FiedlerSupport { Root, SingleChild, Mixed };
enum class Regime { Detectable, Undetectable };

struct ThresholdReport {
  std::vector<double> rho;
  double p_star = 0.0;
  std::size_t argmin_child = 0;
  double inter_prob = 0.0;
  Regime regime = Regime::Detectable;
  FiedlerSupport fiedler_support = FiedlerSupport::Root;
  std::optional<std::size_t> support_child;
};

ThresholdReport detectability_threshold(const Graphon& one_level, int k);

struct VRootCheck {
  double residual = 0.0;
  std::size_t dimension = 0;
};

VRootCheck v_root_eigencheck(const Graphon& one_level, const SampleGrid& grid);

struct CheegerResult {
  double phi = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double lambda2 = 0.0;  // |lambda_2(L)|
  bool holds(double tol = 1e-9) const { return lower <= lambda2 + tol && lambda2 <= upper + tol; }
};

/// Exact conductance by enumerating subsets with vol(S) <= vol(V)/2.
CheegerResult cheeger_bounds(const Eigen::MatrixXd& adjacency, std::size_t exact_max_n = 20);

const char* to_string(FiedlerSupport s);
const char* to_string(Regime r);

}  // namespace ugraphon

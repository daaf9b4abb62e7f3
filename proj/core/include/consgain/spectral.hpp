#pragma once

#include "consgain/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace consgain {

/// Graph Laplacian L = D - A. Each diagonal entry is the negated sum of the
/// off-diagonal entries of its row, so row sums vanish exactly.
[[nodiscard]] Eigen::MatrixXd laplacian(const Graph& g);

/// Sorted Laplacian spectrum with connectivity verdict.
struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues(i)
  double zero_tolerance = 0.0;   // 1e-9 * max(1, lambda_n)
  bool connected = false;

  /// Smallest non-zero eigenvalue; empty when the graph is disconnected.
  std::optional<double> lambda2;

  /// Non-zero eigenvalues lambda_2..lambda_n (meaningful when connected).
  [[nodiscard]] Eigen::VectorXd gamma() const { return eigenvalues.tail(eigenvalues.size() - 1); }

  /// Number of eigenvalues within zero_tolerance of zero.
  [[nodiscard]] std::size_t zero_multiplicity() const;

  /// lambda2, or PreconditionError when the graph is disconnected.
  [[nodiscard]] double algebraic_connectivity() const;

  /// Unit eigenvector paired with lambda_2 (first in eigensolver order).
  [[nodiscard]] Eigen::VectorXd fiedler_vector() const;
};

[[nodiscard]] Spectrum spectrum(const Graph& g);

/// {"eigenvalues": [...], "lambda2": x|null, "connected": bool}
[[nodiscard]] std::string to_json(const Spectrum& s);

/// Closed-form algebraic connectivity of the 0-1 families. RingLattice is
/// supported for k in {1, 2, 3}; other radii throw UnsupportedError.
[[nodiscard]] double closed_form_lambda2(const GraphFamily& family);

/// Orthogonal reduction separating the consensus direction.
///
/// `q` is orthogonal with last column 1/sqrt(n); `lbar1` is the leading
/// (n-1)x(n-1) block of Q^T L Q, whose spectrum equals the non-zero part of
/// the Laplacian spectrum.
struct Reduction {
  Eigen::MatrixXd q;
  Eigen::MatrixXd lbar1;
};

/// Householder completion of 1/sqrt(n) to an orthonormal basis of R^n.
/// Depends only on n.
[[nodiscard]] Eigen::MatrixXd consensus_basis(Eigen::Index n);

/// Throws PreconditionError when g is disconnected.
[[nodiscard]] Reduction reduction(const Graph& g);

}  // namespace consgain

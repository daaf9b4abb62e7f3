#include "consgain/spectral.hpp"

#include "consgain/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace consgain {

Eigen::MatrixXd laplacian(const Graph& g) {
  const Eigen::MatrixXd& a = g.adjacency();
  const auto n = a.rows();
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      l(i, j) = -a(i, j);
      off_sum += l(i, j);
    }
    l(i, i) = -off_sum;
  }
  return l;
}

std::size_t Spectrum::zero_multiplicity() const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues(i)) <= zero_tolerance) ++count;
  }
  return count;
}

double Spectrum::algebraic_connectivity() const {
  if (!lambda2) {
    throw PreconditionError("graph is disconnected; algebraic connectivity is zero");
  }
  return *lambda2;
}

Eigen::VectorXd Spectrum::fiedler_vector() const {
  if (!connected) {
    throw PreconditionError("graph is disconnected; no Fiedler vector");
  }
  return eigenvectors.col(1).normalized();
}

Spectrum spectrum(const Graph& g) {
  const Eigen::MatrixXd l = laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge (n=" << l.rows()
        << ", max |l_ij|=" << l.cwiseAbs().maxCoeff() << ")";
    throw NumericError(msg.str());
  }
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  const auto n = s.eigenvalues.size();
  s.zero_tolerance = 1e-9 * std::max(1.0, s.eigenvalues(n - 1));
  s.connected = s.eigenvalues(1) > s.zero_tolerance;
  if (s.connected) {
    s.lambda2 = s.eigenvalues(1);
  }
  return s;
}

std::string to_json(const Spectrum& s) {
  nlohmann::json doc;
  doc["eigenvalues"] = std::vector<double>(s.eigenvalues.data(),
                                           s.eigenvalues.data() + s.eigenvalues.size());
  doc["lambda2"] = s.lambda2 ? nlohmann::json(*s.lambda2) : nlohmann::json(nullptr);
  doc["connected"] = s.connected;
  return doc.dump();
}

double closed_form_lambda2(const GraphFamily& family) {
  family.validate();
  const double n = static_cast<double>(family.n);
  using std::numbers::pi;
  switch (family.kind) {
    case FamilyKind::Complete:
      return n;
    case FamilyKind::Star:
      return family.n == 2 ? 2.0 : 1.0;
    case FamilyKind::Path: {
      const double s = std::sin(pi / (2.0 * n));
      return 4.0 * s * s;
    }
    case FamilyKind::RingLattice: {
      if (family.k < 1 || family.k > 3) {
        throw UnsupportedError("no closed-form lambda2 for ring lattice with k=" +
                               std::to_string(family.k) + "; use the eigensolver");
      }
      // Dirichlet-kernel form of 2k - 2 sum_{d<=k} cos(2 pi d / n).
      const double m = 2.0 * static_cast<double>(family.k) + 1.0;
      return m - std::sin(m * pi / n) / std::sin(pi / n);
    }
  }
  throw UnsupportedError("unknown family");
}

Eigen::MatrixXd consensus_basis(Eigen::Index n) {
  if (n < 2) {
    throw ParameterError("consensus basis needs n >= 2");
  }
  // Reflector swapping e_n and u = 1/sqrt(n): H = I - 2 w w^T / (w^T w), w = u - e_n.
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, inv_sqrt_n);
  w(n - 1) -= 1.0;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
  q.col(n - 1).setConstant(inv_sqrt_n);
  return q;
}

Reduction reduction(const Graph& g) {
  if (!g.is_connected()) {
    throw PreconditionError("orthogonal reduction requires a connected graph");
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  Reduction r;
  r.q = consensus_basis(n);
  const Eigen::MatrixXd full = r.q.transpose() * laplacian(g) * r.q;
  const Eigen::MatrixXd block = full.topLeftCorner(n - 1, n - 1);
  r.lbar1 = 0.5 * (block + block.transpose());
  return r;
}

}  // namespace consgain

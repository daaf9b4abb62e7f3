#include "consgain/oracle.hpp"

#include "consgain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace consgain {
namespace {

using Complex = std::complex<double>;

constexpr double kDcPlateau = 1e-12;

double damping_coefficient(const ModalFunction& f) {
  return f.protocol == Protocol::Absolute ? f.gains.beta() : f.gains.beta() * f.lambda;
}

// Golden-section maximisation of a unimodal f on [lo, hi].
Peak golden_max(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  int iterations = 0;
  while (hi - lo > kPeakResolution) {
    if (++iterations > 500) {
      throw NumericError("golden-section refinement did not converge");
    }
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      throw NumericError("non-finite value during peak refinement");
    }
  }
  return f1 >= f2 ? Peak{f1, x1, 0.0} : Peak{f2, x2, 0.0};
}

// Samples f on the grid, then refines every local maximum of the samples
// whose value is at least `keep_ratio` times the best sample.
Peak sweep_and_refine(const std::function<double(double)>& f, const FrequencyGrid& grid,
                      double keep_ratio) {
  const auto& pts = grid.points();
  std::vector<double> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    values[i] = f(pts[i]);
    if (!std::isfinite(values[i])) {
      throw NumericError("non-finite frequency response at v=" + std::to_string(pts[i]));
    }
  }
  const double best_sample = *std::max_element(values.begin(), values.end());

  Peak best{values.front(), 0.0, 0.0};
  const std::size_t last = pts.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const bool left_ok = i == 0 || values[i] >= values[i - 1];
    const bool right_ok = i == last || values[i] >= values[i + 1];
    if (!left_ok || !right_ok || values[i] < keep_ratio * best_sample) continue;
    if (i == 0 && values[0] > values[1]) {
      // Maximum at DC: the refinement bracket degenerates onto v = 0.
      const Peak refined = golden_max(f, 0.0, pts[1]);
      if (refined.value > best.value) best = refined;
      continue;
    }
    const double lo = pts[i == 0 ? 0 : i - 1];
    const double hi = pts[std::min(i + 1, last)];
    const Peak refined = golden_max(f, lo, hi);
    const Peak candidate = refined.value >= values[i] ? refined : Peak{values[i], pts[i], 0.0};
    if (candidate.value > best.value) best = candidate;
  }
  // A refined peak indistinguishable from the DC value is the DC plateau.
  if (values.front() >= best.value * (1.0 - kDcPlateau)) {
    best = Peak{std::max(values.front(), best.value), 0.0, 0.0};
  }
  return best;
}

// Solves (jv I - H) X = rhs in place for upper-Hessenberg H, using partial
// pivoting restricted to adjacent rows.
void solve_shifted_hessenberg(const Eigen::MatrixXd& h, double upsilon, Eigen::MatrixXcd& rhs,
                              Eigen::MatrixXcd& work) {
  const auto m = h.rows();
  work = (-h).cast<Complex>();
  work.diagonal().array() += Complex(0.0, upsilon);
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    if (std::abs(work(k + 1, k)) > std::abs(work(k, k))) {
      work.row(k).tail(m - k).swap(work.row(k + 1).tail(m - k));
      rhs.row(k).swap(rhs.row(k + 1));
    }
    const Complex pivot = work(k, k);
    if (pivot == Complex(0.0, 0.0)) {
      throw NumericError("singular resolvent at v=" + std::to_string(upsilon));
    }
    const Complex factor = work(k + 1, k) / pivot;
    if (factor != Complex(0.0, 0.0)) {
      work.row(k + 1).tail(m - k) -= factor * work.row(k).tail(m - k);
      rhs.row(k + 1) -= factor * rhs.row(k);
    }
  }
  if (work(m - 1, m - 1) == Complex(0.0, 0.0)) {
    throw NumericError("singular resolvent at v=" + std::to_string(upsilon));
  }
  for (Eigen::Index k = m - 1; k >= 0; --k) {
    for (Eigen::Index j = k + 1; j < m; ++j) {
      rhs.row(k) -= work(k, j) * rhs.row(j);
    }
    rhs.row(k) /= work(k, k);
  }
}

double largest_singular_value(const Eigen::MatrixXcd& g) {
  const Eigen::MatrixXcd gram = g.adjoint() * g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver failed on G^H G");
  }
  return std::sqrt(std::max(0.0, solver.eigenvalues()(gram.rows() - 1)));
}

}  // namespace

double eval_modal(const ModalFunction& f, double upsilon) {
  const double u2 = upsilon * upsilon;
  const double stiffness = f.gains.alpha() * f.lambda;
  const double c = damping_coefficient(f);
  const double gap = stiffness - u2;
  return (1.0 + u2) / (gap * gap + c * c * u2);
}

double quartic_residual(const ModalFunction& f, double upsilon) {
  const double u2 = upsilon * upsilon;
  const double s = f.gains.alpha() * f.lambda;
  const double c = damping_coefficient(f);
  const double value = u2 * u2 + 2.0 * u2 + c * c - s * s - 2.0 * s;
  const double scale = u2 * u2 + 2.0 * u2 + c * c + s * s + 2.0 * s;
  return std::abs(value) / scale;
}

FrequencyGrid::FrequencyGrid(double upper, std::size_t points) {
  if (!(upper > 0.0) || !std::isfinite(upper)) {
    throw ParameterError("frequency grid upper bound must be positive");
  }
  if (points < 8) {
    throw ParameterError("frequency grid needs at least 8 points");
  }
  const std::size_t linear = points / 2;
  const std::size_t logarithmic = points - linear;
  points_.reserve(points + 1);
  for (std::size_t i = 0; i < linear; ++i) {
    points_.push_back(upper * static_cast<double>(i) / static_cast<double>(linear - 1));
  }
  // Six decades below the upper bound.
  const double log_lo = std::log10(upper) - 6.0;
  const double log_hi = std::log10(upper);
  for (std::size_t i = 0; i < logarithmic; ++i) {
    const double e = log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                  static_cast<double>(logarithmic - 1);
    points_.push_back(std::pow(10.0, e));
  }
  points_.back() = upper;
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

FrequencyGrid FrequencyGrid::for_mode(const ModalFunction& f, std::size_t points) {
  const double a = f.gains.alpha();
  const double b = f.gains.beta();
  return FrequencyGrid(10.0 * (1.0 + a * f.lambda + b * (1.0 + f.lambda)), points);
}

Peak modal_peak(const ModalFunction& f) { return modal_peak(f, FrequencyGrid::for_mode(f)); }

Peak modal_peak(const ModalFunction& f, const FrequencyGrid& grid) {
  if (!(f.lambda > 0.0)) {
    throw ParameterError("modal eigenvalue must be positive");
  }
  // A single mode has one peak; refine only the best bracket.
  Peak p = sweep_and_refine([&f](double v) { return eval_modal(f, v); }, grid, 1.0);
  p.residual = p.frequency > 0.0 ? quartic_residual(f, p.frequency) : 0.0;
  return p;
}

ModalNorm hinf_modal(const Spectrum& spec, Protocol protocol, const Gains& gains) {
  if (!spec.connected) {
    throw PreconditionError("modal H-infinity norm requires a connected graph");
  }
  ModalNorm norm;
  norm.value = -1.0;
  for (Eigen::Index i = 1; i < spec.eigenvalues.size(); ++i) {
    const ModalFunction f{protocol, spec.eigenvalues(i), gains};
    const Peak p = modal_peak(f);
    norm.max_residual = std::max(norm.max_residual, p.residual);
    const double value = std::sqrt(p.value);
    if (value > norm.value) {
      norm.value = value;
      norm.frequency = p.frequency;
      norm.mode = static_cast<std::size_t>(i);
    }
  }
  return norm;
}

Eigen::MatrixXd mean_projector(Eigen::Index n) {
  return Eigen::MatrixXd::Identity(n, n) -
         Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

StateSpace build_state_space(const Graph& g, Protocol protocol, const Gains& gains) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd l = laplacian(g);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  StateSpace ss;
  ss.a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  ss.a.topRightCorner(n, n) = id;
  ss.a.bottomLeftCorner(n, n) = -gains.alpha() * l;
  ss.a.bottomRightCorner(n, n) =
      protocol == Protocol::Absolute ? Eigen::MatrixXd(-gains.beta() * id)
                                     : Eigen::MatrixXd(-gains.beta() * l);
  ss.b = Eigen::MatrixXd::Zero(2 * n, n);
  ss.b.bottomRows(n) = id;
  const Eigen::MatrixXd phi = mean_projector(n);
  ss.c = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  ss.c.topLeftCorner(n, n) = phi;
  ss.c.bottomRightCorner(n, n) = phi;
  return ss;
}

StateSpace reduce_consensus_mode(const StateSpace& ss) {
  const auto two_n = ss.a.rows();
  if (two_n % 2 != 0 || ss.a.cols() != two_n || ss.b.rows() != two_n || ss.c.cols() != two_n) {
    throw ParameterError("state-space model has inconsistent dimensions");
  }
  const auto n = two_n / 2;
  const Eigen::MatrixXd q = consensus_basis(n);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(two_n, two_n);
  t.topLeftCorner(n, n) = q;
  t.bottomRightCorner(n, n) = q;

  const Eigen::MatrixXd a = t.transpose() * ss.a * t;
  const Eigen::MatrixXd b = t.transpose() * ss.b;
  const Eigen::MatrixXd c = ss.c * t;

  std::vector<Eigen::Index> keep;
  std::vector<Eigen::Index> drop{n - 1, two_n - 1};
  for (Eigen::Index i = 0; i < n - 1; ++i) keep.push_back(i);
  for (Eigen::Index i = n; i < two_n - 1; ++i) keep.push_back(i);

  // The dropped pair must neither drive the kept states nor reach the output.
  const double scale = std::max(1.0, ss.a.cwiseAbs().maxCoeff());
  for (const auto d : drop) {
    for (const auto k : keep) {
      if (std::abs(a(k, d)) > 1e-9 * scale) {
        throw PreconditionError("consensus direction is coupled into the error dynamics");
      }
    }
    if (c.col(d).cwiseAbs().maxCoeff() > 1e-9) {
      throw PreconditionError("output does not annihilate the consensus direction");
    }
  }

  const auto m = static_cast<Eigen::Index>(keep.size());
  StateSpace r;
  r.a.resize(m, m);
  r.b.resize(m, ss.b.cols());
  r.c.resize(ss.c.rows(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) r.a(i, j) = a(keep[i], keep[j]);
    r.b.row(i) = b.row(keep[i]);
    r.c.col(i) = c.col(keep[i]);
  }
  return r;
}

FrequencyGrid default_grid(const StateSpace& ss, std::size_t points) {
  const double row_norm = ss.a.cwiseAbs().rowwise().sum().maxCoeff();
  return FrequencyGrid(10.0 * (1.0 + row_norm), points);
}

Peak hinf_fullmatrix(const StateSpace& ss) { return hinf_fullmatrix(ss, default_grid(ss)); }

Peak hinf_fullmatrix(const StateSpace& ss, const FrequencyGrid& grid) {
  const StateSpace reduced = reduce_consensus_mode(ss);

  Eigen::EigenSolver<Eigen::MatrixXd> poles(reduced.a, false);
  if (poles.info() != Eigen::Success) {
    throw NumericError("eigensolver failed on the reduced system matrix");
  }
  const double abscissa = poles.eigenvalues().real().maxCoeff();
  if (!(abscissa < 0.0)) {
    throw PreconditionError(
        "reduced closed loop is not asymptotically stable (graph disconnected?)");
  }

  Eigen::HessenbergDecomposition<Eigen::MatrixXd> hess(reduced.a);
  const Eigen::MatrixXd h = hess.matrixH();
  const Eigen::MatrixXd u = hess.matrixQ();
  const Eigen::MatrixXcd b_hat = (u.transpose() * reduced.b).cast<Complex>();
  const Eigen::MatrixXcd c_hat = (reduced.c * u).cast<Complex>();

  Eigen::MatrixXcd x;
  Eigen::MatrixXcd work;
  auto response = [&](double v) {
    x = b_hat;
    solve_shifted_hessenberg(h, v, x, work);
    return largest_singular_value(c_hat * x);
  };
  return sweep_and_refine(response, grid, 0.05);
}

double frequency_response_gain(const StateSpace& ss, double upsilon) {
  Eigen::MatrixXcd resolvent = (-ss.a).cast<Complex>();
  resolvent.diagonal().array() += Complex(0.0, upsilon);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(resolvent);
  if (!lu.isInvertible()) {
    throw NumericError("jvI - A is singular at v=" + std::to_string(upsilon));
  }
  const Eigen::MatrixXcd g = ss.c.cast<Complex>() * lu.solve(ss.b.cast<Complex>());
  return largest_singular_value(g);
}

}  // namespace consgain

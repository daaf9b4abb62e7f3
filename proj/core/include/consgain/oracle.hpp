#pragma once

#include "consgain/gain.hpp"
#include "consgain/graph.hpp"
#include "consgain/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace consgain {

// Brute-force H-infinity computations. Nothing here uses the closed-form
// gains; the functions sweep frequency and refine numerically.

/// Squared magnitude of one decoupled mode as a function of frequency.
struct ModalFunction {
  Protocol protocol = Protocol::Absolute;
  double lambda = 1.0;  // modal Laplacian eigenvalue, > 0
  Gains gains{1.0, 1.0};
};

/// delta(v) = (1+v^2) / ((a l - v^2)^2 + (b v)^2)      (Absolute)
/// theta(v) = (1+v^2) / ((a l - v^2)^2 + (b l v)^2)    (Relative)
[[nodiscard]] double eval_modal(const ModalFunction& f, double upsilon);

/// Left-hand side of the stationarity quartic v^4 + 2v^2 + c^2 - (a l)^2 - 2 a l,
/// c = b (Absolute) or b l (Relative), divided by the sum of its term magnitudes.
[[nodiscard]] double quartic_residual(const ModalFunction& f, double upsilon);

/// Frequency grid: a hybrid of linear and log spacing on [0, upper].
class FrequencyGrid {
 public:
  static constexpr std::size_t kDefaultPoints = 100'000;

  explicit FrequencyGrid(double upper, std::size_t points = kDefaultPoints);

  /// Upper bound 10 (1 + a l + b (1 + l)) used for a single mode.
  [[nodiscard]] static FrequencyGrid for_mode(const ModalFunction& f,
                                              std::size_t points = kDefaultPoints);

  [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
  [[nodiscard]] double upper() const noexcept { return points_.back(); }

 private:
  std::vector<double> points_;
};

/// Resolution to which golden-section refinement brackets the peak.
inline constexpr double kPeakResolution = 1e-10;

struct Peak {
  double value = 0.0;      // supremum of the swept function
  double frequency = 0.0;  // where it is attained (0 when the maximum is at DC)
  double residual = 0.0;   // scaled stationarity-quartic residual (modal peaks only)
};

/// Maximum scaled quartic residual accepted at a refined modal peak.
inline constexpr double kQuarticTolerance = 1e-6;

/// Sup of f over v >= 0: dense grid, then golden-section refinement of the
/// best bracket. The stationarity quartic is not used to locate the peak;
/// its residual at the refined frequency is reported for cross-checking.
/// Throws NumericError on non-finite samples.
[[nodiscard]] Peak modal_peak(const ModalFunction& f);
[[nodiscard]] Peak modal_peak(const ModalFunction& f, const FrequencyGrid& grid);

struct ModalNorm {
  double value = 0.0;       // max_i sqrt(peak_i)
  double frequency = 0.0;   // peak frequency of the dominant mode
  std::size_t mode = 1;     // index into Spectrum::eigenvalues of the dominant mode
  double max_residual = 0.0;  // worst quartic residual over all refined modes
};

/// H-infinity norm as the maximum modal peak over lambda_2..lambda_n.
[[nodiscard]] ModalNorm hinf_modal(const Spectrum& spec, Protocol protocol, const Gains& gains);

/// Closed-loop system  [x'; v'] = A [x; v] + B w,  y = C [x; v].
struct StateSpace {
  Eigen::MatrixXd a;  // 2n x 2n
  Eigen::MatrixXd b;  // 2n x n
  Eigen::MatrixXd c;  // 2n x 2n, block-diag(Phi_n, Phi_n)
};

/// Phi_n = I - 1 1^T / n.
[[nodiscard]] Eigen::MatrixXd mean_projector(Eigen::Index n);

[[nodiscard]] StateSpace build_state_space(const Graph& g, Protocol protocol, const Gains& gains);

/// Observable, asymptotically stable part of a consensus state-space model,
/// obtained by rotating both position and velocity blocks with the consensus
/// basis and dropping the (1/sqrt(n)) coordinate pair.
[[nodiscard]] StateSpace reduce_consensus_mode(const StateSpace& ss);

/// Grid size for the transfer-matrix sweep. Every local maximum of the grid
/// samples within a factor 20 of the best one is refined, which keeps the
/// coarser grid from missing lightly damped resonances.
inline constexpr std::size_t kFullMatrixPoints = 5'000;

/// Sweep bound 10 (1 + ||A||_inf) for a full state-space model.
[[nodiscard]] FrequencyGrid default_grid(const StateSpace& ss,
                                         std::size_t points = kFullMatrixPoints);

/// sup over the grid (plus refinement) of sigma_max(C (jvI - A)^{-1} B),
/// evaluated on the reduced model through a Hessenberg form of A.
/// Throws PreconditionError when the reduced system is not Hurwitz
/// (disconnected graph).
[[nodiscard]] Peak hinf_fullmatrix(const StateSpace& ss, const FrequencyGrid& grid);
[[nodiscard]] Peak hinf_fullmatrix(const StateSpace& ss);

/// sigma_max(C (jvI - A)^{-1} B) of the given model at a single frequency.
[[nodiscard]] double frequency_response_gain(const StateSpace& ss, double upsilon);

}  // namespace consgain

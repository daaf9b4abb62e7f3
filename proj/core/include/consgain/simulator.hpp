#pragma once

#include "consgain/gain.hpp"
#include "consgain/graph.hpp"
#include "consgain/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace consgain {

enum class DisturbanceKind { TruncatedSine, Pulse, FilteredNoise };

[[nodiscard]] std::string_view to_string(DisturbanceKind k);

/// Finite-energy disturbance w(t) = amplitude * profile(t) * weights, zero
/// for t > t_on.
///
/// TruncatedSine: sin(v t), faded to zero by a half-cosine over the last 5%
///   of t_on; v = 0 gives a constant with the same fade.
/// Pulse: rectangular, constant over [0, t_on].
/// FilteredNoise: independent unit white noise per channel through a
///   first-order low-pass with cutoff 10 * bandwidth, scaled by the channel
///   weight; deterministic in `seed`.
struct Disturbance {
  DisturbanceKind kind = DisturbanceKind::TruncatedSine;
  double frequency = 0.0;   // rad/s, TruncatedSine
  double bandwidth = 1.0;   // rad/s, FilteredNoise
  double t_on = 1.0;        // s
  double amplitude = 1.0;
  Eigen::VectorXd weights;  // one per agent
  std::uint64_t seed = 42;
};

struct SimOptions {
  /// Keep every sample; when false only energies and the final state survive.
  bool keep_trajectories = true;
};

/// Sampled closed-loop run. Row k of each matrix is the sample at times[k].
struct SimTrace {
  std::vector<double> times;
  Eigen::MatrixXd x, v, y_x, y_v, omega;
  Eigen::VectorXd final_x, final_v;
  double energy_in = 0.0;   // trapezoid of w^T w
  double energy_out = 0.0;  // trapezoid of y^T y
  /// Largest |sum_i y_x,i| or |sum_i y_v,i| over all samples.
  double max_mean_residual = 0.0;
};

/// Largest allowed dt * ||A||_2.
inline constexpr double kStabilityLimit = 0.1;

/// Fixed-step classical RK4 integration of the closed loop.
/// Throws PreconditionError for disconnected graphs, ParameterError for
/// dt <= 0, horizon < t_on, mismatched vector sizes or dt * ||A||_2 > 0.1,
/// and NumericError if the state becomes non-finite.
[[nodiscard]] SimTrace simulate(const Graph& g, Protocol protocol, const Gains& gains,
                                const Disturbance& dist, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& v0, double horizon, double dt,
                                const SimOptions& options = {});

/// ||A||_2 of the closed-loop system matrix.
[[nodiscard]] double system_norm(const Graph& g, Protocol protocol, const Gains& gains);

/// Largest step satisfying the stability guard.
[[nodiscard]] double max_stable_dt(const Graph& g, Protocol protocol, const Gains& gains);

/// sqrt(energy_out / energy_in); throws DomainError when energy_in is zero.
[[nodiscard]] double empirical_gain(const SimTrace& trace);

/// Sine at the analytic worst-case frequency shaped along the Fiedler vector.
/// t_on covers 40 periods (200 s for a zero frequency).
[[nodiscard]] Disturbance worst_case_disturbance(const Graph& g, Protocol protocol,
                                                 const Gains& gains, const Spectrum& spec);

/// CSV: t, x_1..x_n, v_1..v_n, yx_1..yx_n, yv_1..yv_n, omega_1..omega_n
[[nodiscard]] std::string to_csv(const SimTrace& trace);
/// {"energy_in", "energy_out", "empirical_gain"}
[[nodiscard]] std::string summary_json(const SimTrace& trace);

}  // namespace consgain

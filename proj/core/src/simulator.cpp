#include "consgain/simulator.hpp"

#include "consgain/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace consgain {
namespace {

constexpr double kFadeFraction = 0.05;

// Evaluates w(t) for a Disturbance. Noise is pre-sampled on the integration
// grid and linearly interpolated in between.
class DisturbanceSignal {
 public:
  DisturbanceSignal(const Disturbance& d, Eigen::Index n, double dt) : d_(d), dt_(dt) {
    if (d.weights.size() != n) {
      throw ParameterError("disturbance weights must have one entry per agent");
    }
    if (!(d.t_on >= 0.0) || !std::isfinite(d.t_on)) {
      throw ParameterError("disturbance duration must be nonnegative");
    }
    if (d.kind == DisturbanceKind::FilteredNoise) {
      if (!(d.bandwidth > 0.0)) {
        throw ParameterError("noise bandwidth must be positive");
      }
      const auto samples = static_cast<Eigen::Index>(std::ceil(d.t_on / dt)) + 2;
      noise_.resize(samples, n);
      std::mt19937_64 rng(d.seed);
      std::normal_distribution<double> white(0.0, 1.0);
      const double decay = std::exp(-10.0 * d.bandwidth * dt);
      Eigen::RowVectorXd state = Eigen::RowVectorXd::Zero(n);
      for (Eigen::Index k = 0; k < samples; ++k) {
        noise_.row(k) = state;
        for (Eigen::Index i = 0; i < n; ++i) {
          state(i) = decay * state(i) + (1.0 - decay) * white(rng);
        }
      }
    }
  }

  void eval(double t, Eigen::VectorXd& out) const {
    if (t > d_.t_on) {
      out.setZero();
      return;
    }
    switch (d_.kind) {
      case DisturbanceKind::TruncatedSine: {
        const double carrier = d_.frequency > 0.0 ? std::sin(d_.frequency * t) : 1.0;
        out = (d_.amplitude * carrier * fade(t)) * d_.weights;
        return;
      }
      case DisturbanceKind::Pulse:
        out = d_.amplitude * d_.weights;
        return;
      case DisturbanceKind::FilteredNoise: {
        const double pos = t / dt_;
        auto k = static_cast<Eigen::Index>(std::floor(pos));
        k = std::min<Eigen::Index>(k, noise_.rows() - 2);
        const double frac = pos - static_cast<double>(k);
        const Eigen::RowVectorXd sample =
            (1.0 - frac) * noise_.row(k) + frac * noise_.row(k + 1);
        out = d_.amplitude * sample.transpose().cwiseProduct(d_.weights);
        return;
      }
    }
  }

 private:
  double fade(double t) const {
    const double start = (1.0 - kFadeFraction) * d_.t_on;
    if (t <= start) return 1.0;
    const double phase = (t - start) / (kFadeFraction * d_.t_on);
    return 0.5 * (1.0 + std::cos(std::numbers::pi * phase));
  }

  const Disturbance& d_;
  double dt_;
  Eigen::MatrixXd noise_;
};

Eigen::MatrixXd system_matrix(const Graph& g, Protocol protocol, const Gains& gains) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd l = laplacian(g);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n).setIdentity();
  a.bottomLeftCorner(n, n) = -gains.alpha() * l;
  if (protocol == Protocol::Absolute) {
    a.bottomRightCorner(n, n) = -gains.beta() * Eigen::MatrixXd::Identity(n, n);
  } else {
    a.bottomRightCorner(n, n) = -gains.beta() * l;
  }
  return a;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string_view to_string(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::TruncatedSine:
      return "sine";
    case DisturbanceKind::Pulse:
      return "pulse";
    case DisturbanceKind::FilteredNoise:
      return "noise";
  }
  return "?";
}

double system_norm(const Graph& g, Protocol protocol, const Gains& gains) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(system_matrix(g, protocol, gains));
  return svd.singularValues()(0);
}

double max_stable_dt(const Graph& g, Protocol protocol, const Gains& gains) {
  return kStabilityLimit / system_norm(g, protocol, gains);
}

SimTrace simulate(const Graph& g, Protocol protocol, const Gains& gains, const Disturbance& dist,
                  const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, double horizon,
                  double dt, const SimOptions& options) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (!g.is_connected()) {
    throw PreconditionError("simulation requires a connected graph");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ParameterError("dt must be positive");
  }
  if (!(horizon >= dist.t_on) || !std::isfinite(horizon)) {
    throw ParameterError("horizon must cover the disturbance duration");
  }
  if (x0.size() != n || v0.size() != n) {
    throw ParameterError("initial states must have one entry per agent");
  }
  const double norm = system_norm(g, protocol, gains);
  if (dt * norm > kStabilityLimit) {
    throw ParameterError("dt=" + fmt(dt) + " violates the stability guard dt*||A||=" +
                         fmt(dt * norm) + " > 0.1");
  }

  const DisturbanceSignal signal(dist, n, dt);
  const Eigen::MatrixXd stiffness = gains.alpha() * laplacian(g);
  const Eigen::MatrixXd damping = protocol == Protocol::Absolute
                                      ? Eigen::MatrixXd(gains.beta() * Eigen::MatrixXd::Identity(n, n))
                                      : Eigen::MatrixXd(gains.beta() * laplacian(g));

  const auto steps = static_cast<Eigen::Index>(std::ceil(horizon / dt - 1e-9));
  SimTrace trace;
  if (options.keep_trajectories) {
    trace.times.reserve(static_cast<std::size_t>(steps + 1));
    for (auto* m : {&trace.x, &trace.v, &trace.y_x, &trace.y_v, &trace.omega}) {
      m->resize(steps + 1, n);
    }
  }

  Eigen::VectorXd x = x0;
  Eigen::VectorXd v = v0;
  Eigen::VectorXd w(n), w_mid(n), w_end(n);
  Eigen::VectorXd kx1(n), kv1(n), kx2(n), kv2(n), kx3(n), kv3(n), kx4(n), kv4(n);
  Eigen::VectorXd xs(n), vs(n);

  auto accel = [&](const Eigen::VectorXd& px, const Eigen::VectorXd& pv, const Eigen::VectorXd& pw,
                   Eigen::VectorXd& out) {
    out.noalias() = -stiffness * px;
    out.noalias() -= damping * pv;
    out += pw;
  };

  double prev_power_in = 0.0;
  double prev_power_out = 0.0;
  auto record = [&](Eigen::Index k, double t, const Eigen::VectorXd& pw) {
    const Eigen::VectorXd yx = x.array() - x.mean();
    const Eigen::VectorXd yv = v.array() - v.mean();
    const double power_in = pw.squaredNorm();
    const double power_out = yx.squaredNorm() + yv.squaredNorm();
    if (k > 0) {
      trace.energy_in += 0.5 * dt * (prev_power_in + power_in);
      trace.energy_out += 0.5 * dt * (prev_power_out + power_out);
    }
    prev_power_in = power_in;
    prev_power_out = power_out;
    trace.max_mean_residual =
        std::max({trace.max_mean_residual, std::abs(yx.sum()), std::abs(yv.sum())});
    if (options.keep_trajectories) {
      trace.times.push_back(t);
      trace.x.row(k) = x.transpose();
      trace.v.row(k) = v.transpose();
      trace.y_x.row(k) = yx.transpose();
      trace.y_v.row(k) = yv.transpose();
      trace.omega.row(k) = pw.transpose();
    }
  };

  signal.eval(0.0, w);
  record(0, 0.0, w);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    signal.eval(t + 0.5 * dt, w_mid);
    signal.eval(t + dt, w_end);

    kx1 = v;
    accel(x, v, w, kv1);
    xs = x + 0.5 * dt * kx1;
    vs = v + 0.5 * dt * kv1;
    kx2 = vs;
    accel(xs, vs, w_mid, kv2);
    xs = x + 0.5 * dt * kx2;
    vs = v + 0.5 * dt * kv2;
    kx3 = vs;
    accel(xs, vs, w_mid, kv3);
    xs = x + dt * kx3;
    vs = v + dt * kv3;
    kx4 = vs;
    accel(xs, vs, w_end, kv4);

    x += (dt / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
    v += (dt / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);
    if (!x.allFinite() || !v.allFinite()) {
      throw NumericError("state became non-finite at t=" + fmt(t + dt));
    }
    w = w_end;
    record(k + 1, t + dt, w);
  }
  trace.final_x = x;
  trace.final_v = v;
  return trace;
}

double empirical_gain(const SimTrace& trace) {
  if (!(trace.energy_in > 0.0)) {
    throw DomainError("empirical gain undefined: disturbance carried no energy");
  }
  return std::sqrt(trace.energy_out / trace.energy_in);
}

Disturbance worst_case_disturbance(const Graph& g, Protocol protocol, const Gains& gains,
                                   const Spectrum& spec) {
  if (!g.is_connected() || !spec.connected) {
    throw PreconditionError("worst-case disturbance requires a connected graph");
  }
  const GainReport report = gain(protocol, spec.algebraic_connectivity(), gains);
  Disturbance d;
  d.kind = DisturbanceKind::TruncatedSine;
  d.frequency = report.worst_freq;
  d.t_on = report.worst_freq > 0.0
               ? std::max(200.0, 40.0 * 2.0 * std::numbers::pi / report.worst_freq)
               : 200.0;
  d.amplitude = 1.0;
  d.weights = spec.fiedler_vector();
  return d;
}

std::string to_csv(const SimTrace& trace) {
  const auto n = trace.x.cols();
  std::string out = "t";
  for (const char* prefix : {"x_", "v_", "yx_", "yv_", "omega_"}) {
    for (Eigen::Index i = 1; i <= n; ++i) {
      out += ',';
      out += prefix;
      out += std::to_string(i);
    }
  }
  out += '\n';
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    out += fmt(trace.times[k]);
    for (const auto* m : {&trace.x, &trace.v, &trace.y_x, &trace.y_v, &trace.omega}) {
      for (Eigen::Index i = 0; i < n; ++i) {
        out += ',';
        out += fmt((*m)(row, i));
      }
    }
    out += '\n';
  }
  return out;
}

std::string summary_json(const SimTrace& trace) {
  nlohmann::json doc{{"energy_in", trace.energy_in}, {"energy_out", trace.energy_out}};
  doc["empirical_gain"] =
      trace.energy_in > 0.0 ? nlohmann::json(empirical_gain(trace)) : nlohmann::json(nullptr);
  return doc.dump();
}

}  // namespace consgain

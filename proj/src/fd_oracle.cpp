#include "spectherm/fd_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "spectherm/errors.hpp"
#include "spectherm/heat_profile.hpp"

namespace spectherm {

namespace {

struct Axis1D {
  Eigen::VectorXd x;
  Eigen::MatrixXd J;         // tridiagonal operator, W/(m^3 K)
  Eigen::VectorXd g_minus;   // response to the input at the low end
  Eigen::VectorXd g_plus;    // response to the input at the high end
};

Axis1D build_axis(int n, double x0, double length, double k, bool radial, double h_minus,
                  double h_plus) {
  Axis1D a;
  const double dx = length / (n - 1);
  a.x.resize(n);
  for (int i = 0; i < n; ++i) a.x(i) = x0 + dx * i;
  a.x(n - 1) = x0 + length;
  auto inv_r = [&](int i) { return radial ? 1.0 / a.x(i) : 0.0; };

  a.J = Eigen::MatrixXd::Zero(n, n);
  a.g_minus = Eigen::VectorXd::Zero(n);
  a.g_plus = Eigen::VectorXd::Zero(n);
  const double c2 = k / (dx * dx);
  for (int i = 1; i + 1 < n; ++i) {
    const double c1 = k * inv_r(i) / (2.0 * dx);
    a.J(i, i - 1) = c2 - c1;
    a.J(i, i) = -2.0 * c2;
    a.J(i, i + 1) = c2 + c1;
  }
  // Ghost nodes eliminated with k T' = u + h T (low end), k T' = u - h T (high end).
  a.J(0, 1) = 2.0 * c2;
  a.g_minus(0) = -2.0 / dx + inv_r(0);
  a.J(0, 0) = -2.0 * c2 + h_minus * a.g_minus(0);
  a.J(n - 1, n - 2) = 2.0 * c2;
  a.g_plus(n - 1) = 2.0 / dx + inv_r(n - 1);
  a.J(n - 1, n - 1) = -2.0 * c2 - h_plus * a.g_plus(n - 1);
  return a;
}

struct Modal {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd V, Vinv;
};

Modal diagonalize(const Eigen::MatrixXd& J) {
  const Eigen::Index n = J.rows();
  Eigen::VectorXd d(n);
  d(0) = 1.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double lo = J(i + 1, i), up = J(i, i + 1);
    if (!(lo * up > 0.0)) throw OracleError("fd: operator is not symmetrisable; refine the grid");
    d(i + 1) = d(i) * std::sqrt(lo / up);
  }
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    S(i, i) = J(i, i);
    if (i + 1 < n) S(i, i + 1) = S(i + 1, i) = std::sqrt(J(i + 1, i) * J(i, i + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw OracleError("fd: eigen-decomposition failed");
  Modal m;
  m.lambda = es.eigenvalues();
  m.V = d.asDiagonal() * es.eigenvectors();
  m.Vinv = es.eigenvectors().transpose() * d.cwiseInverse().asDiagonal();
  if (!m.V.allFinite() || !m.Vinv.allFinite()) throw OracleError("fd: non-finite modal basis");
  return m;
}

Eigen::VectorXd midpoint_weights(int n) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  const double p = 0.5 * (n - 1);
  const int i0 = static_cast<int>(std::floor(p));
  const double frac = p - i0;
  e(i0) += 1.0 - frac;
  if (frac > 0.0) e(i0 + 1) += frac;
  return e;
}

Eigen::VectorXd trapezoid(const Eigen::VectorXd& x) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double h = x(i + 1) - x(i);
    w(i) += 0.5 * h;
    w(i + 1) += 0.5 * h;
  }
  return w;
}

/// Second-order differences along rows (axis 0) or columns (axis 1).
Eigen::MatrixXd gradient(const Eigen::MatrixXd& T, const Eigen::VectorXd& x, int axis) {
  const Eigen::MatrixXd F = axis == 0 ? T : Eigen::MatrixXd(T.transpose());
  const Eigen::Index n = F.rows();
  Eigen::MatrixXd G(F.rows(), F.cols());
  const double h = x(1) - x(0);
  for (Eigen::Index i = 1; i + 1 < n; ++i) G.row(i) = (F.row(i + 1) - F.row(i - 1)) / (2.0 * h);
  if (n >= 3) {
    G.row(0) = (-3.0 * F.row(0) + 4.0 * F.row(1) - F.row(2)) / (2.0 * h);
    G.row(n - 1) = (3.0 * F.row(n - 1) - 4.0 * F.row(n - 2) + F.row(n - 3)) / (2.0 * h);
  } else {
    G.row(0) = G.row(n - 1) = (F.row(n - 1) - F.row(0)) / h;
  }
  return axis == 0 ? G : Eigen::MatrixXd(G.transpose());
}

}  // namespace

void FdConfig::validate() const {
  if (n_r < 3 || n_z < 3) throw std::invalid_argument("FdConfig: need at least 3 nodes per axis");
  if (!(dt > 0.0)) throw std::invalid_argument("FdConfig: dt must be positive");
  if (record_stride < 1) throw std::invalid_argument("FdConfig: record_stride must be >= 1");
  if (metrics_stride < 0) throw std::invalid_argument("FdConfig: metrics_stride must be >= 0");
}

FdSolver::FdSolver(const CellSpec& spec, const CoolingConfig& cooling, const FdConfig& cfg)
    : spec_(spec), cfg_(cfg), inputs_(input_sides(spec.shape)) {
  spec.validate();
  cooling.validate(spec.shape);
  cfg.validate();

  const bool cyl = spec.shape == Shape::Cylindrical;
  const double x0 = cyl ? spec.R_in : 0.0;
  const double width = cyl ? spec.R_out - spec.R_in : spec.D;
  const Axis1D ar = build_axis(cfg.n_r, x0, width, spec.k_r, cyl, cooling[Side::Core].h,
                               cooling[Side::Surface].h);
  const Axis1D az = build_axis(cfg.n_z, 0.0, spec.L, spec.k_z, false, cooling[Side::Bottom].h,
                               cooling[Side::Top].h);
  r_ = ar.x;
  z_ = az.x;
  const Modal mr = diagonalize(ar.J);
  const Modal mz = diagonalize(az.J);
  Vr_ = mr.V;
  Vz_ = mz.V;

  const double rho_cp = spec.heat_capacity_density();
  const double dt = cfg.dt;
  amp_.resize(cfg.n_r, cfg.n_z);
  gain_.resize(cfg.n_r, cfg.n_z);
  for (int i = 0; i < cfg.n_r; ++i) {
    for (int j = 0; j < cfg.n_z; ++j) {
      const double lam = mr.lambda(i) + mz.lambda(j);
      if (cfg.scheme == FdScheme::CrankNicolson) {
        const double den = rho_cp - 0.5 * dt * lam;
        amp_(i, j) = (rho_cp + 0.5 * dt * lam) / den;
        gain_(i, j) = dt / den;
      } else {
        const double den = rho_cp - dt * lam;
        amp_(i, j) = rho_cp / den;
        gain_(i, j) = dt / den;
      }
    }
  }
  if (!amp_.allFinite() || !gain_.allFinite()) throw OracleError("fd: singular step operator");

  const Eigen::VectorXd ones_r = mr.Vinv * Eigen::VectorXd::Ones(cfg.n_r);
  const Eigen::VectorXd ones_z = mz.Vinv * Eigen::VectorXd::Ones(cfg.n_z);
  init_mode_ = ones_r * ones_z.transpose();
  src_q_ = init_mode_;
  for (Side s : inputs_) {
    switch (s) {
      case Side::Surface:
        src_u_.push_back((mr.Vinv * ar.g_plus) * ones_z.transpose());
        break;
      case Side::Core:
        src_u_.push_back((mr.Vinv * ar.g_minus) * ones_z.transpose());
        break;
      case Side::Top:
        src_u_.push_back(ones_r * (mz.Vinv * az.g_plus).transpose());
        break;
      case Side::Bottom:
        src_u_.push_back(ones_r * (mz.Vinv * az.g_minus).transpose());
        break;
    }
  }

  // Output functionals: surface, core, top, bottom mid-points.
  Eigen::Matrix<double, Eigen::Dynamic, 4> er = Eigen::MatrixXd::Zero(cfg.n_r, 4);
  Eigen::Matrix<double, Eigen::Dynamic, 4> ez = Eigen::MatrixXd::Zero(cfg.n_z, 4);
  const Eigen::VectorXd mid_r = midpoint_weights(cfg.n_r);
  const Eigen::VectorXd mid_z = midpoint_weights(cfg.n_z);
  er(cfg.n_r - 1, 0) = 1.0;
  ez.col(0) = mid_z;
  er(0, 1) = 1.0;
  ez.col(1) = mid_z;
  er.col(2) = mid_r;
  ez(cfg.n_z - 1, 2) = 1.0;
  er.col(3) = mid_r;
  ez(0, 3) = 1.0;
  out_r_ = Vr_.transpose() * er;
  out_z_ = Vz_.transpose() * ez;

  Eigen::VectorXd wr = trapezoid(r_);
  if (cyl) wr = wr.cwiseProduct(r_);
  const Eigen::VectorXd wz = trapezoid(z_);
  mean_total_ = wr.sum() * wz.sum();
  mean_r_ = Vr_.transpose() * wr;
  mean_z_ = Vz_.transpose() * wz;

  reset(0.0);
}

void FdSolver::reset(double T_init) {
  X_ = T_init * init_mode_;
  time_ = 0.0;
  steps_ = 0;
}

void FdSolver::step(const Eigen::VectorXd& u, double q) {
  if (u.size() != static_cast<Eigen::Index>(src_u_.size())) {
    throw std::invalid_argument("FdSolver::step: input size mismatch");
  }
  Eigen::MatrixXd s = q * src_q_;
  for (std::size_t j = 0; j < src_u_.size(); ++j) s += u(static_cast<Eigen::Index>(j)) * src_u_[j];
  X_ = amp_.cwiseProduct(X_) + gain_.cwiseProduct(s);
  ++steps_;
  time_ = static_cast<double>(steps_) * cfg_.dt;
  if (!std::isfinite(X_.sum())) throw OracleError("fd: non-finite state");
}

Eigen::Vector4d FdSolver::outputs() const {
  Eigen::Vector4d y;
  for (int o = 0; o < 4; ++o) y(o) = out_r_.col(o).dot(X_ * out_z_.col(o));
  return y;
}

double FdSolver::mean() const { return mean_r_.dot(X_ * mean_z_) / mean_total_; }

Eigen::MatrixXd FdSolver::field() const { return Vr_ * X_ * Vz_.transpose(); }

FieldGrid FdSolver::field_grid() const {
  FieldGrid g;
  g.xi = uniform_nodes(cfg_.n_r);
  g.zeta = uniform_nodes(cfg_.n_z);
  g.values = field();
  g.d_xi = gradient(g.values, r_, 0) / first_axis_scale(spec_);
  g.d_zeta = gradient(g.values, z_, 1) / second_axis_scale(spec_);
  return g;
}

ThermalMetrics FdSolver::metrics() const { return compute_metrics(field_grid(), spec_); }

FdResult fd_solve(const CellSpec& spec, const CoolingConfig& cooling, const InputSeries& inputs,
                  double horizon, const FdConfig& cfg, double T_init) {
  FdSolver solver(spec, cooling, cfg);
  solver.reset(T_init);
  const long n = step_count(cfg.dt, horizon);
  if (inputs.U.rows() != static_cast<Eigen::Index>(solver.inputs().size())) {
    throw std::invalid_argument("fd_solve: input row mismatch");
  }
  if ((inputs.U.cols() != 1 && inputs.U.cols() < n + 1) || inputs.w.empty() ||
      (inputs.w.size() != 1 && static_cast<long>(inputs.w.size()) < n + 1)) {
    throw std::invalid_argument("fd_solve: input series shorter than the horizon");
  }
  FdResult res;
  for (long k = 0; k <= n; ++k) {
    if (k % cfg.record_stride == 0) {
      res.times.push_back(solver.time());
      res.outputs.push_back(solver.outputs());
      res.T_mean.push_back(solver.mean());
    }
    if (cfg.metrics_stride > 0 && k % cfg.metrics_stride == 0) {
      res.metric_times.push_back(solver.time());
      res.metrics.push_back(solver.metrics());
    }
    if (k < n) solver.step(inputs.u_at(k), inputs.w_at(k));
  }
  res.final_field = solver.field();
  return res;
}

}  // namespace spectherm

#include "spectherm/simulate.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "spectherm/errors.hpp"
#include "spectherm/heat_profile.hpp"

namespace spectherm {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& x) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double h = x(i + 1) - x(i);
    w(i) += 0.5 * h;
    w(i + 1) += 0.5 * h;
  }
  return w;
}

Eigen::MatrixXd volume_weights(const CellSpec& spec, const Eigen::VectorXd& xi,
                               const Eigen::VectorXd& zeta) {
  Eigen::VectorXd wr = trapezoid_weights(xi);
  for (Eigen::Index i = 0; i < xi.size(); ++i) wr(i) *= volume_weight(spec, xi(i));
  return wr * trapezoid_weights(zeta).transpose();
}

}  // namespace

Eigen::VectorXd DiscreteSystem::step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                     double w) const {
  const Eigen::Index ni = Bd.cols() - 1;
  return Ad * x + Bd.leftCols(ni) * u + Bd.col(ni) * w;
}

DiscreteSystem discretize(const ReducedModel& model, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("discretize: dt must be positive");
  const Eigen::Index O = model.order();
  const Eigen::Index ni = model.n_inputs() + 1;
  const auto lu = model.G.partialPivLu();

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(O + ni, O + ni);
  aug.topLeftCorner(O, O) = lu.solve(model.A);
  aug.block(0, O, O, ni - 1) = lu.solve(model.B);
  aug.block(0, O + ni - 1, O, 1) = lu.solve(model.F);
  const Eigen::MatrixXd phi = (aug * dt).exp();
  if (!phi.allFinite()) throw InstabilityError("discretize: matrix exponential overflowed");

  DiscreteSystem sys;
  sys.dt = dt;
  sys.Ad = phi.topLeftCorner(O, O);
  sys.Bd = phi.block(0, O, O, ni);
  return sys;
}

Eigen::VectorXd uniform_nodes(int n) {
  if (n < 2) throw std::invalid_argument("uniform_nodes: need at least two nodes");
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = -1.0 + 2.0 * i / (n - 1);
  x(n - 1) = 1.0;
  return x;
}

FieldEvaluator::FieldEvaluator(const ReducedModel& model, int n_r, int n_z)
    : spec_(model.spec), M_(model.M), N_(model.N), xi_(uniform_nodes(n_r)),
      zeta_(uniform_nodes(n_z)) {
  phi_.resize(n_r, M_);
  dphi_.resize(n_r, M_);
  psi_.resize(n_z, N_);
  dpsi_.resize(n_z, N_);
  for (int i = 0; i < n_r; ++i) {
    for (int m = 0; m < M_; ++m) {
      const auto e = basis_eval_derivs(model.bases.r, m, xi_(i));
      phi_(i, m) = e.value;
      dphi_(i, m) = e.d1;
    }
  }
  for (int j = 0; j < n_z; ++j) {
    for (int n = 0; n < N_; ++n) {
      const auto e = basis_eval_derivs(model.bases.z, n, zeta_(j));
      psi_(j, n) = e.value;
      dpsi_(j, n) = e.d1;
    }
  }
  for (Side side : model.inputs) {
    Eigen::MatrixXd v(n_r, n_z), dx(n_r, n_z), dz(n_r, n_z);
    for (int i = 0; i < n_r; ++i) {
      for (int j = 0; j < n_z; ++j) {
        const auto e = eval_Tp_component_derivs(model.particular, side, xi_(i), zeta_(j));
        v(i, j) = e.value;
        dx(i, j) = e.d_xi;
        dz(i, j) = e.d_zeta;
      }
    }
    tp_.push_back(std::move(v));
    tp_dxi_.push_back(std::move(dx));
    tp_dzeta_.push_back(std::move(dz));
  }

  const Eigen::MatrixXd W = volume_weights(spec_, xi_, zeta_);
  const double total = W.sum();
  const Eigen::VectorXd wr = W.rowwise().sum();  // separable: recover factors
  const Eigen::VectorXd wz = W.colwise().sum().transpose() / wr.sum();
  const Eigen::VectorXd pr = phi_.transpose() * wr;
  const Eigen::VectorXd pz = psi_.transpose() * wz;
  mean_state_.resize(M_ * N_);
  for (int m = 0; m < M_; ++m) {
    for (int n = 0; n < N_; ++n) mean_state_(m * N_ + n) = pr(m) * pz(n) / total;
  }
  mean_input_.resize(static_cast<Eigen::Index>(tp_.size()));
  for (std::size_t s = 0; s < tp_.size(); ++s) {
    mean_input_(static_cast<Eigen::Index>(s)) = W.cwiseProduct(tp_[s]).sum() / total;
  }
}

FieldGrid FieldEvaluator::field(const Eigen::VectorXd& X, const Eigen::VectorXd& u) const {
  if (X.size() != M_ * N_ || u.size() != static_cast<Eigen::Index>(tp_.size())) {
    throw std::invalid_argument("FieldEvaluator: state or input size mismatch");
  }
  const Eigen::Map<const RowMajorMatrix> c(X.data(), M_, N_);
  FieldGrid g;
  g.xi = xi_;
  g.zeta = zeta_;
  g.values = phi_ * c * psi_.transpose();
  g.d_xi = dphi_ * c * psi_.transpose();
  g.d_zeta = phi_ * c * dpsi_.transpose();
  for (std::size_t s = 0; s < tp_.size(); ++s) {
    const double us = u(static_cast<Eigen::Index>(s));
    g.values += us * tp_[s];
    g.d_xi += us * tp_dxi_[s];
    g.d_zeta += us * tp_dzeta_[s];
  }
  return g;
}

ThermalMetrics FieldEvaluator::metrics(const Eigen::VectorXd& X, const Eigen::VectorXd& u) const {
  return compute_metrics(field(X, u), spec_);
}

double FieldEvaluator::mean(const Eigen::VectorXd& X, const Eigen::VectorXd& u) const {
  return mean_state_.dot(X) + mean_input_.dot(u);
}

FieldGrid reconstruct_field(const ReducedModel& model, const Eigen::VectorXd& X,
                            const Eigen::VectorXd& u, int n_r, int n_z) {
  return FieldEvaluator(model, n_r, n_z).field(X, u);
}

ThermalMetrics compute_metrics(const FieldGrid& grid, const CellSpec& spec) {
  if (grid.values.rows() != grid.xi.size() || grid.values.cols() != grid.zeta.size()) {
    throw std::invalid_argument("compute_metrics: grid dimensions mismatch");
  }
  const Eigen::MatrixXd W = volume_weights(spec, grid.xi, grid.zeta);
  ThermalMetrics m;
  m.T_mean = W.cwiseProduct(grid.values).sum() / W.sum();
  m.T_max = grid.values.maxCoeff();
  m.T_min = grid.values.minCoeff();
  m.dT = m.T_max - m.T_min;
  if (grid.d_xi.size() == grid.values.size()) {
    const Eigen::MatrixXd gr = first_axis_scale(spec) * grid.d_xi.cwiseAbs();
    m.dTr_max = gr.maxCoeff();
    m.dTr_mean = gr.mean();
  }
  if (grid.d_zeta.size() == grid.values.size()) {
    const Eigen::MatrixXd gz = second_axis_scale(spec) * grid.d_zeta.cwiseAbs();
    m.dTz_max = gz.maxCoeff();
    m.dTz_mean = gz.mean();
  }
  return m;
}

InputSeries InputSeries::constant(const Eigen::VectorXd& u, double w) {
  InputSeries s;
  s.U = u;
  s.w = {w};
  return s;
}

Eigen::VectorXd InputSeries::u_at(long k) const {
  return U.cols() == 1 ? Eigen::VectorXd(U.col(0)) : Eigen::VectorXd(U.col(k));
}

double InputSeries::w_at(long k) const {
  return w.size() == 1 ? w.front() : w[static_cast<std::size_t>(k)];
}

SimResult run(const ReducedModel& model, const Eigen::VectorXd& X0, const InputSeries& inputs,
              double dt, double horizon, const RunOptions& options) {
  const long n = step_count(dt, horizon);
  if (X0.size() != model.order()) throw std::invalid_argument("run: initial state size mismatch");
  if (inputs.U.rows() != model.n_inputs()) throw std::invalid_argument("run: input row mismatch");
  if (inputs.U.cols() != 1 && inputs.U.cols() < n + 1) {
    throw std::invalid_argument("run: input series shorter than the horizon");
  }
  if (inputs.w.empty() || (inputs.w.size() != 1 && static_cast<long>(inputs.w.size()) < n + 1)) {
    throw std::invalid_argument("run: heat series shorter than the horizon");
  }

  const DiscreteSystem sys = discretize(model, dt);
  std::unique_ptr<FieldEvaluator> evaluator;
  if (options.metrics_stride > 0) {
    evaluator = std::make_unique<FieldEvaluator>(model, options.grid_r, options.grid_z);
  }

  SimResult res;
  res.times.reserve(static_cast<std::size_t>(n + 1));
  res.outputs.reserve(static_cast<std::size_t>(n + 1));
  Eigen::VectorXd x = X0;
  for (long k = 0; k <= n; ++k) {
    const Eigen::VectorXd u = inputs.u_at(k);
    if (!x.allFinite()) {
      throw NumericalFailure("run: non-finite state at step " + std::to_string(k), k);
    }
    res.times.push_back(static_cast<double>(k) * dt);
    res.outputs.push_back(model.C * x + model.Dft * u);
    if (options.record_states) res.states.push_back(x);
    if (evaluator && k % options.metrics_stride == 0) {
      res.metric_times.push_back(res.times.back());
      res.metrics.push_back(evaluator->metrics(x, u));
    }
    if (k < n) x = sys.step(x, u, inputs.w_at(k));
  }
  return res;
}

Eigen::VectorXd steady_state(const ReducedModel& model, const Eigen::VectorXd& u, double w) {
  return model.A.partialPivLu().solve(-(model.B * u + model.F * w));
}

}  // namespace spectherm

#include "spectherm/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "spectherm/errors.hpp"

namespace spectherm {

namespace {

constexpr double kQuadratureAgreement = 1e-8;

struct Tabulated {
  Eigen::VectorXd x, wq;
  Eigen::MatrixXd v, d1, d2;  // node x basis index
};

Tabulated tabulate(const BasisSet& bs, const Quadrature& quad) {
  const auto K = static_cast<Eigen::Index>(quad.nodes.size());
  Tabulated t;
  t.x = Eigen::Map<const Eigen::VectorXd>(quad.nodes.data(), K);
  t.wq = Eigen::Map<const Eigen::VectorXd>(quad.weights.data(), K);
  t.v.resize(K, bs.count);
  t.d1.resize(K, bs.count);
  t.d2.resize(K, bs.count);
  for (Eigen::Index q = 0; q < K; ++q) {
    for (int k = 0; k < bs.count; ++k) {
      const auto e = basis_eval_derivs(bs, k, t.x(q));
      t.v(q, k) = e.value;
      t.d1(q, k) = e.d1;
      t.d2(q, k) = e.d2;
    }
  }
  return t;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& R, const Eigen::MatrixXd& Z) {
  Eigen::MatrixXd K(R.rows() * Z.rows(), R.cols() * Z.cols());
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    for (Eigen::Index m = 0; m < R.cols(); ++m) {
      K.block(i * Z.rows(), m * Z.cols(), Z.rows(), Z.cols()) = R(i, m) * Z;
    }
  }
  return K;
}

struct Matrices {
  Eigen::MatrixXd G, A, B, Tp;
  Eigen::VectorXd F;
};

Matrices build_matrices(const CellSpec& spec, const ModelBases& bases,
                        const ParticularComponents& pc, const std::vector<Side>& inputs,
                        const Quadrature& quad) {
  const Tabulated r = tabulate(bases.r, quad);
  const Tabulated z = tabulate(bases.z, quad);
  const Eigen::Index K = r.x.size();

  const double a1 = first_axis_scale(spec), a2 = second_axis_scale(spec);
  const double c_rr = a1 * a1 * spec.k_r;
  const double c_zz = a2 * a2 * spec.k_z;
  // w * gamma: the 1/r of the radial operator cancels against the weight.
  const double c_r = spec.shape == Shape::Cylindrical ? a1 * spec.k_r : 0.0;

  Eigen::VectorXd w(K);
  for (Eigen::Index q = 0; q < K; ++q) w(q) = volume_weight(spec, r.x(q));
  const Eigen::VectorXd rw = r.wq.cwiseProduct(w);

  const Eigen::MatrixXd R0 = r.v.transpose() * rw.asDiagonal() * r.v;
  const Eigen::MatrixXd R2 = r.v.transpose() * rw.asDiagonal() * r.d2;
  const Eigen::MatrixXd R1 = r.v.transpose() * r.wq.asDiagonal() * r.d1;
  const Eigen::MatrixXd Z0 = z.v.transpose() * z.wq.asDiagonal() * z.v;
  const Eigen::MatrixXd Z2 = z.v.transpose() * z.wq.asDiagonal() * z.d2;

  Matrices out;
  const double rho_cp = spec.heat_capacity_density();
  out.G = rho_cp * kron(R0, Z0);
  out.A = kron(c_rr * R2 + c_r * R1, Z0) + c_zz * kron(R0, Z2);

  const Eigen::VectorXd Fr = r.v.transpose() * rw;
  const Eigen::VectorXd Fz = z.v.transpose() * z.wq;
  out.F = kron(Fr, Fz);

  const Eigen::Index O = out.G.rows();
  out.B = Eigen::MatrixXd::Zero(O, static_cast<Eigen::Index>(inputs.size()));
  out.Tp = Eigen::MatrixXd::Zero(O, static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (const auto& term : pc.side_terms(inputs[j])) {
      Eigen::VectorXd fr(K), fr1(K), fr2(K), fz(K), fz2(K);
      for (Eigen::Index q = 0; q < K; ++q) {
        const auto er = eval_axis(term.f_r, bases, r.x(q));
        const auto ez = eval_axis(term.f_z, bases, z.x(q));
        fr(q) = er.value;
        fr1(q) = er.d1;
        fr2(q) = er.d2;
        fz(q) = ez.value;
        fz2(q) = ez.d2;
      }
      const Eigen::VectorXd Br_op =
          r.v.transpose() * (c_rr * rw.cwiseProduct(fr2) + c_r * r.wq.cwiseProduct(fr1));
      const Eigen::VectorXd Br0 = r.v.transpose() * rw.cwiseProduct(fr);
      const Eigen::VectorXd Bz0 = z.v.transpose() * z.wq.cwiseProduct(fz);
      const Eigen::VectorXd Bz2 = z.v.transpose() * z.wq.cwiseProduct(fz2);
      const auto col = static_cast<Eigen::Index>(j);
      out.B.col(col) += kron(Br_op, Bz0) + c_zz * kron(Br0, Bz2);
      out.Tp.col(col) += kron(Br0, Bz0);
    }
  }
  return out;
}

double relative_change(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

Eigen::MatrixXd output_matrix(const ModelBases& bases,
                              const std::vector<std::array<double, 2>>& locations) {
  const int M = bases.r.count, N = bases.z.count;
  Eigen::MatrixXd C(static_cast<Eigen::Index>(locations.size()), M * N);
  for (std::size_t i = 0; i < locations.size(); ++i) {
    for (int m = 0; m < M; ++m) {
      const double pr = basis_eval(bases.r, m, locations[i][0]);
      for (int n = 0; n < N; ++n) {
        C(static_cast<Eigen::Index>(i), m * N + n) = pr * basis_eval(bases.z, n, locations[i][1]);
      }
    }
  }
  return C;
}

ReducedModel assemble(const CellSpec& spec, const CoolingConfig& cooling, int M, int N) {
  if (M < 1 || N < 1) throw std::invalid_argument("assemble: M and N must be >= 1");
  spec.validate();
  cooling.validate(spec.shape);

  ReducedModel model;
  model.spec = spec;
  model.cooling = cooling;
  model.M = M;
  model.N = N;
  model.inputs = input_sides(spec.shape);
  model.bases = build_model_bases(spec, cooling, M, N);

  model.quad_order = default_quadrature_order(std::max(M, N) + 1);
  const Quadrature quad = gauss_quadrature(model.quad_order);
  const Quadrature fine = gauss_quadrature(2 * model.quad_order);

  const BoundaryScalars scalars = boundary_scalars(spec, cooling);
  model.particular =
      build_particular(model.bases, solve_side_coefficients(model.bases, scalars, spec, quad));

  Matrices m = build_matrices(spec, model.bases, model.particular, model.inputs, quad);
  const Matrices check = build_matrices(spec, model.bases, model.particular, model.inputs, fine);
  const double drift = std::max({relative_change(m.G, check.G), relative_change(m.A, check.A),
                                 relative_change(m.B, check.B), relative_change(m.F, check.F),
                                 relative_change(m.Tp, check.Tp)});
  if (!(drift <= kQuadratureAgreement)) {
    throw AssemblyAccuracyError("assemble: quadrature not converged (relative change " +
                                std::to_string(drift) + ")");
  }

  model.G = std::move(m.G);
  model.A = std::move(m.A);
  model.B = std::move(m.B);
  model.F = std::move(m.F);
  model.Tp_projection = std::move(m.Tp);
  model.C = output_matrix(model.bases, OutputSpec::locations());
  model.Dft = feedthrough_matrix(model.particular, OutputSpec::locations(), model.inputs);

  if (!model.G.allFinite() || !model.A.allFinite() || !model.B.allFinite()) {
    throw AssemblyAccuracyError("assemble: non-finite matrix entries");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(model.G);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw IllConditionedBasisError("assemble: mass matrix G is singular");
  }
  return model;
}

Eigen::VectorXd project_initial_state(const ReducedModel& model, double T_init,
                                      const Eigen::VectorXd& u0) {
  if (u0.size() != model.n_inputs()) {
    throw std::invalid_argument("project_initial_state: input size mismatch");
  }
  const double rho_cp = model.spec.heat_capacity_density();
  const Eigen::VectorXd rhs = rho_cp * (T_init * model.F - model.Tp_projection * u0);
  return model.G.ldlt().solve(rhs);
}

Eigen::VectorXd project_initial_state(const ReducedModel& model, double T_init,
                                      const BoundaryInput& u0) {
  return project_initial_state(model, T_init, model_input(model, u0));
}

ReducedModel reassemble_cooling(const ReducedModel& model, const CoolingConfig& cooling) {
  return assemble(model.spec, cooling, model.M, model.N);
}

Eigen::VectorXd model_input(const ReducedModel& model, const BoundaryInput& u) {
  return to_input_vector(u, model.inputs);
}

Eigen::VectorXd model_input(const ReducedModel& model, const CoolingConfig& cooling) {
  return to_input_vector(BoundaryInput::from_cooling(cooling), model.inputs);
}

}  // namespace spectherm

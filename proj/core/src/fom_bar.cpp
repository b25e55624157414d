// SPDX-License-Identifier: Apache-2.0

#include "hyperred/fom.hpp"

#include <array>
#include <cmath>

namespace hyperred {

namespace {

constexpr double kBarLength = 8.0;

// 1D visco-hyperelastic bar: quadratic line elements, 3-point Gauss
// rule, state y = (v, x). The semi-discrete system is
//   rho M dv/dt + eta L v = f_P(x),   M dx/dt - M v = 0
// with f_P the nodal force of the 1D first Piola stress
//   P(J) = nu (J - 1/J) + (K/g^2) J (J - g),   J = dx/dX.
// The left-end velocity dof is constrained to zero.
class HyperelasticBar final : public FomProblem {
 public:
  HyperelasticBar(Index n_elem, double mu, const BarMaterial& mat)
      : n_elem_(n_elem), mat_(mat) {
    require(n_elem >= 1, "bar: need at least one element");
    require(mu >= 0.0, "bar: mu must be >= 0");

    name_ = "bar";
    parameter_ = mu;
    h_ = kBarLength / static_cast<double>(n_elem);
    n_nodes_ = 2 * n_elem + 1;
    field_layout_ = {{"velocity", 0, n_nodes_}, {"position", n_nodes_, n_nodes_}};

    const double g = std::sqrt(3.0 / 5.0);
    gauss_pts_ = {-g, 0.0, g};
    gauss_wts_ = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    for (int q = 0; q < 3; ++q) {
      const double xi = gauss_pts_[q];
      shape_[q] = {0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)};
      dshape_[q] = {(xi - 0.5) * 2.0 / h_, -2.0 * xi * 2.0 / h_,
                    (xi + 0.5) * 2.0 / h_};
    }

    quadrature_.weights.resize(3 * n_elem);
    quadrature_.point_to_element.resize(3 * n_elem);
    for (Index e = 0; e < n_elem; ++e) {
      for (Index q = 0; q < 3; ++q) {
        quadrature_.weights(3 * e + q) = gauss_wts_[q] * h_ / 2.0;
        quadrature_.point_to_element[3 * e + q] = e;
      }
    }

    reference_ = Vector::LinSpaced(n_nodes_, 0.0, kBarLength);

    Matrix m_fe = Matrix::Zero(n_nodes_, n_nodes_);
    Matrix l_fe = Matrix::Zero(n_nodes_, n_nodes_);
    for (Index e = 0; e < n_elem; ++e) {
      const auto nodes = element_nodes(e);
      for (int q = 0; q < 3; ++q) {
        const double w = gauss_wts_[q] * h_ / 2.0;
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            m_fe(nodes[a], nodes[b]) += w * shape_[q][a] * shape_[q][b];
            l_fe(nodes[a], nodes[b]) += w * dshape_[q][a] * dshape_[q][b];
          }
        }
      }
    }

    const Index n = n_nodes_;
    mass_ = Matrix::Zero(2 * n, 2 * n);
    mass_.topLeftCorner(n, n) = mat.density * m_fe;
    mass_.bottomRightCorner(n, n) = m_fe;

    linear_op_ = Matrix::Zero(2 * n, 2 * n);
    linear_op_.topLeftCorner(n, n) = mat.viscosity * l_fe;
    linear_op_.bottomLeftCorner(n, n) = -m_fe;

    // Constrain the left-end velocity dof symmetrically.
    mass_.row(0).setZero();
    mass_.col(0).setZero();
    mass_(0, 0) = 1.0;
    linear_op_.row(0).setZero();

    initial_state_ = Vector::Zero(2 * n);
    for (Index j = 1; j < n; ++j) {
      initial_state_(j) = -(mu / 80.0) * std::sin(mu * reference_(j));
    }
    initial_state_.segment(n, n) = reference_;
  }

  void integrand_at_point(const Vector& state, double t, Index k,
                          PointContribution& out) const override {
    (void)t;
    const Index e = k / 3;
    const int q = static_cast<int>(k % 3);
    const auto nodes = element_nodes(e);

    // J from the displacement keeps the reference state exactly
    // stress-free.
    double jac = 1.0;
    for (int a = 0; a < 3; ++a) {
      jac += (state(n_nodes_ + nodes[a]) - reference_(nodes[a])) * dshape_[q][a];
    }
    const double stress = piola(jac);

    out.dofs.assign(nodes.begin(), nodes.end());
    out.values.resize(3);
    for (int a = 0; a < 3; ++a) {
      out.values(a) = nodes[a] == 0 ? 0.0 : -stress * dshape_[q][a];
    }
  }

  std::vector<Index> elements_adjacent_to_dof(Index dof) const override {
    const Index node = dof % n_nodes_;
    std::vector<Index> out;
    if (node % 2 == 1) {
      out.push_back(node / 2);  // element-interior node
    } else {
      const Index e = node / 2;
      if (e >= 1) out.push_back(e - 1);
      if (e < n_elem_) out.push_back(e);
    }
    return out;
  }

  std::vector<Index> points_of_element(Index element) const override {
    return {3 * element, 3 * element + 1, 3 * element + 2};
  }

 private:
  std::array<Index, 3> element_nodes(Index e) const {
    return {2 * e, 2 * e + 1, 2 * e + 2};
  }

  double piola(double jac) const {
    const double g = mat_.volume_scale;
    return mat_.shear_modulus * (jac - 1.0 / jac) +
           mat_.bulk_modulus / (g * g) * jac * (jac - g);
  }

  Index n_elem_;
  Index n_nodes_;
  BarMaterial mat_;
  double h_ = 0.0;
  Vector reference_;
  std::array<double, 3> gauss_pts_;
  std::array<double, 3> gauss_wts_;
  std::array<std::array<double, 3>, 3> shape_;
  std::array<std::array<double, 3>, 3> dshape_;
};

}  // namespace

std::unique_ptr<FomProblem> make_hyperelastic_bar(Index n_elem, double mu,
                                                  const BarMaterial& mat) {
  return std::make_unique<HyperelasticBar>(n_elem, mu, mat);
}

}  // namespace hyperred

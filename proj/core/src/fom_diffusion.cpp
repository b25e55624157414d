// SPDX-License-Identifier: Apache-2.0

#include "hyperred/fom.hpp"

#include <array>
#include <cmath>

namespace hyperred {

namespace {

// Bilinear quads on a uniform nx-by-ny grid of the unit square with a
// 2x2 Gauss rule. Local node order is counterclockwise from the
// bottom-left corner.
class NonlinearDiffusion final : public FomProblem {
 public:
  NonlinearDiffusion(Index nx, Index ny, double mu, double kappa0,
                     double kappa1)
      : nx_(nx), ny_(ny), kappa0_(kappa0), kappa1_(kappa1) {
    require(nx >= 1 && ny >= 1, "diffusion: need at least one element");
    require(mu > 0.0 && mu <= 0.5, "diffusion: mu must be in (0, 0.5]");

    name_ = "diffusion";
    parameter_ = mu;
    hx_ = 1.0 / static_cast<double>(nx);
    hy_ = 1.0 / static_cast<double>(ny);
    const Index n_nodes = (nx + 1) * (ny + 1);
    field_layout_ = {{"pressure", 0, n_nodes}};

    const double g = 1.0 / std::sqrt(3.0);
    gauss_ = {std::pair{-g, -g}, std::pair{g, -g}, std::pair{g, g},
              std::pair{-g, g}};
    for (int q = 0; q < 4; ++q) {
      const auto [xi, eta] = gauss_[q];
      shape_[q] = {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                   0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
      dshape_x_[q] = {-0.25 * (1 - eta) * 2 / hx_, 0.25 * (1 - eta) * 2 / hx_,
                      0.25 * (1 + eta) * 2 / hx_, -0.25 * (1 + eta) * 2 / hx_};
      dshape_y_[q] = {-0.25 * (1 - xi) * 2 / hy_, -0.25 * (1 + xi) * 2 / hy_,
                      0.25 * (1 + xi) * 2 / hy_, 0.25 * (1 - xi) * 2 / hy_};
    }

    const Index n_elem = nx * ny;
    quadrature_.weights = Vector::Constant(4 * n_elem, hx_ * hy_ / 4.0);
    quadrature_.point_to_element.resize(4 * n_elem);
    for (Index e = 0; e < n_elem; ++e) {
      for (Index q = 0; q < 4; ++q) quadrature_.point_to_element[4 * e + q] = e;
    }

    assemble_mass(n_nodes);
    linear_op_ = Matrix::Zero(n_nodes, n_nodes);

    initial_state_ = Vector::Zero(n_nodes);
    for (Index node = 0; node < n_nodes; ++node) {
      const auto [x, y] = node_coords(node);
      const double dist = std::max(std::abs(x - 0.5), std::abs(y - 0.5));
      if (dist < mu + 1e-12) initial_state_(node) = 1.0;
    }
  }

  void integrand_at_point(const Vector& state, double t, Index k,
                          PointContribution& out) const override {
    (void)t;
    const Index e = k / 4;
    const int q = static_cast<int>(k % 4);
    const auto nodes = element_nodes(e);

    double p = 0.0, gx = 0.0, gy = 0.0;
    for (int a = 0; a < 4; ++a) {
      const double pa = state(nodes[a]);
      p += shape_[q][a] * pa;
      gx += dshape_x_[q][a] * pa;
      gy += dshape_y_[q][a] * pa;
    }
    const double kappa = kappa0_ + kappa1_ * p;

    out.dofs.assign(nodes.begin(), nodes.end());
    out.values.resize(4);
    for (int a = 0; a < 4; ++a) {
      out.values(a) = -kappa * (gx * dshape_x_[q][a] + gy * dshape_y_[q][a]);
    }
  }

  Matrix force_jacobian(const Vector& state, double t) const override {
    (void)t;
    const Index n = state_dim();
    Matrix jac = Matrix::Zero(n, n);
    for (Index e = 0; e < nx_ * ny_; ++e) {
      const auto nodes = element_nodes(e);
      for (int q = 0; q < 4; ++q) {
        const double w = quadrature_.weights(4 * e + q);
        double p = 0.0, gx = 0.0, gy = 0.0;
        for (int a = 0; a < 4; ++a) {
          const double pa = state(nodes[a]);
          p += shape_[q][a] * pa;
          gx += dshape_x_[q][a] * pa;
          gy += dshape_y_[q][a] * pa;
        }
        const double kappa = kappa0_ + kappa1_ * p;
        for (int a = 0; a < 4; ++a) {
          const double grad_a =
              gx * dshape_x_[q][a] + gy * dshape_y_[q][a];
          for (int b = 0; b < 4; ++b) {
            const double grad_ab =
                dshape_x_[q][a] * dshape_x_[q][b] +
                dshape_y_[q][a] * dshape_y_[q][b];
            jac(nodes[a], nodes[b]) -=
                w * (kappa1_ * shape_[q][b] * grad_a + kappa * grad_ab);
          }
        }
      }
    }
    return jac;
  }

  std::vector<Index> elements_adjacent_to_dof(Index dof) const override {
    const Index ix = dof % (nx_ + 1);
    const Index iy = dof / (nx_ + 1);
    std::vector<Index> out;
    for (Index ey = iy - 1; ey <= iy; ++ey) {
      for (Index ex = ix - 1; ex <= ix; ++ex) {
        if (ex >= 0 && ex < nx_ && ey >= 0 && ey < ny_) {
          out.push_back(ey * nx_ + ex);
        }
      }
    }
    return out;
  }

  std::vector<Index> points_of_element(Index element) const override {
    return {4 * element, 4 * element + 1, 4 * element + 2, 4 * element + 3};
  }

 private:
  std::array<Index, 4> element_nodes(Index e) const {
    const Index ex = e % nx_;
    const Index ey = e / nx_;
    const Index n0 = ey * (nx_ + 1) + ex;
    return {n0, n0 + 1, n0 + nx_ + 2, n0 + nx_ + 1};
  }

  std::pair<double, double> node_coords(Index node) const {
    const Index ix = node % (nx_ + 1);
    const Index iy = node / (nx_ + 1);
    return {ix * hx_, iy * hy_};
  }

  void assemble_mass(Index n_nodes) {
    mass_ = Matrix::Zero(n_nodes, n_nodes);
    for (Index e = 0; e < nx_ * ny_; ++e) {
      const auto nodes = element_nodes(e);
      for (int q = 0; q < 4; ++q) {
        const double w = hx_ * hy_ / 4.0;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            mass_(nodes[a], nodes[b]) += w * shape_[q][a] * shape_[q][b];
          }
        }
      }
    }
  }

  Index nx_, ny_;
  double kappa0_, kappa1_;
  double hx_ = 0.0, hy_ = 0.0;
  std::array<std::pair<double, double>, 4> gauss_;
  std::array<std::array<double, 4>, 4> shape_;
  std::array<std::array<double, 4>, 4> dshape_x_;
  std::array<std::array<double, 4>, 4> dshape_y_;
};

}  // namespace

std::unique_ptr<FomProblem> make_nonlinear_diffusion(Index nx, Index ny,
                                                     double mu, double kappa0,
                                                     double kappa1) {
  return std::make_unique<NonlinearDiffusion>(nx, ny, mu, kappa0, kappa1);
}

}  // namespace hyperred

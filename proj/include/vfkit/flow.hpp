#pragma once

#include "vfkit/point.hpp"
#include "vfkit/vectorfield.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace vfkit {

struct FlowStep {
  std::size_t field = 0;
  double time = 0.0;
};

/// Composite Phi = Phi_k o ... o Phi_1: steps are applied left to right.
struct FlowWord {
  std::vector<FlowStep> steps;

  double net_time() const;
  /// Reversed steps with negated times.
  FlowWord inverse() const;
};

struct FlowOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Trajectories with ||x||_inf above this are treated as blow-up.
  double box = 1e6;
};

/// Endpoint of a word together with the accumulated Jacobian.
struct Transport {
  std::vector<double> end;
  Eigen::MatrixXd jacobian;
};

/// Flow machinery for a fixed family. Affine fields (all components of degree
/// <= 1) use closed forms; everything else integrates x' = X(x) together with
/// the variational equation J' = DX(x) J using adaptive Dormand-Prince.
class FlowEngine {
public:
  explicit FlowEngine(std::vector<VectorField> family, FlowOptions options = {});

  const std::vector<VectorField>& family() const { return family_; }
  std::size_t dim() const { return dim_; }
  bool is_affine(std::size_t field) const { return compiled_.at(field).affine; }

  /// Throws DomainExit (step 0) or IntegrationError.
  std::vector<double> flow(std::size_t field, double t, std::span<const double> p) const;

  /// Applies the word; DomainExit carries the failing step index.
  std::vector<double> apply(const FlowWord& w, std::span<const double> p) const;

  /// Applies the word starting at p and returns the endpoint with its Jacobian.
  Transport transport(const FlowWord& w, std::span<const double> p) const;

  /// (Phi_w)_* X at p: pulls p back through w, evaluates X there and carries
  /// it forward with the Jacobian of w.
  Eigen::VectorXd pushforward(const FlowWord& w, const VectorField& X,
                              std::span<const double> p) const;

private:
  struct Compiled {
    std::vector<std::vector<Expr>> jacobian;
    bool affine = false;
    bool diagonal = false;
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
  };

  void step(std::size_t field, double t, std::vector<double>& x, Eigen::MatrixXd* jac,
            std::size_t step_index) const;
  void affine_step(const Compiled& c, const VectorField& X, double t, std::vector<double>& x,
                   Eigen::MatrixXd* jac, std::size_t step_index) const;
  void integrate_step(const Compiled& c, const VectorField& X, double t, std::vector<double>& x,
                      Eigen::MatrixXd* jac, std::size_t step_index) const;

  std::vector<VectorField> family_;
  std::vector<Compiled> compiled_;
  FlowOptions options_;
  std::size_t dim_ = 0;
};

Point flow(const VectorField& X, double t, const Point& p, FlowOptions options = {});
Point apply_word(const std::vector<VectorField>& family, const FlowWord& w, const Point& p,
                 FlowOptions options = {});
Eigen::VectorXd pushforward_along_word(const std::vector<VectorField>& family, const FlowWord& w,
                                       const VectorField& X, const Point& p,
                                       FlowOptions options = {});

} // namespace vfkit

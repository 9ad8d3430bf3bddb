#include "vfkit/flow.hpp"

#include "vfkit/errors.hpp"

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vfkit {

namespace odeint = boost::numeric::odeint;

double FlowWord::net_time() const {
  double s = 0.0;
  for (const auto& st : steps) s += st.time;
  return s;
}

FlowWord FlowWord::inverse() const {
  FlowWord w;
  w.steps.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) w.steps.push_back({it->field, -it->time});
  return w;
}

namespace {

[[noreturn]] void exit_error(const VectorField& X, std::size_t step, double t) {
  std::ostringstream os;
  os << "flow of " << X.name() << " left its domain {" << X.domain().str() << "} at t=" << t
     << " (step " << step << ")";
  throw DomainExit(os.str(), step, t);
}

void check_box(std::span<const double> x, double box, const VectorField& X) {
  for (double v : x) {
    if (!std::isfinite(v) || std::fabs(v) > box)
      throw IntegrationError("flow of " + X.name() + " escaped the bounding box");
  }
}

// Earliest s in (0, |t|] at which the straight line x + s*sign(t)*b leaves an
// open half-space, or +inf.
double constant_exit_time(const VectorField& X, std::span<const double> x, const Eigen::VectorXd& b,
                          double t) {
  double first = std::numeric_limits<double>::infinity();
  const double dir = t < 0 ? -1.0 : 1.0;
  for (const auto& q : X.domain().inequalities()) {
    const double v = b(q.var - 1) * dir;
    const double gap = q.bound.get_d() - x[q.var - 1];
    // Less: need x + s v < bound, fails once s v >= gap (gap > 0).
    // Greater: need x + s v > bound, fails once s v <= gap (gap < 0).
    double s = std::numeric_limits<double>::infinity();
    if (q.rel == Inequality::Relation::Less && v > 0) s = gap / v;
    if (q.rel == Inequality::Relation::Greater && v < 0) s = gap / v;
    first = std::min(first, s);
  }
  return first;
}

} // namespace

FlowEngine::FlowEngine(std::vector<VectorField> family, FlowOptions options)
    : family_(std::move(family)), options_(options) {
  if (family_.empty()) return;
  dim_ = family_.front().dim();
  for (const auto& X : family_) {
    if (X.dim() != dim_) throw std::invalid_argument("family fields have different dimensions");
    Compiled c;
    const auto n = static_cast<Eigen::Index>(dim_);
    c.affine = X.is_polynomial() && X.degree() <= 1;
    if (c.affine) {
      c.a = Eigen::MatrixXd::Zero(n, n);
      c.b = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i < dim_; ++i) {
        for (const auto& t : X[i].terms()) {
          if (t.mono.empty()) c.b(static_cast<Eigen::Index>(i)) = t.coef.get_d();
          else c.a(static_cast<Eigen::Index>(i), t.mono[0].first - 1) = t.coef.get_d();
        }
      }
      c.diagonal = c.a.isDiagonal(0.0);
    }
    c.jacobian.assign(dim_, std::vector<Expr>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) c.jacobian[i][j] = diff(X[i], static_cast<int>(j + 1));
    compiled_.push_back(std::move(c));
  }
}

void FlowEngine::affine_step(const Compiled& c, const VectorField& X, double t,
                             std::vector<double>& x, Eigen::MatrixXd* jac,
                             std::size_t step_index) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  const bool constant = c.a.isZero(0.0);
  if (!X.domain().is_everything() && constant) {
    double s = constant_exit_time(X, x, c.b, t);
    if (s <= std::fabs(t)) exit_error(X, step_index, t < 0 ? -s : s);
  }

  auto advance = [&](double tau, std::vector<double>& y, Eigen::MatrixXd* j) {
    if (c.diagonal) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = c.a(i, i), b = c.b(i);
        const auto k = static_cast<std::size_t>(i);
        if (a == 0.0) {
          y[k] += b * tau;
        } else {
          const double e = std::exp(a * tau);
          y[k] = y[k] * e + (b / a) * std::expm1(a * tau);
        }
        if (j) j->row(i) *= std::exp(a * tau);
      }
      return;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = c.a * tau;
    m.topRightCorner(n, 1) = c.b * tau;
    Eigen::MatrixXd e = m.exp();
    Eigen::Map<Eigen::VectorXd> xv(y.data(), n);
    Eigen::VectorXd next = e.topLeftCorner(n, n) * xv + e.topRightCorner(n, 1);
    xv = next;
    if (j) *j = e.topLeftCorner(n, n) * (*j);
  };

  if (!X.domain().is_everything() && !constant) {
    // Curved affine trajectories: check the domain on a fine subdivision.
    constexpr int kSub = 64;
    for (int s = 1; s <= kSub; ++s) {
      std::vector<double> z = x;
      advance(t * s / kSub, z, nullptr);
      if (!X.domain().contains(z)) exit_error(X, step_index, t * s / kSub);
    }
  }
  advance(t, x, jac);
  check_box(x, options_.box, X);
  if (!X.domain().is_everything() && !X.domain().contains(x)) exit_error(X, step_index, t);
}

void FlowEngine::integrate_step(const Compiled& c, const VectorField& X, double t,
                                std::vector<double>& x, Eigen::MatrixXd* jac,
                                std::size_t step_index) const {
  const std::size_t n = dim_;
  using State = std::vector<double>;
  State state(jac ? n + n * n : n);
  std::copy(x.begin(), x.end(), state.begin());
  if (jac) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) state[n + i * n + j] = i == j ? 1.0 : 0.0;
  }

  auto rhs = [&](const State& s, State& ds, double /*t*/) {
    std::span<const double> xs(s.data(), n);
    for (std::size_t i = 0; i < n; ++i) ds[i] = eval(X[i], xs);
    if (!jac) return;
    Eigen::MatrixXd d(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            c.jacobian[i][j].is_zero() ? 0.0 : eval(c.jacobian[i][j], xs);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> jm(
        s.data() + n, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> djm(
        ds.data() + n, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    djm = d * jm;
  };

  auto observer = [&](const State& s, double tau) {
    std::span<const double> xs(s.data(), n);
    if (!X.domain().contains(xs)) exit_error(X, step_index, tau);
    check_box(xs, options_.box, X);
  };

  if (!X.domain().contains(std::span<const double>(x.data(), n))) exit_error(X, step_index, 0.0);
  if (t != 0.0) {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(options_.abs_tol,
                                                                             options_.rel_tol);
    const double dt0 = std::copysign(std::min(0.01, std::fabs(t)), t);
    try {
      odeint::integrate_adaptive(stepper, rhs, state, 0.0, t, dt0, observer);
    } catch (const DivisionByZero& e) {
      throw IntegrationError(std::string("flow of ") + X.name() + " hit a pole: " + e.what());
    } catch (const odeint::odeint_error& e) {
      throw IntegrationError(std::string("flow of ") + X.name() + " failed: " + e.what());
    }
  }
  std::copy(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(n), x.begin());
  if (jac) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> jm(
        state.data() + n, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    *jac = Eigen::MatrixXd(jm) * (*jac);
  }
}

void FlowEngine::step(std::size_t field, double t, std::vector<double>& x, Eigen::MatrixXd* jac,
                      std::size_t step_index) const {
  if (field >= family_.size()) throw std::out_of_range("flow word references an unknown field");
  const VectorField& X = family_[field];
  if (!X.domain().contains(x)) exit_error(X, step_index, 0.0);
  const Compiled& c = compiled_[field];
  if (c.affine) affine_step(c, X, t, x, jac, step_index);
  else integrate_step(c, X, t, x, jac, step_index);
}

std::vector<double> FlowEngine::flow(std::size_t field, double t, std::span<const double> p) const {
  std::vector<double> x(p.begin(), p.end());
  step(field, t, x, nullptr, 0);
  return x;
}

std::vector<double> FlowEngine::apply(const FlowWord& w, std::span<const double> p) const {
  if (p.size() != dim_) throw std::invalid_argument("point arity differs from family dimension");
  std::vector<double> x(p.begin(), p.end());
  for (std::size_t k = 0; k < w.steps.size(); ++k) step(w.steps[k].field, w.steps[k].time, x, nullptr, k);
  return x;
}

Transport FlowEngine::transport(const FlowWord& w, std::span<const double> p) const {
  if (p.size() != dim_) throw std::invalid_argument("point arity differs from family dimension");
  Transport out;
  out.end.assign(p.begin(), p.end());
  out.jacobian = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < w.steps.size(); ++k)
    step(w.steps[k].field, w.steps[k].time, out.end, &out.jacobian, k);
  return out;
}

Eigen::VectorXd FlowEngine::pushforward(const FlowWord& w, const VectorField& X,
                                        std::span<const double> p) const {
  std::vector<double> y = apply(w.inverse(), p);
  if (!X.domain().contains(y))
    throw DomainExit("pulled-back point lies outside the domain of " + X.name(), w.steps.size(), 0.0);
  Eigen::VectorXd v = evaluate_numeric(X, y);
  if (w.steps.empty()) return v;
  Transport tr = transport(w, y);
  return tr.jacobian * v;
}

Point flow(const VectorField& X, double t, const Point& p, FlowOptions options) {
  FlowEngine engine({X}, options);
  return Point::real(engine.flow(0, t, p.values()));
}

Point apply_word(const std::vector<VectorField>& family, const FlowWord& w, const Point& p,
                 FlowOptions options) {
  FlowEngine engine(family, options);
  return Point::real(engine.apply(w, p.values()));
}

Eigen::VectorXd pushforward_along_word(const std::vector<VectorField>& family, const FlowWord& w,
                                       const VectorField& X, const Point& p, FlowOptions options) {
  FlowEngine engine(family, options);
  return engine.pushforward(w, X, p.values());
}

} // namespace vfkit

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "pwb/error.hpp"

namespace pwb::numerics {

struct data_point {
  double x, y, weight = 1.0;
};

struct fit_options {
  int max_iterations = 200;
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
  double param_tol = 1e-10;
  double rss_tol = 1e-12;
  double jacobian_step = 1e-6;
  bool central_differences = true;
};

struct fit_result {
  std::vector<double> parameters;
  std::vector<double> standard_errors;
  double residual_sum_squares = 0.0;
  bool converged = false;
  int iterations = 0;
  std::size_t used_points = 0;
  std::vector<double> rss_history;
  Eigen::MatrixXd covariance;
};

namespace detail {

inline double finite_rss(const Eigen::VectorXd& r, std::size_t* used = nullptr) {
  double s = 0.0;
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (std::isfinite(r[i])) {
      s += r[i] * r[i];
      ++n;
    }
  if (used) *used = n;
  return s;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

// Levenberg-Marquardt on a residual vector e(p). Non-finite entries of e mark
// points masked for the current evaluation.
template <class Residuals>
fit_result minimize_residuals(Residuals&& residuals, std::vector<double> initial,
                              const fit_options& opt = {}) {
  using Eigen::Index;
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Index np = static_cast<Index>(initial.size());
  auto eval = [&](const VectorXd& p) -> VectorXd {
    std::vector<double> pv(p.data(), p.data() + p.size());
    auto r = residuals(pv);
    return detail::to_eigen(std::vector<double>(r.begin(), r.end()));
  };
  auto jacobian = [&](const VectorXd& p, const VectorXd& r0) {
    MatrixXd j(r0.size(), np);
    for (Index k = 0; k < np; ++k) {
      const double h = opt.jacobian_step * std::max(std::abs(p[k]), 1e-8);
      VectorXd pp = p, pm = p;
      pp[k] += h;
      if (opt.central_differences) {
        pm[k] -= h;
        j.col(k) = (eval(pp) - eval(pm)) / (2.0 * h);
      } else {
        j.col(k) = (eval(pp) - r0) / h;
      }
    }
    return j;
  };
  auto masked = [](const VectorXd& r, const MatrixXd& j, MatrixXd& jm, VectorXd& rm) {
    std::vector<Index> rows;
    for (Index i = 0; i < r.size(); ++i)
      if (std::isfinite(r[i]) && j.row(i).allFinite()) rows.push_back(i);
    jm.resize(static_cast<Index>(rows.size()), j.cols());
    rm.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      jm.row(static_cast<Index>(i)) = j.row(rows[i]);
      rm[static_cast<Index>(i)] = r[rows[i]];
    }
  };

  VectorXd p = detail::to_eigen(initial);
  VectorXd r = eval(p);
  fit_result out;
  std::size_t used = 0;
  double rss = detail::finite_rss(r, &used);
  if (used < static_cast<std::size_t>(np))
    throw error(errc::insufficient_data, "fewer usable residuals than parameters");
  out.rss_history.push_back(rss);
  double lambda = opt.initial_damping;
  MatrixXd jm;
  VectorXd rm;
  int it = 0;
  for (; it < opt.max_iterations && !out.converged; ++it) {
    masked(r, jacobian(p, r), jm, rm);
    if (jm.rows() < np) throw error(errc::insufficient_data, "too many masked residuals");
    Eigen::ColPivHouseholderQR<MatrixXd> qr(jm);
    if (qr.rank() < np) throw error(errc::singular_jacobian, "Jacobian is rank deficient");
    const MatrixXd a = jm.transpose() * jm;
    VectorXd d = a.diagonal().cwiseMax(1e-300);
    bool accepted = false;
    while (!accepted) {
      MatrixXd aug(jm.rows() + np, np);
      aug.topRows(jm.rows()) = jm;
      aug.bottomRows(np) = (lambda * d).cwiseSqrt().asDiagonal();
      VectorXd rhs = VectorXd::Zero(jm.rows() + np);
      rhs.head(jm.rows()) = -rm;
      const VectorXd step = aug.colPivHouseholderQr().solve(rhs);
      const VectorXd pn = p + step;
      const VectorXd rn = eval(pn);
      std::size_t un = 0;
      const double rssn = detail::finite_rss(rn, &un);
      if (step.allFinite() && std::isfinite(rssn) && rssn <= rss && un >= used) {
        const double rel_step = step.norm() / (p.norm() + 1e-300);
        const double rel_rss = (rss - rssn) / std::max(rss, 1e-300);
        p = pn;
        r = rn;
        rss = rssn;
        used = un;
        out.rss_history.push_back(rss);
        lambda = std::max(lambda / opt.damping_factor, 1e-15);
        accepted = true;
        if (rel_step < opt.param_tol || rel_rss < opt.rss_tol || rss == 0.0) out.converged = true;
      } else {
        lambda *= opt.damping_factor;
        if (lambda > 1e20) {
          out.converged = true;
          break;
        }
      }
    }
  }
  out.iterations = it;
  out.parameters.assign(p.data(), p.data() + np);
  out.residual_sum_squares = rss;
  out.used_points = used;
  masked(r, jacobian(p, r), jm, rm);
  const MatrixXd a = jm.transpose() * jm;
  Eigen::FullPivLU<MatrixXd> lu(a);
  const auto dof = static_cast<double>(jm.rows() - np);
  out.standard_errors.assign(static_cast<std::size_t>(np), 0.0);
  if (lu.isInvertible()) {
    out.covariance = lu.inverse() * (dof > 0 ? rss / dof : 0.0);
    for (Index k = 0; k < np; ++k)
      out.standard_errors[static_cast<std::size_t>(k)] = std::sqrt(std::max(out.covariance(k, k), 0.0));
  } else {
    out.covariance = MatrixXd::Constant(np, np, std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

template <class Model>
fit_result least_squares_fit(Model&& model, std::span<const data_point> data,
                             std::vector<double> initial, const fit_options& opt = {}) {
  if (data.size() < initial.size())
    throw error(errc::insufficient_data, "fewer data points than parameters");
  for (const auto& d : data)
    if (!(d.weight > 0.0)) throw error(errc::domain_error, "weights must be positive");
  auto res = [&](const std::vector<double>& p) {
    std::vector<double> e(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      e[i] = std::sqrt(data[i].weight) * (model(p, data[i].x) - data[i].y);
    return e;
  };
  return minimize_residuals(res, std::move(initial), opt);
}

}  // namespace pwb::numerics

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::Unbounded: return "unbounded";
    case SdpStatus::MaxIter: return "max-iter";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  if (block_dims.empty()) throw ContractViolation("SdpProblem: no blocks");
  if (cost.size() != block_dims.size()) {
    throw ContractViolation("SdpProblem: one cost matrix per block is required");
  }
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    if (block_dims[b] < 1) throw ContractViolation("SdpProblem: block dimension must be >= 1");
    if (cost[b].dim() != block_dims[b]) {
      throw ContractViolation("SdpProblem: cost dimension does not match block " + std::to_string(b));
    }
  }
  if (constraints.empty()) throw ContractViolation("SdpProblem: at least one constraint is required");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (!std::isfinite(c.rhs)) {
      throw ContractViolation("SdpProblem: constraint " + std::to_string(i) + " has non-finite rhs");
    }
    for (const auto& [b, a] : c.terms) {
      if (b >= block_dims.size() || a.dim() != block_dims[b]) {
        throw ContractViolation("SdpProblem: constraint " + std::to_string(i) +
                                " has a coefficient that does not match its block");
      }
    }
  }
}

MatrixXd realify(const ComplexMatrix& a) {
  const Index n = a.rows();
  const Index m = a.cols();
  MatrixXd r(2 * n, 2 * m);
  r.topLeftCorner(n, m) = a.real();
  r.topRightCorner(n, m) = a.imag();
  r.bottomLeftCorner(n, m) = -a.imag();
  r.bottomRightCorner(n, m) = a.real();
  return r;
}

ComplexMatrix complexify(const MatrixXd& r) {
  if (r.rows() % 2 != 0 || r.cols() % 2 != 0) {
    throw ContractViolation("complexify: dimensions must be even");
  }
  const Index n = r.rows() / 2;
  const Index m = r.cols() / 2;
  const MatrixXd re = 0.5 * (r.topLeftCorner(n, m) + r.bottomRightCorner(n, m));
  const MatrixXd im = 0.5 * (r.topRightCorner(n, m) - r.bottomLeftCorner(n, m));
  ComplexMatrix out(n, m);
  out.real() = re;
  out.imag() = im;
  return out;
}

RankOne extract_rank_one(const ComplexMatrix& x, double tol) {
  const HermitianEig eig = hermitian_eig(x);
  RankOne out;
  const double l1 = eig.values.size() > 0 ? eig.values(0) : 0.0;
  if (!(l1 > 0.0)) {
    out.vector = ComplexVector::Zero(x.rows());
    out.is_exact = true;
    out.ratio = 0.0;
    return out;
  }
  const double l2 = eig.values.size() > 1 ? std::max(eig.values(1), 0.0) : 0.0;
  out.ratio = l2 / l1;
  out.is_exact = out.ratio <= tol;
  out.vector = std::sqrt(l1) * eig.vectors.col(0);
  return out;
}

void write_sdp_text(const SdpProblem& p, std::ostream& os) {
  const auto put = [&os](const ComplexMatrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        os << (j ? " " : "") << m(i, j).real() << ' ' << m(i, j).imag();
      }
      os << '\n';
    }
  };
  const auto old_precision = os.precision(17);
  os << "sdp " << p.block_dims.size() << ' ' << p.constraints.size() << '\n';
  os << "blocks";
  for (Index d : p.block_dims) os << ' ' << d;
  os << '\n';
  for (std::size_t b = 0; b < p.cost.size(); ++b) {
    os << "cost " << b << '\n';
    put(p.cost[b].matrix());
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    os << "constraint " << i << ' ' << (c.sense == ConstraintSense::Equal ? "=" : ">=") << ' '
       << c.rhs << ' ' << c.terms.size() << '\n';
    for (const auto& [b, a] : c.terms) {
      os << "term " << b << '\n';
      put(a.matrix());
    }
  }
  os.precision(old_precision);
}

namespace {

struct Entry {
  Index row;
  Index col;
  double value;
};

// Realified coefficient; sparse form is used when it has few nonzeros.
struct Coef {
  std::size_t block = 0;
  MatrixXd dense;
  std::vector<Entry> entries;
  bool sparse = false;

  double dot(const MatrixXd& p) const {
    if (!sparse) return dense.cwiseProduct(p).sum();
    double s = 0.0;
    for (const auto& e : entries) s += e.value * p(e.row, e.col);
    return s;
  }

  // X * A * Zinv
  MatrixXd sandwich(const MatrixXd& x, const MatrixXd& zinv) const {
    if (!sparse) return x * dense * zinv;
    MatrixXd out = MatrixXd::Zero(x.rows(), zinv.cols());
    for (const auto& e : entries) {
      out.noalias() += e.value * x.col(e.row) * zinv.row(e.col);
    }
    return out;
  }

  void axpy(double alpha, MatrixXd& target) const {
    if (!sparse) {
      target.noalias() += alpha * dense;
      return;
    }
    for (const auto& e : entries) target(e.row, e.col) += alpha * e.value;
  }
};

struct RealConstraint {
  std::vector<Coef> terms;
  int slack = -1;
  double rhs = 0.0;
  double row_scale = 1.0;
};

Coef make_coef(std::size_t block, MatrixXd dense) {
  Coef c;
  c.block = block;
  Index nnz = 0;
  for (Index j = 0; j < dense.cols(); ++j) {
    for (Index i = 0; i < dense.rows(); ++i) {
      if (dense(i, j) != 0.0) ++nnz;
    }
  }
  if (nnz <= dense.rows()) {
    c.sparse = true;
    for (Index j = 0; j < dense.cols(); ++j) {
      for (Index i = 0; i < dense.rows(); ++i) {
        if (dense(i, j) != 0.0) c.entries.push_back({i, j, dense(i, j)});
      }
    }
  }
  c.dense = std::move(dense);
  return c;
}

// Largest alpha with X + alpha dX still PSD (infinity if unconstrained).
double max_step(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& dx) {
  MatrixXd s = chol.matrixL().solve(dx);
  s = chol.matrixL().solve(s.transpose()).transpose();
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SdpSettings& s) : problem_(p), settings_(s) { setup(); }

  SdpSolution run();

 private:
  struct Direction {
    std::vector<MatrixXd> dx, dz;
    VectorXd dy, dxl, dzl;
  };

  void setup();
  void residuals();
  Direction direction(double sigma_mu, const Direction* pred);
  MatrixXd dual_slack_update(std::size_t b, const VectorXd& dy) const;
  double primal_objective() const;
  double dual_objective() const;
  SdpSolution finish(SdpStatus status, int iter, std::string msg);

  const SdpProblem& problem_;
  SdpSettings settings_;

  std::size_t nb_ = 0;
  Index m_ = 0;
  Index nl_ = 0;
  std::vector<Index> dims_;
  std::vector<MatrixXd> c_;
  std::vector<RealConstraint> cons_;
  std::vector<std::vector<std::pair<Index, std::size_t>>> by_block_;  // (constraint, term)
  std::vector<Index> slack_owner_;
  VectorXd b_;
  double cost_scale_ = 1.0;

  std::vector<MatrixXd> x_, z_, zinv_, rd_;
  VectorXd y_, xl_, zl_, rdl_, rp_;
  std::vector<SdpIterate> log_;
};

void InteriorPoint::setup() {
  nb_ = problem_.block_dims.size();
  m_ = static_cast<Index>(problem_.constraints.size());
  dims_.resize(nb_);
  c_.resize(nb_);
  by_block_.assign(nb_, {});

  double cnorm = 0.0;
  for (std::size_t b = 0; b < nb_; ++b) {
    dims_[b] = 2 * problem_.block_dims[b];
    c_[b] = 0.5 * realify(problem_.cost[b].matrix());
    cnorm += c_[b].squaredNorm();
  }
  cnorm = std::sqrt(cnorm);
  cost_scale_ = cnorm > 0.0 ? cnorm : 1.0;
  for (auto& c : c_) c /= cost_scale_;

  cons_.resize(static_cast<std::size_t>(m_));
  b_.resize(m_);
  for (Index i = 0; i < m_; ++i) {
    const auto& src = problem_.constraints[static_cast<std::size_t>(i)];
    auto& dst = cons_[static_cast<std::size_t>(i)];
    double norm2 = 0.0;
    std::vector<MatrixXd> dense(nb_);
    for (const auto& [b, a] : src.terms) {
      const MatrixXd r = 0.5 * realify(a.matrix());
      if (dense[b].size() == 0) dense[b] = MatrixXd::Zero(r.rows(), r.cols());
      dense[b] += r;
    }
    for (const auto& d : dense) norm2 += d.size() ? d.squaredNorm() : 0.0;
    const double scale = norm2 > 0.0 ? std::sqrt(norm2) : 1.0;
    dst.row_scale = scale;
    for (std::size_t b = 0; b < nb_; ++b) {
      if (dense[b].size() == 0) continue;
      by_block_[b].emplace_back(i, dst.terms.size());
      dst.terms.push_back(make_coef(b, dense[b] / scale));
    }
    dst.rhs = src.rhs / scale;
    b_(i) = dst.rhs;
    if (src.sense == ConstraintSense::GreaterEqual) {
      dst.slack = static_cast<int>(nl_++);
      slack_owner_.push_back(i);
    }
  }

  // Scaled identity start.
  x_.resize(nb_);
  z_.resize(nb_);
  zinv_.resize(nb_);
  rd_.resize(nb_);
  for (std::size_t b = 0; b < nb_; ++b) {
    const double n = static_cast<double>(dims_[b]);
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max({10.0, std::sqrt(n), c_[b].norm()});
    for (const auto& [i, t] : by_block_[b]) {
      const auto& coef = cons_[static_cast<std::size_t>(i)].terms[t];
      const double an = coef.dense.norm();
      xi = std::max(xi, n * (1.0 + std::abs(b_(i))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    x_[b] = xi * MatrixXd::Identity(dims_[b], dims_[b]);
    z_[b] = eta * MatrixXd::Identity(dims_[b], dims_[b]);
  }
  double xi_lp = 10.0;
  for (Index i = 0; i < m_; ++i) xi_lp = std::max(xi_lp, 1.0 + std::abs(b_(i)));
  xl_ = VectorXd::Constant(nl_, xi_lp);
  zl_ = VectorXd::Constant(nl_, 10.0);
  y_ = VectorXd::Zero(m_);
}

double InteriorPoint::primal_objective() const {
  double s = 0.0;
  for (std::size_t b = 0; b < nb_; ++b) s += c_[b].cwiseProduct(x_[b]).sum();
  return s;
}

double InteriorPoint::dual_objective() const { return b_.dot(y_); }

void InteriorPoint::residuals() {
  rp_ = b_;
  for (Index i = 0; i < m_; ++i) {
    const auto& con = cons_[static_cast<std::size_t>(i)];
    double ax = 0.0;
    for (const auto& t : con.terms) ax += t.dot(x_[t.block]);
    if (con.slack >= 0) ax -= xl_(con.slack);
    rp_(i) -= ax;
  }
  for (std::size_t b = 0; b < nb_; ++b) {
    rd_[b] = c_[b] - z_[b];
    for (const auto& [i, t] : by_block_[b]) {
      cons_[static_cast<std::size_t>(i)].terms[t].axpy(-y_(i), rd_[b]);
    }
    rd_[b] = sym(rd_[b]);
  }
  rdl_.resize(nl_);
  for (Index l = 0; l < nl_; ++l) rdl_(l) = y_(slack_owner_[static_cast<std::size_t>(l)]) - zl_(l);
}

MatrixXd InteriorPoint::dual_slack_update(std::size_t b, const VectorXd& dy) const {
  MatrixXd dz = rd_[b];
  for (const auto& [i, t] : by_block_[b]) {
    cons_[static_cast<std::size_t>(i)].terms[t].axpy(-dy(i), dz);
  }
  return dz;
}

InteriorPoint::Direction InteriorPoint::direction(double sigma_mu, const Direction* pred) {
  // Schur complement M_ij = sum_b <A_ib, X_b A_jb Zinv_b> plus the slack diagonal.
  MatrixXd schur = MatrixXd::Zero(m_, m_);
  VectorXd h = VectorXd::Zero(m_);
  std::vector<MatrixXd> g(nb_);
  for (std::size_t b = 0; b < nb_; ++b) {
    const MatrixXd& x = x_[b];
    const MatrixXd& zi = zinv_[b];
    MatrixXd rc = sigma_mu * zi - x - x * rd_[b] * zi;
    if (pred) rc.noalias() -= pred->dx[b] * pred->dz[b] * zi;
    g[b] = std::move(rc);
    for (const auto& [j, tj] : by_block_[b]) {
      const MatrixXd p = cons_[static_cast<std::size_t>(j)].terms[tj].sandwich(x, zi);
      for (const auto& [i, ti] : by_block_[b]) {
        if (i < j) continue;
        schur(i, j) += cons_[static_cast<std::size_t>(i)].terms[ti].dot(p);
      }
    }
    for (const auto& [i, t] : by_block_[b]) {
      h(i) += cons_[static_cast<std::size_t>(i)].terms[t].dot(g[b]);
    }
  }
  schur = schur.selfadjointView<Eigen::Lower>();
  VectorXd corr_l = VectorXd::Zero(nl_);
  if (pred) corr_l = pred->dxl.cwiseProduct(pred->dzl);
  for (Index l = 0; l < nl_; ++l) {
    const Index i = slack_owner_[static_cast<std::size_t>(l)];
    schur(i, i) += xl_(l) / zl_(l);
    h(i) += -(sigma_mu - xl_(l) * zl_(l) - corr_l(l)) / zl_(l) + xl_(l) * rdl_(l) / zl_(l);
  }

  Direction d;
  const VectorXd rhs = rp_ - h;
  Eigen::LLT<MatrixXd> llt(schur);
  if (llt.info() == Eigen::Success) {
    d.dy = llt.solve(rhs);
  } else {
    MatrixXd reg = schur;
    reg.diagonal().array() += 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
    d.dy = reg.ldlt().solve(rhs);
  }

  d.dx.resize(nb_);
  d.dz.resize(nb_);
  for (std::size_t b = 0; b < nb_; ++b) {
    d.dz[b] = sym(dual_slack_update(b, d.dy));
    MatrixXd dx = sigma_mu * zinv_[b] - x_[b] - x_[b] * d.dz[b] * zinv_[b];
    if (pred) dx.noalias() -= pred->dx[b] * pred->dz[b] * zinv_[b];
    d.dx[b] = sym(dx);
  }
  d.dzl.resize(nl_);
  d.dxl.resize(nl_);
  for (Index l = 0; l < nl_; ++l) {
    const Index i = slack_owner_[static_cast<std::size_t>(l)];
    d.dzl(l) = rdl_(l) + d.dy(i);
    d.dxl(l) = (sigma_mu - xl_(l) * zl_(l) - corr_l(l)) / zl_(l) - xl_(l) * d.dzl(l) / zl_(l);
  }
  return d;
}

SdpSolution InteriorPoint::finish(SdpStatus status, int iter, std::string msg) {
  SdpSolution sol;
  sol.status = status;
  sol.iterations = iter;
  sol.message = std::move(msg);
  sol.primal.resize(nb_);
  double obj = 0.0;
  for (std::size_t b = 0; b < nb_; ++b) {
    ComplexMatrix xc = complexify(x_[b]);
    xc = 0.5 * (xc + xc.adjoint());
    obj += inner(problem_.cost[b].matrix(), xc);
    sol.primal[b] = std::move(xc);
  }
  sol.objective = obj;
  sol.dual.resize(m_);
  for (Index i = 0; i < m_; ++i) {
    sol.dual(i) = y_(i) * cost_scale_ / cons_[static_cast<std::size_t>(i)].row_scale;
  }
  double dobj = 0.0;
  for (Index i = 0; i < m_; ++i) dobj += problem_.constraints[static_cast<std::size_t>(i)].rhs * sol.dual(i);
  sol.dual_objective = dobj;
  const double p = primal_objective();
  const double d = dual_objective();
  sol.duality_gap = std::abs(p - d) / (1.0 + std::abs(p) + std::abs(d));
  residuals();
  double dinf2 = 0.0;
  double cn2 = 0.0;
  for (std::size_t b = 0; b < nb_; ++b) {
    dinf2 += rd_[b].squaredNorm();
    cn2 += c_[b].squaredNorm();
  }
  dinf2 += rdl_.squaredNorm();
  sol.primal_residual = rp_.norm() / (1.0 + b_.norm());
  sol.dual_residual = std::sqrt(dinf2) / (1.0 + std::sqrt(cn2));
  sol.log = std::move(log_);
  return sol;
}

SdpSolution InteriorPoint::run() {
  double n_total = static_cast<double>(nl_);
  for (Index d : dims_) n_total += static_cast<double>(d);
  double cnorm = 0.0;
  for (const auto& c : c_) cnorm += c.squaredNorm();
  cnorm = std::sqrt(cnorm);
  const double bnorm = b_.norm();

  std::vector<Eigen::LLT<MatrixXd>> xchol(nb_), zchol(nb_);
  for (int iter = 0; iter <= settings_.max_iter; ++iter) {
    for (std::size_t b = 0; b < nb_; ++b) {
      xchol[b].compute(x_[b]);
      zchol[b].compute(z_[b]);
      if (xchol[b].info() != Eigen::Success || zchol[b].info() != Eigen::Success) {
        return finish(SdpStatus::MaxIter, iter, "iterate lost positive definiteness");
      }
      zinv_[b] = zchol[b].solve(MatrixXd::Identity(dims_[b], dims_[b]));
      zinv_[b] = sym(zinv_[b]);
    }
    residuals();

    double comp = xl_.dot(zl_);
    for (std::size_t b = 0; b < nb_; ++b) comp += x_[b].cwiseProduct(z_[b]).sum();
    const double mu = comp / n_total;

    const double pobj = primal_objective();
    const double dobj = dual_objective();
    double dinf = rdl_.squaredNorm();
    for (const auto& r : rd_) dinf += r.squaredNorm();
    dinf = std::sqrt(dinf) / (1.0 + cnorm);
    const double pinf = rp_.norm() / (1.0 + bnorm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (settings_.record_log) {
      log_.push_back({iter, pobj * cost_scale_, dobj * cost_scale_, pinf, dinf, mu});
    }
    if (gap <= settings_.gap_tol && pinf <= settings_.feas_tol && dinf <= settings_.feas_tol) {
      return finish(SdpStatus::Optimal, iter, "converged");
    }
    if (dobj > settings_.divergence_threshold && dinf <= 1e-6) {
      std::ostringstream os;
      os << "primal infeasible: dual objective " << dobj << " diverges along a dual ray";
      return finish(SdpStatus::Infeasible, iter, os.str());
    }
    if (-pobj > settings_.divergence_threshold && pinf <= 1e-6) {
      std::ostringstream os;
      os << "dual infeasible: primal objective " << pobj << " diverges along a primal ray";
      return finish(SdpStatus::Unbounded, iter, os.str());
    }
    if (iter == settings_.max_iter) break;

    // Predictor.
    const Direction aff = direction(0.0, nullptr);
    double ap = 1.0, ad = 1.0;
    for (std::size_t b = 0; b < nb_; ++b) {
      ap = std::min(ap, max_step(xchol[b], aff.dx[b]));
      ad = std::min(ad, max_step(zchol[b], aff.dz[b]));
    }
    ap = std::min(ap, max_step_lp(xl_, aff.dxl));
    ad = std::min(ad, max_step_lp(zl_, aff.dzl));
    double comp_aff = (xl_ + ap * aff.dxl).dot(zl_ + ad * aff.dzl);
    for (std::size_t b = 0; b < nb_; ++b) {
      comp_aff += (x_[b] + ap * aff.dx[b]).cwiseProduct(z_[b] + ad * aff.dz[b]).sum();
    }
    const double mu_aff = std::max(comp_aff, 0.0) / n_total;
    const double sigma = std::min(1.0, std::pow(mu_aff / mu, 3.0));

    // Corrector.
    const Direction d = direction(sigma * mu, &aff);
    double sp = std::numeric_limits<double>::infinity();
    double sd = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb_; ++b) {
      sp = std::min(sp, max_step(xchol[b], d.dx[b]));
      sd = std::min(sd, max_step(zchol[b], d.dz[b]));
    }
    sp = std::min(sp, max_step_lp(xl_, d.dxl));
    sd = std::min(sd, max_step_lp(zl_, d.dzl));
    const double tau = settings_.step_fraction;
    const double alpha_p = std::min(1.0, tau * sp);
    const double alpha_d = std::min(1.0, tau * sd);

    for (std::size_t b = 0; b < nb_; ++b) {
      x_[b] = sym(x_[b] + alpha_p * d.dx[b]);
      z_[b] = sym(z_[b] + alpha_d * d.dz[b]);
    }
    xl_ += alpha_p * d.dxl;
    zl_ += alpha_d * d.dzl;
    y_ += alpha_d * d.dy;
  }
  return finish(SdpStatus::MaxIter, settings_.max_iter, "iteration limit reached");
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpSettings& settings) {
  p.validate();
  if (!(settings.gap_tol > 0.0)) throw ContractViolation("solve_sdp: gap_tol must be positive");
  InteriorPoint ipm(p, settings);
  return ipm.run();
}

}  // namespace semcom

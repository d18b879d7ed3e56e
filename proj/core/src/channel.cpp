// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

enum StreamKey : std::uint64_t { kDirect = 1, kReflect = 2, kBsIrs = 3 };

}  // namespace

void SystemConfig::validate() const {
  if (antennas < 1 || users < 1 || irs_elements < 1) {
    throw ContractViolation("SystemConfig: M, K and N must be >= 1");
  }
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw ContractViolation("SystemConfig: bandwidth must be positive");
  }
  if (static_cast<int>(noise_w.size()) != users) {
    throw ContractViolation("SystemConfig: one noise variance per user is required");
  }
  for (double s : noise_w) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ContractViolation("SystemConfig: noise variances must be positive");
    }
  }
}

SystemConfig SystemConfig::uniform(int antennas, int users, int irs_elements, double bandwidth_hz,
                                   double noise_w) {
  SystemConfig c;
  c.antennas = antennas;
  c.users = users;
  c.irs_elements = irs_elements;
  c.bandwidth_hz = bandwidth_hz;
  c.noise_w.assign(static_cast<std::size_t>(std::max(users, 0)), noise_w);
  return c;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void SystemGeometry::validate() const {
  if (distance(bs, irs) <= 0.0) throw ContractViolation("SystemGeometry: BS and IRS coincide");
  for (std::size_t k = 0; k < users.size(); ++k) {
    if (distance(users[k], bs) <= 0.0 || distance(users[k], irs) <= 0.0) {
      throw ContractViolation("SystemGeometry: user " + std::to_string(k) +
                              " coincides with the BS or the IRS");
    }
  }
}

std::vector<Point> draw_user_positions(Point center, double radius, int users,
                                       const RngStream& stream) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) {
    RngStream s = stream.fork(static_cast<std::uint64_t>(k));
    const double r = radius * std::sqrt(s.uniform());
    const double a = kTwoPi * s.uniform();
    out.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
  }
  return out;
}

void PathlossModel::validate() const {
  if (!(c0 > 0.0)) throw ContractViolation("PathlossModel: C0 must be positive");
  if (!(alpha_direct >= 0.0 && alpha_bs_irs >= 0.0 && alpha_irs_user >= 0.0)) {
    throw ContractViolation("PathlossModel: exponents must be >= 0");
  }
}

double PathlossModel::gain(double distance_m, double alpha) const {
  return c0 * std::pow(distance_m, -alpha);
}

void ChannelRealization::validate() const {
  const auto k = direct.size();
  if (reflect.size() != k || k == 0) {
    throw ContractViolation("ChannelRealization: direct and reflected links need one entry per user");
  }
  const Eigen::Index m = bs_irs.cols();
  const Eigen::Index n = bs_irs.rows();
  for (std::size_t i = 0; i < k; ++i) {
    if (direct[i].size() != m || reflect[i].size() != n) {
      throw ContractViolation("ChannelRealization: link dimensions do not match G");
    }
    if (!direct[i].allFinite() || !reflect[i].allFinite()) {
      throw ContractViolation("ChannelRealization: non-finite channel entry");
    }
  }
  if (!bs_irs.allFinite()) throw ContractViolation("ChannelRealization: non-finite entry in G");
}

IrsPhase IrsPhase::unit(const Eigen::VectorXd& theta) {
  IrsPhase p;
  p.theta = theta.unaryExpr([](double t) { return wrap_phase(t); });
  p.beta = Eigen::VectorXd::Ones(theta.size());
  return p;
}

IrsPhase IrsPhase::off(int elements) {
  IrsPhase p;
  p.theta = Eigen::VectorXd::Zero(elements);
  p.beta = Eigen::VectorXd::Zero(elements);
  return p;
}

ComplexVector IrsPhase::coefficients() const {
  ComplexVector c(theta.size());
  for (Eigen::Index n = 0; n < theta.size(); ++n) c(n) = std::polar(beta(n), theta(n));
  return c;
}

void IrsPhase::validate() const {
  if (theta.size() != beta.size()) throw ContractViolation("IrsPhase: theta and beta differ in length");
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    if (!(theta(n) >= 0.0 && theta(n) < kTwoPi)) {
      throw ContractViolation("IrsPhase: theta outside [0, 2pi)");
    }
    if (!(beta(n) >= 0.0 && beta(n) <= 1.0)) throw ContractViolation("IrsPhase: beta outside [0, 1]");
  }
}

double wrap_phase(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

ChannelRealization generate(const SystemConfig& config, const SystemGeometry& geom,
                            const PathlossModel& pl, const RngStream& stream) {
  config.validate();
  geom.validate();
  pl.validate();
  if (static_cast<int>(geom.users.size()) != config.users) {
    throw ContractViolation("generate: geometry must place every user");
  }
  const int m = config.antennas;
  const int n = config.irs_elements;
  ChannelRealization cr;
  cr.direct.resize(static_cast<std::size_t>(config.users));
  cr.reflect.resize(static_cast<std::size_t>(config.users));
  for (int k = 0; k < config.users; ++k) {
    const auto& u = geom.users[static_cast<std::size_t>(k)];
    const double gd = std::sqrt(pl.gain(distance(geom.bs, u), pl.alpha_direct));
    const double gr = std::sqrt(pl.gain(distance(geom.irs, u), pl.alpha_irs_user));
    RngStream sd = stream.fork(kDirect, static_cast<std::uint64_t>(k));
    RngStream sr = stream.fork(kReflect, static_cast<std::uint64_t>(k));
    ComplexVector hd(m), hr(n);
    for (int i = 0; i < m; ++i) hd(i) = gd * sd.cnormal();
    for (int i = 0; i < n; ++i) hr(i) = gr * sr.cnormal();
    cr.direct[static_cast<std::size_t>(k)] = std::move(hd);
    cr.reflect[static_cast<std::size_t>(k)] = std::move(hr);
  }
  const double gg = std::sqrt(pl.gain(distance(geom.bs, geom.irs), pl.alpha_bs_irs));
  RngStream sg = stream.fork(kBsIrs);
  cr.bs_irs.resize(n, m);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) cr.bs_irs(r, c) = gg * sg.cnormal();
  }
  return cr;
}

CompositeChannel compose(const ChannelRealization& cr, const IrsPhase& phi) {
  if (phi.theta.size() != cr.bs_irs.rows() || phi.beta.size() != cr.bs_irs.rows()) {
    throw ContractViolation("compose: IRS phase length does not match N");
  }
  if (cr.reflect.size() != cr.direct.size()) {
    throw ContractViolation("compose: direct and reflected links differ in user count");
  }
  const ComplexVector coef = phi.coefficients();
  CompositeChannel cc;
  cc.h.reserve(cr.direct.size());
  for (std::size_t k = 0; k < cr.direct.size(); ++k) {
    if (cr.reflect[k].size() != cr.bs_irs.rows() || cr.direct[k].size() != cr.bs_irs.cols()) {
      throw ContractViolation("compose: link dimensions do not match G");
    }
    // Row form: h_r^H diag(phi) G + h_d^H; stored as its conjugate transpose.
    const Eigen::RowVectorXcd row =
        (cr.reflect[k].adjoint().array() * coef.transpose().array()).matrix() * cr.bs_irs +
        cr.direct[k].adjoint();
    cc.h.push_back(row.adjoint());
  }
  return cc;
}

Eigen::VectorXd sinr_all(const CompositeChannel& cc, const BeamformingMatrix& w,
                         const std::vector<double>& noise_w) {
  const int k_users = cc.users();
  if (w.cols() != k_users || static_cast<int>(noise_w.size()) != k_users) {
    throw ContractViolation("sinr_all: beamformer columns and noise entries must match K");
  }
  Eigen::VectorXd out(k_users);
  for (int k = 0; k < k_users; ++k) {
    const auto& h = cc.h[static_cast<std::size_t>(k)];
    if (h.size() != w.rows()) throw ContractViolation("sinr_all: antenna count mismatch");
    const Eigen::RowVectorXcd g = h.adjoint() * w;
    const double signal = std::norm(g(k));
    double interference = 0.0;
    for (int j = 0; j < k_users; ++j) {
      if (j != k) interference += std::norm(g(j));
    }
    out(k) = signal / (interference + noise_w[static_cast<std::size_t>(k)]);
  }
  return out;
}

double rate(double sinr, double bandwidth_hz) {
  if (sinr < 0.0 || std::isnan(sinr)) throw DomainError("rate: SINR must be non-negative");
  return bandwidth_hz * std::log2(1.0 + sinr);
}

double latency(double bits, double rate_bps) {
  if (bits < 0.0) throw DomainError("latency: bit count must be non-negative");
  if (bits == 0.0) return 0.0;
  if (!(rate_bps > 0.0)) return std::numeric_limits<double>::infinity();
  return bits / rate_bps;
}

}  // namespace semcom

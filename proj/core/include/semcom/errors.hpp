// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semcom {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a documented precondition (shape mismatch, non-Hermitian input).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requested SINR targets cannot be met. Carries the users implicated by the
/// infeasibility certificate.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<int> users)
      : std::runtime_error(what), users_(std::move(users)) {}

  const std::vector<int>& users() const noexcept { return users_; }

 private:
  std::vector<int> users_;
};

/// An SDP block that should be rank one is not.
class RankOneError : public std::runtime_error {
 public:
  RankOneError(const std::string& what, int block, double ratio)
      : std::runtime_error(what), block_(block), ratio_(ratio) {}

  int block() const noexcept { return block_; }
  double eigen_ratio() const noexcept { return ratio_; }

 private:
  int block_;
  double ratio_;
};

/// Rate of some user is zero while it still has bits to send.
class InfeasibleLinkError : public std::runtime_error {
 public:
  InfeasibleLinkError(const std::string& what, std::vector<int> users)
      : std::runtime_error(what), users_(std::move(users)) {}

  const std::vector<int>& users() const noexcept { return users_; }

 private:
  std::vector<int> users_;
};

/// Configuration failed validation; every violation is listed.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace semcom

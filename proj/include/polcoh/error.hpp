/**
 *  @file   error.hpp
 *  @brief  Exception hierarchy shared by all polcoh modules.
 */

#ifndef POLCOH_ERROR_HPP
#define POLCOH_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polcoh {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A data structure failed one of its documented invariants.
class InvariantError : public Error {
  public:
    using Error::Error;
};

/// A statistic is undefined for the given input (e.g. g2 of the vacuum).
class UndefinedStatistic : public Error {
  public:
    using Error::Error;
};

class NormalizationError : public Error {
  public:
    using Error::Error;
};

/// Fock-space truncation lost more probability than allowed.
class TruncationError : public Error {
  public:
    TruncationError(const std::string& what, double deficit)
        : Error(what), deficit_(deficit) {}
    double deficit() const noexcept { return deficit_; }

  private:
    double deficit_;
};

/// Not enough samples, snapshots, bins or retained records.
class InsufficientData : public Error {
  public:
    using Error::Error;
};

/// A stochastic trajectory produced a non-finite field.
class NumericalBlowup : public Error {
  public:
    NumericalBlowup(const std::string& what, std::size_t step, std::size_t trajectory = 0)
        : Error(what), step_(step), trajectory_(trajectory) {}
    std::size_t step() const noexcept { return step_; }
    std::size_t trajectory() const noexcept { return trajectory_; }

  private:
    std::size_t step_;
    std::size_t trajectory_;
};

/// Invalid configuration; the message starts with the offending key path.
class ConfigError : public Error {
  public:
    ConfigError(const std::string& key, const std::string& what)
        : Error(key + ": " + what), key_(key) {}
    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

}  // namespace polcoh

#endif  // POLCOH_ERROR_HPP

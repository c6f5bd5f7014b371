#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace biquad {

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point (x, y) where a biquadratic form takes the value `value`.
struct FormWitness {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double value = 0.0;
};

/// Raised when an operation needs a PSD input and can prove it is not.
/// Carries either a vector v with vᵀSv < 0 (matrix case) or an (x, y) point
/// where the form is negative.
class NotPSD : public std::runtime_error {
 public:
  NotPSD(const std::string& what, Eigen::VectorXd vector_witness)
      : std::runtime_error(what), vector_witness_(std::move(vector_witness)) {}
  NotPSD(const std::string& what, FormWitness form_witness)
      : std::runtime_error(what), form_witness_(std::move(form_witness)) {}

  const Eigen::VectorXd& vector_witness() const { return vector_witness_; }
  const std::optional<FormWitness>& form_witness() const { return form_witness_; }

 private:
  Eigen::VectorXd vector_witness_;
  std::optional<FormWitness> form_witness_;
};

class CannotReduce : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPSDPointFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace biquad

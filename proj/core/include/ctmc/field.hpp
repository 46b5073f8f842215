#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "ctmc/state.hpp"

namespace ctmc {

/// Declared asymptotic properties of a scalar field.  Checkers require the
/// relevant claim before auditing (a Lyapunov inequality certificate is
/// meaningless without it); the claims themselves are caller assertions and
/// are recorded in the certificate as assumptions where they cannot be
/// audited on a finite window.
struct FieldTraits {
  bool tends_to_infinity = false;
  bool strictly_positive = false;
  /// Declared global upper bound; required by the implosion/bounded-field
  /// criteria.
  std::optional<double> bounded_by;
};

/// Deterministic scalar function of states.  Evaluation must be pure: two
/// calls on the same state return bit-identical doubles.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::string name, std::function<double(StateId)> eval, FieldTraits traits = {})
      : name_(std::move(name)), eval_(std::move(eval)), traits_(traits) {}

  double operator()(StateId x) const { return eval_(x); }
  const std::string& name() const { return name_; }
  const FieldTraits& traits() const { return traits_; }

 private:
  std::string name_;
  std::function<double(StateId)> eval_;
  FieldTraits traits_;
};

}  // namespace ctmc

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctmc/field.hpp"
#include "ctmc/model.hpp"
#include "ctmc/state.hpp"

namespace ctmc {

/// A finite, explicitly enumerated set of states.  States are stored sorted
/// by code with duplicates removed, so window enumeration order (and with it
/// every audit, witness choice, and digest) is deterministic, and growing a
/// window preserves the relative order of shared states.
class Window {
 public:
  Window() = default;
  static Window from_states(std::vector<StateId> states);

  std::span<const StateId> states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  bool contains(StateId s) const;

  /// True when audit_window verified that every window state has a positive
  /// finite rate, a normalized kernel row, and neighbors at which all the
  /// audited fields evaluate to finite values.  Certificate checkers refuse
  /// windows without this flag.
  bool generator_closed() const { return generator_closed_; }

  /// FNV-1a digest over the sorted codes; identifies the window in
  /// serialized certificates.
  std::uint64_t digest() const;

  friend Window audit_window(const Model& model, Window window,
                             std::span<const ScalarField* const> fields);

 private:
  std::vector<StateId> states_;
  bool generator_closed_ = false;
};

/// Runs the generator-closure audit and returns the window with the flag
/// set.  Throws AuditError naming the offending state when the model itself
/// is malformed on the window (nonpositive rate, kernel row off by more than
/// 1e-12); a field that fails to evaluate at some neighbor only clears the
/// flag, because that is a property of the (window, field) pair.
Window audit_window(const Model& model, Window window,
                    std::span<const ScalarField* const> fields);

/// Convenience overloads.
Window audit_window(const Model& model, Window window);
Window audit_window(const Model& model, Window window, const ScalarField& f);
Window audit_window(const Model& model, Window window, const ScalarField& f,
                    const ScalarField& g);

/// Contiguous line window {lo, ..., hi}.
Window line_window(std::int64_t lo, std::int64_t hi);

/// Members of {x in window : f(x) <= height}, in window order.
struct SublevelSet {
  double height = 0.0;
  std::vector<StateId> members;
};
SublevelSet sublevel_set(const ScalarField& f, double height, const Window& window);

}  // namespace ctmc

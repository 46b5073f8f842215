#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctmc/state.hpp"

namespace ctmc {

/// One row entry of the embedded jump kernel.
struct Transition {
  StateId to;
  double prob;
};

/// Reusable buffer for kernel rows; simulation and assembly loops pass one
/// buffer through every call to avoid per-step allocation.
using TransitionList = std::vector<Transition>;

/// Optional fast kernel for nearest-neighbour chains on the line: jumps are
/// x -> x+1 with probability p_up(x), else x -> x-1.  The batch simulator
/// uses it to step without building kernel rows.
struct LineKernel {
  std::function<double(std::int64_t)> p_up;
  std::function<double(std::int64_t)> rate;
};

/// A continuous-time Markov chain on a countable space: a positive jump rate
/// gamma_x and an embedded kernel row per state.  Rows are normalized at
/// construction; the stochasticity audit in window.hpp re-checks them to
/// 1e-12 on any window.
class Model {
 public:
  Model() = default;
  Model(std::string name, std::function<double(StateId)> rate,
        std::function<void(StateId, TransitionList&)> neighbors,
        std::vector<std::pair<std::string, double>> params = {},
        std::optional<LineKernel> line_kernel = std::nullopt)
      : name_(std::move(name)),
        rate_(std::move(rate)),
        neighbors_(std::move(neighbors)),
        params_(std::move(params)),
        line_kernel_(std::move(line_kernel)) {}

  /// Jump rate gamma_x.  Mean holding time at x is 1/gamma_x.
  double rate(StateId x) const { return rate_(x); }

  /// Writes the embedded kernel row P(x, .) into `out` (cleared first).
  /// Entry order is deterministic per model family.
  void neighbors(StateId x, TransitionList& out) const {
    out.clear();
    neighbors_(x, out);
  }

  const std::string& name() const { return name_; }

  /// Constructor parameters, in declaration order; embedded in reports so a
  /// certificate names the exact chain it audited.
  const std::vector<std::pair<std::string, double>>& params() const { return params_; }

  const LineKernel* line_kernel() const {
    return line_kernel_ ? &line_kernel_.value() : nullptr;
  }

 private:
  std::string name_;
  std::function<double(StateId)> rate_;
  std::function<void(StateId, TransitionList&)> neighbors_;
  std::vector<std::pair<std::string, double>> params_;
  std::optional<LineKernel> line_kernel_;
};

}  // namespace ctmc

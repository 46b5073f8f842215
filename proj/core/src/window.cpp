#include "ctmc/window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctmc/errors.hpp"

namespace ctmc {

namespace {
constexpr double kStochasticTolerance = 1e-12;
}

Window Window::from_states(std::vector<StateId> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  Window window;
  window.states_ = std::move(states);
  return window;
}

bool Window::contains(StateId s) const {
  return std::binary_search(states_.begin(), states_.end(), s);
}

std::uint64_t Window::digest() const {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const StateId s : states_) {
    auto bits = static_cast<std::uint64_t>(s.code);
    for (int i = 0; i < 8; ++i) {
      hash ^= (bits >> (8 * i)) & 0xffu;
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

Window audit_window(const Model& model, Window window,
                    std::span<const ScalarField* const> fields) {
  TransitionList row;
  bool closed = true;
  for (const StateId x : window.states_) {
    const double gamma = model.rate(x);
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw AuditError("audit_window: nonpositive or non-finite rate at state code " +
                       std::to_string(x.code));
    }
    model.neighbors(x, row);
    if (row.empty()) {
      throw AuditError("audit_window: empty kernel row at state code " +
                       std::to_string(x.code));
    }
    double total = 0.0;
    for (const Transition& t : row) {
      if (!(t.prob >= 0.0)) {
        throw AuditError("audit_window: negative kernel entry at state code " +
                         std::to_string(x.code));
      }
      total += t.prob;
      for (const ScalarField* field : fields) {
        double value;
        try {
          value = (*field)(t.to);
        } catch (const Error&) {
          closed = false;
          continue;
        }
        if (!std::isfinite(value)) closed = false;
      }
    }
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      throw AuditError("audit_window: kernel row sums to " + std::to_string(total) +
                       " at state code " + std::to_string(x.code));
    }
  }
  window.generator_closed_ = closed;
  return window;
}

Window audit_window(const Model& model, Window window) {
  return audit_window(model, std::move(window), std::span<const ScalarField* const>{});
}

Window audit_window(const Model& model, Window window, const ScalarField& f) {
  const ScalarField* fields[] = {&f};
  return audit_window(model, std::move(window), std::span<const ScalarField* const>{fields});
}

Window audit_window(const Model& model, Window window, const ScalarField& f,
                    const ScalarField& g) {
  const ScalarField* fields[] = {&f, &g};
  return audit_window(model, std::move(window), std::span<const ScalarField* const>{fields});
}

Window line_window(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ParameterError("line_window: lo > hi");
  std::vector<StateId> states;
  states.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t x = lo; x <= hi; ++x) states.push_back(line_state(x));
  return Window::from_states(std::move(states));
}

SublevelSet sublevel_set(const ScalarField& f, double height, const Window& window) {
  SublevelSet set;
  set.height = height;
  for (const StateId x : window.states()) {
    if (f(x) <= height) set.members.push_back(x);
  }
  return set;
}

}  // namespace ctmc

#pragma once

#include <stdexcept>
#include <string>

namespace lintegra {

// Analysis-facing failures. Each carries enough context to be rendered in a
// report without a stack trace; the CLI maps them onto exit codes.

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"),
        offset(off) {}
};

// Truncated-series arithmetic ran out of reliable coefficients.
struct PrecisionExhausted : std::runtime_error {
  int step;
  explicit PrecisionExhausted(int step_, const std::string& msg = "")
      : std::runtime_error("series precision exhausted" +
                           (msg.empty() ? "" : ": " + msg) + " at step " +
                           std::to_string(step_)),
        step(step_) {}
};

// A degree-growth orbit hit an identically-zero denominator.
struct SingularOrbit : std::runtime_error {
  int step;
  explicit SingularOrbit(int step_)
      : std::runtime_error("orbit singular at step " + std::to_string(step_)),
        step(step_) {}
};

// A homographic stage matrix became non-invertible.
struct DegenerateStage : std::runtime_error {
  long step;
  explicit DegenerateStage(long step_)
      : std::runtime_error("degenerate stage matrix at step " +
                           std::to_string(step_)),
        step(step_) {}
};

// A three-point propagation step had a vanishing leading coefficient.
struct SingularStep : std::runtime_error {
  long step;
  explicit SingularStep(long step_)
      : std::runtime_error("singular propagation step at n = " +
                           std::to_string(step_)),
        step(step_) {}
};

struct LinearisationUnavailable : std::runtime_error {
  int stage;
  explicit LinearisationUnavailable(int stage_, const std::string& why)
      : std::runtime_error("stage " + std::to_string(stage_) +
                           " cannot be linearised: " + why),
        stage(stage_) {}
};

// A quartic handed to the Chazy constructor fails the defining identity.
struct ConstraintViolated : std::runtime_error {
  std::string residual;
  explicit ConstraintViolated(const std::string& residual_)
      : std::runtime_error("quartic constraint violated, residual " +
                           residual_),
        residual(residual_) {}
};

}  // namespace lintegra

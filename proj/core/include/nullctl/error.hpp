#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullctl {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (bad dimensions, out-of-range argument, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

// Expression evaluated outside its domain of definition, or produced a non-finite value.
class DomainError : public Error {
  public:
    using Error::Error;
};

// Iteration budget exhausted, singular system, non-finite matrix input.
class NumericalError : public Error {
  public:
    using Error::Error;
};

class SynthesisError : public Error {
  public:
    using Error::Error;
};

enum class Hypothesis { H1, H2, H3, H4 };

[[nodiscard]] inline const char* to_string(Hypothesis h) {
    switch (h) {
    case Hypothesis::H1:
        return "H1";
    case Hypothesis::H2:
        return "H2";
    case Hypothesis::H3:
        return "H3";
    case Hypothesis::H4:
        return "H4";
    }
    return "?";
}

class HypothesisFailure : public Error {
  public:
    HypothesisFailure(Hypothesis which, const std::string& detail)
        : Error(std::string(to_string(which)) + " failed: " + detail), which_(which) {}

    [[nodiscard]] Hypothesis which() const noexcept { return which_; }

  private:
    Hypothesis which_;
};

class SimulationError : public Error {
  public:
    enum class Kind { StepSizeUnderflow, Divergence, DisturbanceViolation };

    SimulationError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

} // namespace nullctl

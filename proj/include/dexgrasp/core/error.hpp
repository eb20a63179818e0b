// Copyright (C) 2026 The dexgrasp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dexgrasp {

/// Broad failure class. The CLI maps each class onto a distinct exit code.
enum class ErrorClass {
  Config = 2,
  Perception = 3,
  Planning = 4,
  NoFeasibleGrasp = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), class_(cls), kind_(std::move(kind)) {}

  ErrorClass error_class() const noexcept { return class_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorClass class_;
  std::string kind_;
};

#define DEXGRASP_DEFINE_ERROR(Name, Class)                                    \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& what = {}) : Error(Class, #Name, what) {} \
  }

// configuration and file schema
DEXGRASP_DEFINE_ERROR(ConfigError, ErrorClass::Config);
DEXGRASP_DEFINE_ERROR(ValidationError, ErrorClass::Config);
DEXGRASP_DEFINE_ERROR(MissingField, ErrorClass::Config);
DEXGRASP_DEFINE_ERROR(IoError, ErrorClass::Config);

// perception: scene io, enrichment, features
DEXGRASP_DEFINE_ERROR(EmptySelection, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(EmptyMask, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(NoValidDepth, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(InsufficientSupport, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(TooFewPoints, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(ZeroDirection, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(ProviderUnavailable, ErrorClass::Perception);
DEXGRASP_DEFINE_ERROR(EmptyTranscript, ErrorClass::Perception);

// grasp planning
DEXGRASP_DEFINE_ERROR(NoIntersection, ErrorClass::Planning);
DEXGRASP_DEFINE_ERROR(OutOfRange, ErrorClass::Planning);
DEXGRASP_DEFINE_ERROR(JointLimit, ErrorClass::Planning);
DEXGRASP_DEFINE_ERROR(NoContacts, ErrorClass::Planning);
DEXGRASP_DEFINE_ERROR(NoCandidates, ErrorClass::Planning);
DEXGRASP_DEFINE_ERROR(NoForceClosureCandidate, ErrorClass::Planning);

DEXGRASP_DEFINE_ERROR(NoFeasibleGrasp, ErrorClass::NoFeasibleGrasp);

#undef DEXGRASP_DEFINE_ERROR

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorClass::Config, "ParseError", "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The spoken description does not match the scene well enough to proceed.
class ClarificationNeeded : public Error {
 public:
  ClarificationNeeded(std::string transcript, double alignment)
      : Error(ErrorClass::Perception, "ClarificationNeeded",
              "alignment " + std::to_string(alignment) + " for \"" + transcript + "\""),
        transcript_(std::move(transcript)),
        alignment_(alignment) {}
  const std::string& transcript() const noexcept { return transcript_; }
  double alignment() const noexcept { return alignment_; }

 private:
  std::string transcript_;
  double alignment_;
};

/// Wrench set spans fewer than six affine dimensions.
class DegenerateHull : public Error {
 public:
  explicit DegenerateHull(int affine_dim)
      : Error(ErrorClass::Planning, "DegenerateHull", "affine dimension " + std::to_string(affine_dim)),
        affine_dim_(affine_dim) {}
  int affine_dim() const noexcept { return affine_dim_; }

 private:
  int affine_dim_;
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(double residual)
      : Error(ErrorClass::Planning, "NoConvergence", "best residual " + std::to_string(residual)),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace dexgrasp

#pragma once

#include <stdexcept>
#include <string>

namespace wepr {

// Base class for all library errors. Subclasses map 1:1 to the CLI's
// nonzero exit codes (see tools/wepr_main.cpp).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent external input (API responses, JSONL lines).
class IngestError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation, or a
// shape/schema mismatch (e.g. model K vs data K).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Training cannot proceed (degenerate labels, non-finite loss).
class TrainError : public Error {
 public:
  using Error::Error;
};

// Grouped split cannot be formed (fewer than two query groups).
class SplitError : public Error {
 public:
  using Error::Error;
};

// Metric undefined on the given inputs (single class, no positives).
class MetricError : public Error {
 public:
  using Error::Error;
};

// Judge endpoint failure after retries, or missing credentials.
class JudgeError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wepr

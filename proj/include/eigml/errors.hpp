#pragma once

#include <stdexcept>
#include <string>

namespace eigml {

// Hyperparameter or configuration out of bounds.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Shapes of the inputs do not agree (or are empty where data is required).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Empty observation set where at least one is required.
class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NotFittedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The regularized kernel system could not be factored (singular with lambda == 0).
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV content; the message carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model archive problems: wrong kind, unsupported version, missing fields.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eigml

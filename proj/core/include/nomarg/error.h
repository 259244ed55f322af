#ifndef NOMARG_ERROR_H_
#define NOMARG_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nomarg {

// Base class for every error caused by bad input (malformed files, unknown
// ids, invalid arguments). The CLI maps these to exit code 1; anything else
// escaping is treated as an internal failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized data: CoNLL-U lines, NAVF/bank binaries, JSON rows.
// `line` is 1-based, 0 when the format has no line structure.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& reason)
      : Error(line ? "line " + std::to_string(line) + ": " + reason : reason),
        line_(line) {}
  explicit FormatError(const std::string& reason) : FormatError(0, reason) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A sentence whose primary arcs do not form a single-rooted tree.
class StructureError : public Error {
 public:
  StructureError(const std::string& sent_id, const std::string& reason)
      : Error("sentence '" + sent_id + "': " + reason), sent_id_(sent_id) {}

  const std::string& sent_id() const { return sent_id_; }

 private:
  std::string sent_id_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Numeric precondition failures, e.g. cosine of a zero-norm vector.
class DomainError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class OutOfVocabularyError : public LookupError {
 public:
  using LookupError::LookupError;
};

class BuildError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInstanceError : public Error {
 public:
  using Error::Error;
};

}  // namespace nomarg

#endif  // NOMARG_ERROR_H_

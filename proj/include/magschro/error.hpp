#pragma once

#include <stdexcept>
#include <string>

namespace magschro {

/// Malformed or inconsistent input: unknown vertices, schema violations,
/// expression syntax errors. `where()` is a JSON pointer, a line/column, or
/// a vertex id depending on the producer.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::string where = {})
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// A computation on a lazy graph ran out of its exploration budget.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An estimate check was asked to run on data that violates its hypotheses.
class CheckRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace magschro

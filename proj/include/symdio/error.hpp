#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace symdio {

/// Every failure raised by the library carries a stable name (for example
/// "InexactDivision" or "KnownRootMissing") so that reports stay greppable.
/// `usage` errors come from malformed input; `math` errors are classified
/// mathematical outcomes of a well-formed request.
class Error : public std::runtime_error {
 public:
  enum class Category { usage, math };

  Error(std::string name, const std::string& detail,
        Category category = Category::math)
      : std::runtime_error(name + ": " + detail),
        name_(std::move(name)),
        detail_(detail),
        category_(category) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& detail() const noexcept { return detail_; }
  Category category() const noexcept { return category_; }

 private:
  std::string name_;
  std::string detail_;
  Category category_;
};

inline Error usage_error(std::string name, const std::string& detail) {
  return Error(std::move(name), detail, Error::Category::usage);
}

inline Error math_error(std::string name, const std::string& detail) {
  return Error(std::move(name), detail, Error::Category::math);
}

}  // namespace symdio

#pragma once

#include <stdexcept>
#include <string>

namespace superloop {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used in the CLI's structured error output.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

struct SizeMismatch : Error {
  explicit SizeMismatch(const std::string& w) : Error("size_mismatch", w) {}
};
struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& w) : Error("index_out_of_range", w) {}
};
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error("invalid_argument", w) {}
};
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& w) : Error("cap_exceeded", w) {}
};
struct SingularBlock : Error {
  explicit SingularBlock(const std::string& w) : Error("singular_block", w) {}
};
struct NoPerturbativeSolution : Error {
  explicit NoPerturbativeSolution(const std::string& w) : Error("no_perturbative_solution", w) {}
};
struct DegenerateCurve : Error {
  explicit DegenerateCurve(const std::string& w) : Error("degenerate_curve", w) {}
};
struct NonSimpleBranchPoint : Error {
  explicit NonSimpleBranchPoint(const std::string& w) : Error("non_simple_branch_point", w) {}
};
struct FailedCheck : Error {
  explicit FailedCheck(const std::string& w) : Error("failed_check", w) {}
};
struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& w) : Error("internal_consistency", w) {}
};

}  // namespace superloop

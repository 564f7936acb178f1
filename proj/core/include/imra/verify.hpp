#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace imra {

struct CheckResult {
  std::string suite;
  std::string name;
  enum class Status { Pass, Fail, Skip } status = Status::Pass;
  std::string detail;
  double seconds = 0.0;

  bool passed() const noexcept { return status != Status::Fail; }
};

struct VerifyOptions {
  std::optional<int> dim;    // restrict dimension-dependent checks
  std::optional<int> order;  // restrict Deslauriers-Dubuc orders
  std::uint64_t seed = 20240601;
};

/// Runs the identity suites (filters, scaling, tensor, transform, besov,
/// ordering, io). `on_result` is called as each check finishes.
std::vector<CheckResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS suite/name: detail (0.12 s)"
std::string format_check(const CheckResult& r);

}  // namespace imra

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqv/errors.hpp"
#include "mqv/json_io.hpp"

namespace mqv {

class UnknownSuite : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

struct InstanceResult {
  std::size_t id = 0;
  bool passed = false;
  std::string label;   // shape and parameters of the instance
  std::string detail;  // failed checks, or the error that stopped the instance
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<InstanceResult> instances;  // sorted by id
  std::vector<std::string> warnings;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
};

struct SuiteInfo {
  std::string name;
  std::size_t default_count = 0;
  std::string description;
};

const std::vector<SuiteInfo>& suite_catalog();

/// Instance k draws from a generator seeded by (seed, k), so results do not depend on
/// the thread count. threads = 0 uses the hardware concurrency.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t count, unsigned threads = 0);

Json suite_report_to_json(const SuiteReport& r);

}  // namespace mqv

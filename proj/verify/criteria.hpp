#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace psitrop::verify {

enum class Level { smoke, desk };

struct Options {
  Level level = Level::desk;
  std::uint64_t seed = 20240917;
};

struct Check {
  std::string name, expected, actual;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  double budget = 0;  // wall-clock limit in seconds
  bool pass() const;
};

constexpr int kCriteria = 9;

CriterionResult run_criterion(int id, const Options& opt);
std::vector<CriterionResult> run_all(const Options& opt);

// Deterministic report: timings are left out.
nlohmann::json to_json(const CriterionResult& r);

}  // namespace psitrop::verify

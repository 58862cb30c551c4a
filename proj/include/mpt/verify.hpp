#ifndef MPT_VERIFY_HPP
#define MPT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mpt {

// One named invariant: the worst observed value of `metric` over all trials
// and the tolerance it is compared against.
struct Check {
  std::string name;
  double metric = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const Check& c);

const std::vector<std::string>& verify_suites();
// Throws InvalidArgument for an unknown suite.
std::vector<Check> run_suite(const std::string& suite, int trials, std::uint64_t seed);

}  // namespace mpt

#endif

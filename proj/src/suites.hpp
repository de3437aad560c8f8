/* Named check suites over a configured model and category: law checks,
   matching-limit verification, strictness and functoriality equations on
   generated instances, lifted-structure laws, equivalence decision agreement,
   funext lifting, homotopical closure and the Pi counterexample, the induced
   lifting classifications, and groupoid nondegeneracy. */
#pragma once

#include <cstdint>

#include "induced.hpp"

namespace cwa {

struct SuiteConfig {
  std::string model = "finset";  // finset | trivial | groupoid
  Val category;                  // parsed category JSON; null when unused
  bool use_marking = true;
  int bound = 2;
  std::uint64_t seed = 1;
  std::vector<std::string> sub;  // cosieve objects; minimal objects if empty
};

std::vector<std::string> suite_names();

// runs one suite; unknown names throw, failures are report entries
Report run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace cwa

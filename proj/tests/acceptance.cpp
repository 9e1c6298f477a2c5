#include <cstdlib>
#include <iostream>

#include "mueg/acceptance/acceptance.hpp"

int main(int argc, char** argv) {
  mueg::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  mueg::run_acceptance(opt, [&](const mueg::CriterionResult& r) {
    std::cout << mueg::summary_line(r) << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}

// One line per acceptance criterion; nonzero exit when any is red.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "percolab/suite.hpp"

int main(int argc, char** argv) {
  double scale = 1.0;
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--scale=", 0) == 0) {
      scale = std::atof(a.c_str() + 8);
    } else {
      which.push_back(std::atoi(a.c_str()));
    }
  }
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);
  int red = 0;
  for (int id : which) {
    const auto r = percolab::run_criterion(id, scale, 20261017);
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
    red += !r.pass;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(which.size()) - red, which.size());
  return red == 0 ? 0 : 1;
}

#include "flowsched/cli.hpp"

int main(int argc, char** argv) {
  return flowsched::run(std::vector<std::string>(argv + 1, argv + argc));
}

#include <iostream>

#include "lswave/acceptance.hpp"

int main() {
  const int failures = lswave::run_acceptance(std::cout);
  return failures == 0 ? 0 : 1;
}

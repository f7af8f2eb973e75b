// Runs the full acceptance suite and prints one pass/fail line per criterion.

#include <cstdlib>
#include <iostream>

#include "solenoid/verify.hpp"

int main() {
  solenoid::VerifyConfig cfg;
  if (const char* env = std::getenv("SOLENOID_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  return solenoid::run_verify(cfg, std::cout);
}

// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "sbnb/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return sbnb::run_cli(args, std::cout, std::cerr);
}

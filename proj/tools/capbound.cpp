#include <iostream>

#include "capsdp/cli.hpp"

int main(int argc, char** argv) {
  capsdp::RunConfig config;
  if (auto code = capsdp::parse_command_line(argc, argv, config, std::cout, std::cerr)) {
    return *code;
  }
  return capsdp::run(config, std::cout, std::cerr);
}

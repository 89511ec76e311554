#include <cstdio>

#include "cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = nlsb::cli::parse_config(argc, argv);
  if (!parsed.config) {
    std::fputs(parsed.message.c_str(), parsed.exit_code ? stderr : stdout);
    std::fputc('\n', parsed.exit_code ? stderr : stdout);
    return parsed.exit_code;
  }
  return nlsb::cli::run(*parsed.config);
}

// CLI entry point. Subcommands are registered in cli.hpp; this file only
// forwards argv.

#include "bilip/common.hpp"

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "bilip: no subcommands wired up yet\n");
  return 1;
}

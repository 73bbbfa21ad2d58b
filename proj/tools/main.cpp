#include "cli.hpp"

#include <unistd.h>

int
main(int argc, char** argv)
{
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv + 1, argv + argc);
  bsprng::cli::Io io{ std::cout, std::cerr, std::cin, isatty(STDOUT_FILENO) != 0 };
  const int rc = bsprng::cli::run(args, io);
  std::cout.flush();
  return rc;
}

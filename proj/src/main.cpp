#include "susytrm/cli.hpp"

int main(int argc, char** argv) {
  return susytrm::cli::run_cli({argv + 1, argv + argc});
}

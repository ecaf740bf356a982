#include "mitt/cli.hpp"

int main(int argc, char** argv) { return mitt::cli::dispatch(argc, argv); }

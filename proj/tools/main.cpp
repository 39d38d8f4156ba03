#include "cli.hpp"

int main(int argc, char** argv) { return confset::cli::dispatch(argc, argv); }

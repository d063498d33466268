#include "llema/cli/app.hpp"

int main(int argc, char** argv) { return llema::cli::main(argc, argv); }

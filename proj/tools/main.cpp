#include "evshare/commands.hpp"

int main(int argc, char** argv) { return evshare::cli::run(argc, argv); }

#include "commands.hpp"

int main(int argc, char** argv) { return tvbayes::cli::run(argc, argv); }

#include "iwasawa/cli.hpp"

int main(int argc, char** argv) { return iwasawa::cli::run(argc, argv); }

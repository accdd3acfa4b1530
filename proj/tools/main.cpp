#include "iwasawa/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return iwasawa::dispatch(argc, argv, std::cout, std::cerr); }

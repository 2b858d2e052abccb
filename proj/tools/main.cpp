/// @file  main.cpp
/// @brief Entry point of the `lloc` tool.

#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
	return lloc::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}

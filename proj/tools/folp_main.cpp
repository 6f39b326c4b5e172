#include <iostream>

#include "folp/cli.hpp"

int main(int argc, char** argv) {
	return folp::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}

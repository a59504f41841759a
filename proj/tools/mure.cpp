#include <iostream>
#include <string>
#include <vector>

#include "mure/cli.hpp"

int main(int argc, char** argv) {
	std::vector<std::string> args(argv + 1, argv + argc);
	return mure::run(args, std::cout, std::cerr);
}

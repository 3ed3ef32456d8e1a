#include <iostream>

#include "billiard/experiments.hpp"

int main(int argc, char** argv) { return billiard::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "psewer/app.hpp"

int main(int argc, char** argv) { return psewer::run_app(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "tfc/cli.hpp"

int main(int argc, char** argv)
{
    return tfc::cli::run(argc, argv, std::cout, std::cerr);
}

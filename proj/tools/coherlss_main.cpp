#include <iostream>

#include "coherlss/cli.hpp"

int main(int argc, char** argv)
{
    return coherlss::cli::run(argc, argv, std::cout, std::cerr);
}

#include <iostream>

#include <schroeder/cli.hpp>

int main(int argc, char **argv)
{
    return schroeder::cli::run(argc, argv, std::cout, std::cerr);
}

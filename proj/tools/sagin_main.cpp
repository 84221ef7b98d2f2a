// SPDX-License-Identifier: Apache-2.0

#include "sagin/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sagin::runCli({argv + 1, argv + argc}, std::cout, std::cerr);
}

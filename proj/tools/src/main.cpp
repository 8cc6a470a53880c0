// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include <string>
#include <vector>

#include "nhs_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nhs::cli::run(args);
}

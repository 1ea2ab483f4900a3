#include <transval/cli.hpp>

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    transval::cli::RunResult rr = transval::cli::run(args);
    if (!rr.out.empty()) std::cout << rr.out;
    if (!rr.err.empty()) std::cerr << rr.err;
    return rr.status;
}

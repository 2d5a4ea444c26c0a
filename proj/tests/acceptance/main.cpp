// Acceptance-criteria runner: one pass/fail line per criterion.
//
// Usage: difftomo_acceptance_runner [--criteria id...] [--work-dir dir]

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

int main(int argc, char** argv)
{
    std::vector<int> ids;
    std::string work_dir = "verify-out";
    for (int a = 1; a < argc; ++a)
    {
        const std::string arg = argv[a];
        if (arg == "--criteria")
        {
            while (a + 1 < argc && argv[a + 1][0] != '-')
                ids.push_back(std::atoi(argv[++a]));
        }
        else if (arg == "--work-dir" && a + 1 < argc)
        {
            work_dir = argv[++a];
        }
        else
        {
            std::cerr << "usage: " << argv[0]
                      << " [--criteria id...] [--work-dir dir]\n";
            return 2;
        }
    }
    if (ids.empty()) ids = dt::acceptance::all_criteria();
    const int failures =
        dt::acceptance::run_and_report(ids, work_dir, std::cout);
    return failures == 0 ? 0 : 3;
}

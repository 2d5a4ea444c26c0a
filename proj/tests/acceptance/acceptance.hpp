#ifndef DIFFTOMO_ACCEPTANCE_HPP
#define DIFFTOMO_ACCEPTANCE_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace dt::acceptance
{
    struct Result
    {
        int id = 0;
        bool pass = false;
        std::string detail;   // one-line measurement summary
    };

    // Criterion ids 1..11.
    std::vector<int> all_criteria();

    // Runs one criterion; artifacts (fields, datasets) go under work_dir.
    Result run_criterion(int id, const std::filesystem::path& work_dir);

    // Prints one "criterion N: PASS/FAIL (...)" line per id; returns the
    // number of failures.
    int run_and_report(const std::vector<int>& ids,
                       const std::filesystem::path& work_dir,
                       std::ostream& os);
}

#endif

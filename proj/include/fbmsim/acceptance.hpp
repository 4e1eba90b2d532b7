#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace fbmsim {

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "check_out";
};

// Runs the ten-point verification suite at desk scale, printing one
// PASS/FAIL line per criterion and writing supporting CSV/JSON artifacts
// into out_dir. Returns the number of failed criteria.
int run_acceptance(const AcceptanceOptions& options, std::ostream& log);

}  // namespace fbmsim

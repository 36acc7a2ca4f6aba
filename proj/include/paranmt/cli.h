#ifndef PARANMT_CLI_H_
#define PARANMT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace paranmt {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr unsigned long long kDefaultSeed = 1234;

// Entry point behind the `paranmt` binary. args excludes the program name.
// Returns 0 on success, 1 on a runtime error and 2 on a usage error; errors
// are written to `err` as one line.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// "# paranmt <version> argv=<args> seed=<seed>". --threads is left out of
// the recorded argv because it never changes results.
std::string ProvenanceLine(const std::vector<std::string>& args,
                           unsigned long long seed);

}  // namespace paranmt

#endif  // PARANMT_CLI_H_

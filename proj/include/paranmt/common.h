#ifndef PARANMT_COMMON_H_
#define PARANMT_COMMON_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace paranmt {

// All recoverable failures (bad input files, violated preconditions) are
// reported with this type. Messages are single-line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "path:line: message"
[[noreturn]] void ThrowAt(std::string_view path, size_t line,
                          std::string_view message);

// Splits on '\t' without collapsing empty fields.
std::vector<std::string_view> SplitTabs(std::string_view line);

// Lines starting with '#' and holding no tab are provenance/comment lines.
bool IsCommentLine(std::string_view line);

// Strict full-string parses; std::nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view text);
std::optional<long long> ParseInt(std::string_view text);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Fixed-point with the given number of decimals ("%.4f" style).
std::string FormatFixed(double value, int decimals);

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunks are
// disjoint, so callers that write only to their own slots get results that
// do not depend on the thread count.
void ParallelFor(size_t n, int threads,
                 const std::function<void(size_t, size_t)>& fn);

}  // namespace paranmt

#endif  // PARANMT_COMMON_H_

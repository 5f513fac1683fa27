#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ubsr/distributions.hpp"
#include "ubsr/errors.hpp"
#include "ubsr/estimator.hpp"
#include "ubsr/utility.hpp"

namespace ubsr {

/// A text spec did not match its grammar. The message quotes the grammar.
class GrammarError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline constexpr std::string_view kUtilityGrammar = "linear | hinge | blend[:a=<r>,tau=<r>]";
inline constexpr std::string_view kDistributionGrammar =
    "uniform:lo,hi | gauss:mu,sigma | exp:rate | point:z | discrete:v1:p1,v2:p2,... | "
    "mix:w1*<spec>|w2*<spec>|...  (wrap nested specs in parentheses)";
inline constexpr std::string_view kTailGrammar = "subgauss:<sigma> | subexp:<K>";

/// `blend` alone means a = 0.5, tau = 1.
Utility parse_utility(std::string_view text);
Distribution parse_distribution(std::string_view text);
/// `subgauss:<sigma>` or `subexp:<K>`.
TailSpec parse_tail(std::string_view text);

/// Parses a finite real; `what` names the field in the error.
double parse_real(std::string_view text, std::string_view what);
/// Comma-separated list of reals.
std::vector<double> parse_real_list(std::string_view text, std::string_view what);
/// Comma-separated list of positive integers.
std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view what);

}  // namespace ubsr

#include "ubsr/grammar.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace ubsr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_distribution(std::string_view text, const std::string& why) {
  throw GrammarError("invalid distribution '" + std::string(text) + "': " + why + "; expected " +
                     std::string(kDistributionGrammar));
}

// Splits on `sep` at parenthesis depth zero.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == sep && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

std::vector<double> reals(std::string_view body, std::string_view text, std::size_t expected) {
  std::vector<double> out;
  for (auto part : split_top(body, ',')) out.push_back(parse_real(part, "distribution parameter"));
  if (out.size() != expected) {
    bad_distribution(text, "expected " + std::to_string(expected) + " parameter(s), got " + std::to_string(out.size()));
  }
  return out;
}

}  // namespace

double parse_real(std::string_view text, std::string_view what) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw GrammarError("invalid " + std::string(what) + " '" + std::string(text) + "': expected a finite real number");
  }
  return v;
}

std::vector<double> parse_real_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (auto part : split_top(text, ',')) out.push_back(parse_real(part, what));
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (auto part : split_top(text, ',')) {
    const auto s = trim(part);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
      throw GrammarError("invalid " + std::string(what) + " '" + std::string(part) + "': expected a positive integer");
    }
    out.push_back(v);
  }
  return out;
}

Utility parse_utility(std::string_view text) {
  const auto s = trim(text);
  if (s == "linear") return Utility::linear();
  if (s == "hinge") return Utility::hinge();
  if (s == "blend") return Utility::blend(0.5, 1.0);
  if (s.starts_with("blend:")) {
    double a = 0.5;
    double tau = 1.0;
    for (auto kv : split_top(s.substr(6), ',')) {
      kv = trim(kv);
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) break;
      const auto name = trim(kv.substr(0, eq));
      if (name == "a") a = parse_real(kv.substr(eq + 1), "blend a");
      else if (name == "tau") tau = parse_real(kv.substr(eq + 1), "blend tau");
      else throw GrammarError("unknown blend parameter '" + std::string(name) + "'; expected " +
                              std::string(kUtilityGrammar));
    }
    return Utility::blend(a, tau);
  }
  throw GrammarError("invalid utility '" + std::string(text) + "'; expected " + std::string(kUtilityGrammar));
}

Distribution parse_distribution(std::string_view text) {
  auto s = trim(text);
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) bad_distribution(text, "missing ':'");
  const auto kind = s.substr(0, colon);
  const auto body = s.substr(colon + 1);

  if (kind == "uniform") {
    const auto p = reals(body, text, 2);
    return Distribution::uniform(p[0], p[1]);
  }
  if (kind == "gauss") {
    const auto p = reals(body, text, 2);
    return Distribution::gaussian(p[0], p[1]);
  }
  if (kind == "exp") return Distribution::exponential(reals(body, text, 1)[0]);
  if (kind == "point") return Distribution::point_mass(reals(body, text, 1)[0]);
  if (kind == "discrete") {
    std::vector<Atom> atoms;
    for (auto part : split_top(body, ',')) {
      const auto sep = part.find(':');
      if (sep == std::string_view::npos) bad_distribution(text, "discrete atom '" + std::string(part) + "' needs value:prob");
      atoms.push_back({parse_real(part.substr(0, sep), "atom value"), parse_real(part.substr(sep + 1), "atom probability")});
    }
    return Distribution::discrete(std::move(atoms));
  }
  if (kind == "mix") {
    std::vector<MixtureComponent> comps;
    for (auto part : split_top(body, '|')) {
      const auto star = part.find('*');
      if (star == std::string_view::npos) bad_distribution(text, "mixture component '" + std::string(part) + "' needs weight*spec");
      comps.push_back({parse_distribution(part.substr(star + 1)), parse_real(part.substr(0, star), "mixture weight")});
    }
    return Distribution::mixture(std::move(comps));
  }
  bad_distribution(text, "unknown kind '" + std::string(kind) + "'");
}

TailSpec parse_tail(std::string_view text) {
  const auto s = trim(text);
  const auto colon = s.find(':');
  const auto kind = s.substr(0, colon);
  if (colon != std::string_view::npos && (kind == "subgauss" || kind == "subexp")) {
    const double p = parse_real(s.substr(colon + 1), "tail parameter");
    if (!(p > 0.0)) throw GrammarError("tail parameter must be positive, got '" + std::string(s.substr(colon + 1)) + "'");
    return {kind == "subgauss" ? TailSpec::Kind::SubGaussian : TailSpec::Kind::SubExponential, p};
  }
  throw GrammarError("invalid tail '" + std::string(text) + "'; expected " + std::string(kTailGrammar));
}

}  // namespace ubsr

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kur::cli {

enum class Command { CheckAtlas, Count, Deform, Fiber, Tangent, Reps, Casson, CheckHomology };
enum class Format { Json, Human };

struct RunConfig {
  Command command = Command::CheckAtlas;
  std::vector<std::string> inputs;
  std::string morphism;  // tangent
  Format format = Format::Json;

  double eps = 1e-3;
  std::uint64_t seed = 0;
  double margin = 0.1;
  int density = 0;
  int grid = 11;
  int base_dim = -1;  // fiber; -1 = take it from the base maps

  int starts = 100000;
  double radius = 0.1;
  int order = 3;
  std::vector<int> bits;
  int sigma = 1;
  bool allow_positive_dim = false;
  bool allow_reducible = false;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// Throws std::invalid_argument naming the first option out of bounds.
void validate(const RunConfig& c);

// Parses argv. On --help or a usage error, returns the exit code to use after
// printing to out / err; otherwise fills `config` and returns nullopt.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kur::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdiw::cli {

/// A named scientific check failed (reproduction targets, guard bounds).
/// Mapped to exit code 3, distinct from parse/validation problems (2).
class AssertionFailure : public std::runtime_error {
 public:
  explicit AssertionFailure(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAssertion = 3;

/// "lo:hi:step" (inclusive) or a comma list or a single number.
std::vector<double> parse_grid(const std::string& spec);

struct WitnessArgs {
  std::string state_path;
  int copies = 0;  // 0: the full ladder
  std::string method = "eigen";
  bool json = false;
};
int cmd_witness(const WitnessArgs& args, std::ostream& out);

struct MdiRunArgs {
  std::string state_path;
  bool universal = false;
  std::string ensemble = "table1";
  std::string witness = "auto";
  long long shots = 0;
  std::uint64_t seed = 1;
};
int cmd_mdi_run(const MdiRunArgs& args, std::ostream& out);

struct SweepConfig {
  std::string family;
  std::string param;
  std::string xi = "1";
  std::string mu = "1";
  std::string delta = "0";
  std::string out_path;
};
int cmd_noise_sweep(const SweepConfig& config, std::ostream& out);

struct ReproduceArgs {
  std::string name;
  std::string out_dir;
};
int cmd_reproduce(const ReproduceArgs& args, std::ostream& out);

}  // namespace mdiw::cli

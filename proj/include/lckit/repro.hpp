#ifndef LCKIT_REPRO_HPP
#define LCKIT_REPRO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lckit {

/// A reproduced quantity. `Within` requires |computed - expected| <=
/// tolerance; `AtLeast` requires computed >= expected, reported as the
/// shortfall max(0, expected - computed) against a tolerance of 0.
struct ReproEntry {
  enum class Check { Within, AtLeast };

  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Check check = Check::Within;

  double residual() const noexcept;
  bool passes() const noexcept { return residual() <= tolerance; }
};

struct ReproReport {
  std::string case_id;
  std::vector<ReproEntry> entries;

  bool passes() const noexcept;
};

/// Known case ids: eq5, eq30, rbgame, chsh, superdet.
const std::vector<std::string>& repro_cases();

/// Returns nullopt for an unknown case id.
std::optional<ReproReport> run_repro(std::string_view case_id);

}  // namespace lckit

#endif  // LCKIT_REPRO_HPP

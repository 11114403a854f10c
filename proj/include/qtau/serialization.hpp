#ifndef QTAU_SERIALIZATION_HPP
#define QTAU_SERIALIZATION_HPP

#include <string>

#include <json.hpp>

#include "qtau/bounds.hpp"
#include "qtau/channels.hpp"
#include "qtau/dynamics.hpp"
#include "qtau/states.hpp"

namespace qtau {

// Density matrices and pure states share one JSON shape:
//   {"d1": ..., "d2": ..., "re": [...], "im": [...]}
// with row-major entries for matrices and plain vectors for pure states;
// the array length tells the two apart.

nlohmann::json to_json(const DensityMatrix& rho);
nlohmann::json to_json(const PureState& psi);

struct LoadedState {
  std::optional<PureState> pure;
  std::optional<DensityMatrix> density;
};

LoadedState state_from_json(const nlohmann::json& j);

// Channels: {"dim": ..., "kraus": [{"re": [[...]], "im": [[...]]}, ...]}
// or the shorthand {"builtin": "depolarizing"|"phase_damping", "dim": ..., "eps": ...}.
nlohmann::json to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const nlohmann::json& j);

// {"total": ..., "components": [{"p","r","pp","rp","c"}, ...]}
nlohmann::json to_json(const TauBreakdown& breakdown);

/// CSV with header eps,tau,upper,lower,closed_form at 17 significant
/// digits; absent values stay empty.
std::string to_csv(const SweepResult& result);

/// Full-precision decimal rendering (17 significant digits).
std::string format_double(double v);

nlohmann::json parse_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qtau

#endif

#pragma once

#include <string>

#include "spot/clock_model.hpp"

namespace spot::bench {

/// Parses a command-line clock-model description:
///   linear:skew_ppb=SK
///   piecewise:period_s=P,amplitude_ppb=A[,base_ppb=B]
///       (rate alternates +A/-A every P seconds)
///   random-walk:wander_ppb=W[,base_ppb=B][,seed=S][,horizon_h=H]
/// The model epoch is placed at `epoch`.
ClockModel parse_model_spec(const std::string& spec, TimePoint epoch);

}  // namespace spot::bench

#pragma once

#include <array>
#include <functional>
#include <string>

#include "photonef/config.hpp"
#include "photonef/factorization.hpp"

namespace photonef {

// States at steps -2, -1, 0, +1, +2 around a stored frame.
using FrameWindow = std::array<const SpinorField*, 5>;

// Propagates a grid run and calls `visit` at every stored frame and
// snapshot, in time order, with the neighbouring states filled in.
void sweep_frames(const RunConfig& cfg,
                  const std::function<void(const FrameWindow&, bool stored, bool snapshot)>& visit);

// %.17g, or "nan"
std::string format_number(double x);
// shortest label for a snapshot file name
std::string format_time_label(double t);

// writes manifest.json, autocorr.csv, populations.csv, snapshot_<t>.csv
void run(const RunConfig& cfg);

}  // namespace photonef

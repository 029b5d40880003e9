#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "jinxin/solvers.hpp"

namespace jinxin {

/// Header `t,field,<x_0>,...,<x_{n-1}>` (node coordinates), then one row per
/// recorded time and component: t, component name (w1/w2, f1/f2 or wp), values.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Binary layout, all little-endian:
///   char[4] "JXT1"; u32 version (1); u32 representation (0 C-D, 1 kinetic, 2 scalar);
///   u64 n; u64 components; u64 frames; f64 length, epsilon, lambda, a;
///   frames x { f64 t; components x n f64 values }.
/// The nonlinearity is not stored; a read trajectory carries h = none.
void write_trajectory_binary(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_binary(std::istream& is);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file. Throws Error on I/O failure.
void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body,
                      bool binary = false);

}  // namespace jinxin

#pragma once

#include <iosfwd>

#include "jumpfrac/sde.hpp"

namespace jumpfrac {

/// CSV `t,m,m_left,jump,x,y,z`; the jump column is empty on non-jump rows.
void write_path_csv(const SamplePath& path, std::ostream& out);

/// Binary layout, little-endian throughout: magic "JFPATH01", version byte
/// (1), node count (u64), column count (u64, 8), x0 (f64), then the
/// columns t, m, m_left, jump, x, y, z, is_jump as contiguous f64 arrays.
void write_path_binary(const SamplePath& path, std::ostream& out);
SamplePath read_path_binary(std::istream& in);

}  // namespace jumpfrac

#pragma once

#include "megt/netgen.hpp"

#include <filesystem>
#include <iosfwd>

namespace megt {

// Plain-text multiplex format:
//
//   multiplex v1 <N> <M>
//   omega <inter-layer strength>          (optional)
//   layer <layer> <src> <dst> <weight>    (one line per edge, src < dst)
//   delta <i> <j> <value>                 (i < j, zero entries omitted)
//
// Indices are 0-based, '#' starts a comment line. Reals are written with 17
// significant digits so a round trip is exact.

void write_multiplex(std::ostream& out, const MultiplexNetwork& net);
void write_multiplex(const std::filesystem::path& path, const MultiplexNetwork& net);

/// Throws DataError on malformed input.
MultiplexNetwork read_multiplex(std::istream& in);
MultiplexNetwork read_multiplex(const std::filesystem::path& path);

} // namespace megt

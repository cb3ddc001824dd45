#pragma once

#include <string>

#include "hsob/covering.hpp"
#include "hsob/geometry.hpp"

namespace hsob {

/// Domain document:
///   {"kind": "rectangle", "lo": [..], "hi": [..], "bbox": {...}}
///   {"kind": "polygon", "vertices": [[x, y], ...], "bbox": {...}}
///   {"kind": "disk", "center": [x, y], "radius": r, "sides": k, "bbox": {...}}
///   {"kind": "graph", "y0": a, "y1": b, "samples": [...], "lipschitz": L, "bbox": {...}}
///   {"kind": "complement", "inner": {...}, "bbox": {...}}
/// with bbox {"lo": [..], "hi": [..]}; the dimension is the length of bbox.lo.
/// Malformed documents raise ErrorKind::config.
DomainShape domain_from_json(const std::string& text);
std::string domain_json(const DomainShape& domain);

std::string cover_json(const BallCover& cover);
std::string chain_json(const ChainOfBalls& chain);

}  // namespace hsob

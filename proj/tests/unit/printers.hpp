#pragma once

#include <ostream>

#include "fglab/series.hpp"

namespace fglab {

inline void PrintTo(const UnramifiedRingElem& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const TruncSeries1& s, std::ostream* os) { *os << s.to_string(); }
inline void PrintTo(const TruncSeries2& s, std::ostream* os) { *os << s.to_string(); }

}  // namespace fglab

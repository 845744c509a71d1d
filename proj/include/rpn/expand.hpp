#pragma once

#include "rpn/net.hpp"

namespace rpn {

// Ground net with one transition per injective, type-respecting choice of
// tokens for each transition's arc variables. Condition-only variables stay free.
// Expanded transitions are named "t(u=a1,v=b2)".
Net expand_to_ground(const Net& net);

}  // namespace rpn

#pragma once

#include <string>

#include "dist.hpp"
#include "maps.hpp"

namespace kummerlab {

// Law grammar: name:comma-separated-params
//   kummer:alpha,a,b,c | gamma:shape,rate | gig:p,a,b | beta1:p,q |
//   beta2:p,q | invgamma:b,c
Law parse_law(const std::string& spec);
std::string law_to_string(const Law& law);

// Map grammar:
//   psi:alpha,beta | dkdv:alpha,beta | udkdv:J,K | dtoda | my | lukacs |
//   phi:kind:n[,alpha,beta]   with kind in {lukacs,kg,my,kdv}, n a number or "inf"
MapSpec parse_map(const std::string& spec);

}  // namespace kummerlab

#ifndef POLCOH_FITTING_HPP
#define POLCOH_FITTING_HPP

#include "polcoh/fitting/husimi_fit.hpp"
#include "polcoh/fitting/mc_errors.hpp"

#endif  // POLCOH_FITTING_HPP

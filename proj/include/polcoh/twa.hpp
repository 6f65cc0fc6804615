#ifndef POLCOH_TWA_HPP
#define POLCOH_TWA_HPP

#include "polcoh/twa/archive.hpp"
#include "polcoh/twa/ensemble.hpp"
#include "polcoh/twa/fft.hpp"
#include "polcoh/twa/field.hpp"
#include "polcoh/twa/model.hpp"
#include "polcoh/twa/rng.hpp"
#include "polcoh/twa/stepper.hpp"

#endif  // POLCOH_TWA_HPP

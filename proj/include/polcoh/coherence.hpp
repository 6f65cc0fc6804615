#ifndef POLCOH_COHERENCE_HPP
#define POLCOH_COHERENCE_HPP

#include "polcoh/coherence/displaced_thermal.hpp"
#include "polcoh/coherence/entanglement.hpp"
#include "polcoh/coherence/fock.hpp"
#include "polcoh/coherence/phase_space.hpp"
#include "polcoh/coherence/special.hpp"

#endif  // POLCOH_COHERENCE_HPP

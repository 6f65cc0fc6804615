#ifndef POLCOH_OBSERVABLES_HPP
#define POLCOH_OBSERVABLES_HPP

#include "polcoh/observables/g1.hpp"
#include "polcoh/observables/kspace.hpp"
#include "polcoh/observables/number_stats.hpp"
#include "polcoh/observables/ordering.hpp"
#include "polcoh/observables/report.hpp"
#include "polcoh/observables/statistics.hpp"

#endif  // POLCOH_OBSERVABLES_HPP

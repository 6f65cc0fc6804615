#ifndef POLCOH_HOMODYNE_HPP
#define POLCOH_HOMODYNE_HPP

#include "polcoh/homodyne/generator.hpp"
#include "polcoh/homodyne/histogram.hpp"
#include "polcoh/homodyne/photon_stats.hpp"
#include "polcoh/homodyne/preprocess.hpp"
#include "polcoh/homodyne/stream.hpp"

#endif  // POLCOH_HOMODYNE_HPP

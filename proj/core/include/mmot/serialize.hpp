#pragma once

#include <string>

#include "mmot/cost.hpp"
#include "mmot/definetti.hpp"
#include "mmot/fourier.hpp"
#include "mmot/measure.hpp"
#include "mmot/representability.hpp"
#include "mmot/solver.hpp"

namespace mmot::serialize {

// Canonical JSON: object keys sorted, two-space indentation, doubles in
// shortest round-trip decimal form (bit-exact on reload), infinities as the
// strings "inf"/"-inf". Grids embed as {"dimension", "points", "period"?};
// weight vectors are flat lists with a "scheme" field ("dense" row-major, or
// "multiset" in the lexicographic nondecreasing-tuple order of
// multiset.hpp).

std::string to_json(const DiscreteMeasure& mu);
std::string to_json(const PairMeasure& mu2);
std::string to_json(const NBodyMeasure& gamma);
std::string to_json(const Mixture& nu);
std::string to_json(const SolveReport& report);
std::string to_json(const RepresentabilityAnswer& answer);
std::string to_json(const ClassifyResult& result);
std::string to_json(const fourier::VarianceDecomposition& decomposition);

DiscreteMeasure discrete_from_json(const std::string& text);
PairMeasure pair_from_json(const std::string& text);
NBodyMeasure nbody_from_json(const std::string& text);
Mixture mixture_from_json(const std::string& text);

// Spectrum rows "index,real,imag" with an RFC 4180 header.
std::string spectrum_to_csv(const fourier::TorusSpectrum& spectrum);

}  // namespace mmot::serialize

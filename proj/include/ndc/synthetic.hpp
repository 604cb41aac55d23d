#pragma once

#include <cstdint>

#include "ndc/dataset.hpp"

namespace ndc {

// Two spherical Gaussians at +-separation/2 along a seed-drawn direction,
// with exact class counts.
Dataset make_two_gaussians(std::size_t n_pos, std::size_t n_neg, std::size_t dim,
                           double separation, std::uint64_t seed);

// Standard-normal features labeled by a seed-drawn hyperplane through the
// origin, then a flip_prob fraction of labels inverted.
Dataset make_noisy_separable(std::size_t n, std::size_t dim, double flip_prob,
                             std::uint64_t seed);

}  // namespace ndc

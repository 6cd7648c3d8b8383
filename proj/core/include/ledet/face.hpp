#pragma once

#include <string>
#include <vector>

#include "ledet/types.hpp"

namespace ledet::face {

// Per action unit: mean presence and mean intensity; then the mean and
// population standard deviation of the per-frame positivity indicator
// (intensity(AU6) + intensity(AU12)) / 2 - intensity(AU15).
// Dimension: 2 * |au_set| + 2.
std::vector<std::string> feature_names(const std::vector<std::string>& au_set);

// Throws ConfigError when `au_set` is missing AU6, AU12 or AU15.
void check_au_set(const std::vector<std::string>& au_set);

std::vector<double> compute_face_features(const AuStream& aus, int participant,
                                          const std::vector<std::string>& au_set);

} // namespace ledet::face

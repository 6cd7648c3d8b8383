#include "ledet/face.hpp"

#include <algorithm>
#include <cmath>

#include "ledet/errors.hpp"

namespace ledet::face {

std::vector<std::string> feature_names(const std::vector<std::string>& au_set) {
    std::vector<std::string> names;
    names.reserve(2 * au_set.size() + 2);
    for (const std::string& au : au_set) {
        names.push_back(au + "_presenceMean");
        names.push_back(au + "_intensityMean");
    }
    names.push_back("positivityMean");
    names.push_back("positivityStd");
    return names;
}

void check_au_set(const std::vector<std::string>& au_set) {
    for (const char* needed : {"AU6", "AU12", "AU15"}) {
        if (std::find(au_set.begin(), au_set.end(), needed) == au_set.end()) {
            throw ConfigError(std::string("AU set must contain ") + needed +
                              " for the positivity indicator");
        }
    }
}

std::vector<double> compute_face_features(const AuStream& aus, int participant,
                                          const std::vector<std::string>& au_set) {
    check_au_set(au_set);
    if (participant < 0 || static_cast<std::size_t>(participant) >= aus.presence.size()) {
        throw ArgumentError("unknown participant index " + std::to_string(participant));
    }
    const std::size_t n_aus = aus.au_ids.size();
    const auto& presence = aus.presence[static_cast<std::size_t>(participant)];
    const auto& intensity = aus.intensity[static_cast<std::size_t>(participant)];
    const std::size_t frames = n_aus == 0 ? 0 : presence.size() / n_aus;
    if (frames == 0) throw ArgumentError("empty AU window");

    std::vector<std::size_t> au_idx;
    au_idx.reserve(au_set.size());
    for (const std::string& au : au_set) {
        const std::size_t a = aus.au_index(au);
        if (a == static_cast<std::size_t>(-1)) {
            throw ArgumentError("AU '" + au + "' is not in the stream's schema");
        }
        au_idx.push_back(a);
    }
    const std::size_t au6 = aus.au_index("AU6");
    const std::size_t au12 = aus.au_index("AU12");
    const std::size_t au15 = aus.au_index("AU15");

    std::vector<double> out;
    out.reserve(2 * au_set.size() + 2);
    const auto n = static_cast<double>(frames);
    for (const std::size_t a : au_idx) {
        double presence_sum = 0.0;
        double intensity_sum = 0.0;
        for (std::size_t f = 0; f < frames; ++f) {
            presence_sum += presence[f * n_aus + a];
            intensity_sum += intensity[f * n_aus + a];
        }
        out.push_back(presence_sum / n);
        out.push_back(intensity_sum / n);
    }

    double pos_sum = 0.0;
    std::vector<double> positivity(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        const double v = (intensity[f * n_aus + au6] + intensity[f * n_aus + au12]) / 2.0 -
                         intensity[f * n_aus + au15];
        positivity[f] = v;
        pos_sum += v;
    }
    const double pos_mean = pos_sum / n;
    double ss = 0.0;
    for (double v : positivity) ss += (v - pos_mean) * (v - pos_mean);

    out.push_back(pos_mean);
    out.push_back(std::sqrt(ss / n));
    return out;
}

} // namespace ledet::face

#pragma once

#include "droidtriage/dataset.hpp"

namespace droidtriage {

struct Prediction {
    Label label = Label::Benign;
    double score = 0; ///< malware score in [0, 1]

    bool operator==(const Prediction&) const = default;
};

/// MALWARE iff score > 0.5; an exact 0.5 stays BENIGN.
inline Label decide(double score)
{
    return score > 0.5 ? Label::Malware : Label::Benign;
}

inline Prediction make_prediction(double score)
{
    return {decide(score), score};
}

} // namespace droidtriage

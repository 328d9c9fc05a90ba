#pragma once

#include "xmlad/dataset.hpp"

namespace xmlad {

/// Which end of a detector's score range is the normal one.
enum class Polarity { HigherIsNormal, HigherIsAnomalous };

struct Verdict {
  double score = 0.0;
  Label label = Label::Normal;

  bool operator==(const Verdict&) const = default;
};

}  // namespace xmlad
